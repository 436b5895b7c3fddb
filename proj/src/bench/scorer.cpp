#include "optctl/bench/scorer.hpp"

#include <algorithm>

namespace optctl::bench {

namespace {

Verdict fail(FailureCategory category, std::string detail) {
    Verdict v;
    v.success = false;
    v.failure = category;
    v.detail = std::move(detail);
    return v;
}

Verdict pass(std::string detail = "ok") {
    Verdict v;
    v.success = true;
    v.detail = std::move(detail);
    return v;
}

struct IssuedCall {
    const tools::ToolCall* call;
    bool ok;
    bool mutating;
    bool matched = false;
};

// A call satisfies a step when the tool matches and the argument sets agree
// exactly: every ground-truth matcher accepts its value, and the call carries
// no argument the ground truth does not list.
bool call_matches_step(const IssuedCall& c, const GtStep& step) {
    if (c.call->tool != step.tool) return false;
    const json& args = c.call->args;
    if (!args.is_object()) return step.args.empty();
    for (const auto& [name, matcher] : step.args) {
        if (!args.contains(name)) {
            if (matcher.kind == ArgMatcher::Kind::any) continue;
            return false;
        }
        if (!matcher.matches(args.at(name))) return false;
    }
    for (const auto& [key, value] : args.items()) {
        if (!step.args.count(key)) return false;
    }
    return true;
}

}  // namespace

Verdict score(const TaskRecord& task, const agent::Transcript& transcript,
              const sim::Testbed& final_state, const json& baseline,
              const tools::Registry& registry) {
    std::vector<IssuedCall> calls;
    for (const auto* ex : transcript.exchanges()) {
        IssuedCall c;
        c.call = &ex->call;
        c.ok = ex->result.ok();
        const auto* spec = registry.find(ex->call.tool);
        c.mutating = spec != nullptr && spec->mutating;
        calls.push_back(c);
    }

    const GroundTruth& gt = task.ground_truth;

    if (gt.expectation == Expectation::reject) {
        for (const auto& c : calls) {
            if (c.mutating && c.ok) {
                return fail(FailureCategory::ForbiddenMutation,
                            "mutating tool '" + c.call->tool + "' executed on a task that must "
                            "be rejected");
            }
        }
        if (final_state.fingerprint() != baseline) {
            return fail(FailureCategory::ForbiddenMutation,
                        "device state changed on a task that must be rejected");
        }
        if (transcript.final_answer.empty()) {
            return fail(FailureCategory::StateMismatch,
                        "rejection requires a non-empty final answer naming the defect");
        }
        return pass("rejected with zero mutating dispatches");
    }

    // Any call to an unregistered name dominates the classification.
    for (const auto& c : calls) {
        if (registry.find(c.call->tool) == nullptr) {
            return fail(FailureCategory::NonexistentTool,
                        "call to undefined tool '" + c.call->tool + "'");
        }
    }

    // Unordered assignment first: each step claims one matching call.
    std::vector<int> assignment(gt.steps.size(), -1);
    for (size_t s = 0; s < gt.steps.size(); ++s) {
        for (size_t c = 0; c < calls.size(); ++c) {
            if (calls[c].matched) continue;
            if (call_matches_step(calls[c], gt.steps[s])) {
                calls[c].matched = true;
                assignment[s] = static_cast<int>(c);
                break;
            }
        }
    }

    for (size_t s = 0; s < gt.steps.size(); ++s) {
        if (assignment[s] >= 0) continue;
        const GtStep& step = gt.steps[s];
        // Same tool issued with different arguments?
        for (const auto& c : calls) {
            if (!c.matched && c.call->tool == step.tool) {
                return fail(FailureCategory::WrongArgs,
                            "tool '" + step.tool + "' called with wrong arguments: got " +
                                c.call->args.dump() + ", expected " +
                                step.canonical_args().dump());
            }
        }
        // A substitute call the ground truth never asked for?
        for (const auto& c : calls) {
            if (!c.matched) {
                return fail(FailureCategory::IncorrectTool,
                            "expected '" + step.tool + "', agent called '" + c.call->tool + "'");
            }
        }
        return fail(FailureCategory::MissingTool, "required tool '" + step.tool + "' was not invoked");
    }

    // Strict ordering: the steps must appear as a subsequence of the calls.
    // Forward greedy matching is complete for subsequence search, so a failed
    // pass means no order-respecting assignment exists.
    if (gt.ordering == Ordering::strict) {
        for (auto& c : calls) c.matched = false;
        size_t pos = 0;
        for (size_t s = 0; s < gt.steps.size(); ++s) {
            bool found = false;
            for (size_t c = pos; c < calls.size(); ++c) {
                if (call_matches_step(calls[c], gt.steps[s])) {
                    calls[c].matched = true;
                    pos = c + 1;
                    found = true;
                    break;
                }
            }
            if (!found) {
                return fail(FailureCategory::OrderViolation,
                            "step '" + gt.steps[s].tool +
                                "' was not executed in the required order");
            }
        }
    }

    // Extra mutating calls beyond the ground truth are a failure; extra reads
    // are allowed (agents may inspect state).
    for (const auto& c : calls) {
        if (!c.matched && c.mutating) {
            return fail(FailureCategory::IncorrectTool,
                        "unexpected mutating call '" + c.call->tool + "' beyond the ground truth");
        }
    }

    if (!evaluate_predicate(gt.predicate, final_state)) {
        return fail(FailureCategory::StateMismatch,
                    "final state does not satisfy predicate '" + gt.predicate.name + "'");
    }

    return pass();
}

}  // namespace optctl::bench
