#include "optctl/bench/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "optctl/sim/error.hpp"

namespace optctl::bench {

namespace {

std::string lower_first(std::string s) {
    if (!s.empty() && s[0] >= 'A' && s[0] <= 'Z') s[0] = static_cast<char>(s[0] - 'A' + 'a');
    return s;
}

std::string capitalize(std::string s) {
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

// Fixed template banks. Counts are part of the corpus contract:
// 5 paraphrase frames, 5 non-sequitur clauses, 3 role prefixes, 5 chain frames.

std::string single_paraphrase(int k, const BasicTask& t) {
    const auto& a = t.actions[0];
    switch (k) {
        case 0: return "Please " + a.phrase + ".";
        case 1: return "Using the " + t.device_label + ", " + a.phrase_no_device + ".";
        case 2: return "Operate the " + t.device_label + " so that " + t.outcome + ".";
        case 3: return "I need you to " + a.phrase + " right away.";
        default: return capitalize(a.phrase) + ", as part of today's link checkout.";
    }
}

std::string multi_paraphrase(int k, const BasicTask& t) {
    std::vector<std::string> ph;
    for (const auto& a : t.actions) ph.push_back(a.phrase);
    const bool triple = ph.size() == 3;
    switch (k) {
        case 0: {
            std::string s = "Please " + ph[0] + ", then " + ph[1];
            if (triple) s += ", then " + ph[2];
            return s + ".";
        }
        case 1: {
            std::string s = std::string(triple ? "Three" : "Two") + " steps: (1) " + ph[0] +
                            "; (2) " + ph[1];
            if (triple) s += "; (3) " + ph[2];
            return s + ".";
        }
        case 2: {
            std::string s = "First " + ph[0] + "; after that " + ph[1];
            if (triple) s += "; finally " + ph[2];
            return s + ".";
        }
        case 3: {
            std::string s = "Handle the following in order: " + ph[0] + ", " + ph[1];
            if (triple) s += ", " + ph[2];
            return s + ".";
        }
        default: {
            std::string s = capitalize(ph[0]) + ". Next, " + ph[1] + ".";
            if (triple) s += " Lastly, " + ph[2] + ".";
            return s;
        }
    }
}

const std::vector<std::string>& non_sequitur_clauses() {
    static const std::vector<std::string> clauses = {
        "; the bench mat has a curled corner",
        "; a pigeon is sitting on the windowsill",
        "; the coffee machine in the corner is broken again",
        "; it might rain later this afternoon",
        "; someone left a sandwich next to the rack",
    };
    return clauses;
}

std::string role_prefix(int k, const std::string& prompt) {
    switch (k) {
        case 0: return "You are an optical device user; " + lower_first(prompt);
        case 1: return "Act as the service provider: " + lower_first(prompt);
        default: return "As the on-call network operator, " + lower_first(prompt);
    }
}

std::string chain_paraphrase(int k, const BasicTask& t) {
    const std::string a1 = t.actions[0].phrase;
    const std::string a2 = t.actions[1].phrase;
    switch (k) {
        case 0: return capitalize(a1) + " and then " + a2 + ".";
        case 1: return capitalize(a1) + ", and immediately after, " + a2 + ".";
        case 2: return "Right after you " + a1 + ", " + a2 + ".";
        case 3: return "Complete this sequence without stopping: " + a1 + ", then " + a2 + ".";
        default: return capitalize(a1) + "; once that is done, " + a2 + ".";
    }
}

// Deterministic permutation of {0..n-1} drawn from the seeded generator, so
// different seeds shuffle which template lands on which variant index while
// the corpus cardinality stays fixed.
std::vector<int> permutation(std::mt19937& rng, int n) {
    std::vector<int> p(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng() % static_cast<std::uint32_t>(i + 1));
        std::swap(p[static_cast<size_t>(i)], p[static_cast<size_t>(j)]);
    }
    return p;
}

GroundTruth execute_gt(const BasicTask& t, Ordering ordering) {
    GroundTruth gt;
    gt.expectation = Expectation::execute;
    gt.ordering = ordering;
    for (const auto& a : t.actions) {
        for (const auto& s : a.steps) gt.steps.push_back(s);
    }
    gt.predicate = t.predicate;
    return gt;
}

TaskRecord make_record(const BasicTask& t, const std::string& suffix, int action_count,
                       Variant variant, std::string prompt, GroundTruth gt) {
    TaskRecord r;
    r.id = t.id + "-" + suffix;
    r.action_count = action_count;
    r.variant = variant;
    r.prompt = std::move(prompt);
    r.devices = t.devices;
    r.ground_truth = std::move(gt);
    return r;
}

}  // namespace

std::vector<TaskRecord> generate_corpus(const TaskManifest& manifest, std::uint32_t seed) {
    manifest.validate();
    std::vector<TaskRecord> corpus;
    corpus.reserve(410);
    std::mt19937 rng(seed);

    // Single-action: 5 paraphrases + 5 non-sequiturs + 3 errors + 3 roles.
    for (const auto& t : manifest.single) {
        const auto para = permutation(rng, 5);
        const auto nonseq = permutation(rng, 5);
        const auto roles = permutation(rng, 3);
        const GroundTruth gt = execute_gt(t, t.ordering);
        for (int k = 0; k < 5; ++k) {
            corpus.push_back(make_record(t, "para-" + std::to_string(k + 1), 1,
                                         Variant::paraphrase,
                                         single_paraphrase(para[static_cast<size_t>(k)], t), gt));
        }
        for (int k = 0; k < 5; ++k) {
            corpus.push_back(make_record(
                t, "nonseq-" + std::to_string(k + 1), 1, Variant::non_sequitur,
                t.base_prompt() + non_sequitur_clauses()[static_cast<size_t>(
                                      nonseq[static_cast<size_t>(k)])],
                gt));
        }
        for (int k = 0; k < 3; ++k) {
            GroundTruth reject;
            reject.expectation = Expectation::reject;
            reject.rejection_reason = t.errors[static_cast<size_t>(k)].reason;
            corpus.push_back(make_record(t, "err-" + std::to_string(k + 1), 1, Variant::error,
                                         t.errors[static_cast<size_t>(k)].prompt,
                                         std::move(reject)));
        }
        for (int k = 0; k < 3; ++k) {
            corpus.push_back(make_record(t, "role-" + std::to_string(k + 1), 1, Variant::role,
                                         role_prefix(roles[static_cast<size_t>(k)],
                                                     t.base_prompt()),
                                         gt));
        }
    }

    // Dual-action: 5 paraphrases + 5 non-sequiturs, plus a chained form with
    // 5 paraphrases of its own (ground truth sequenced strictly).
    for (const auto& t : manifest.dual) {
        const auto para = permutation(rng, 5);
        const auto nonseq = permutation(rng, 5);
        const auto chain = permutation(rng, 5);
        const GroundTruth gt = execute_gt(t, t.ordering);
        for (int k = 0; k < 5; ++k) {
            corpus.push_back(make_record(t, "para-" + std::to_string(k + 1), 2,
                                         Variant::paraphrase,
                                         multi_paraphrase(para[static_cast<size_t>(k)], t), gt));
        }
        for (int k = 0; k < 5; ++k) {
            corpus.push_back(make_record(
                t, "nonseq-" + std::to_string(k + 1), 2, Variant::non_sequitur,
                t.base_prompt() + non_sequitur_clauses()[static_cast<size_t>(
                                      nonseq[static_cast<size_t>(k)])],
                gt));
        }
        const GroundTruth chained = execute_gt(t, Ordering::strict);
        for (int k = 0; k < 5; ++k) {
            corpus.push_back(make_record(t, "chain-" + std::to_string(k + 1), 2, Variant::chain,
                                         chain_paraphrase(chain[static_cast<size_t>(k)], t),
                                         chained));
        }
    }

    // Triple-action: 5 paraphrases + 5 non-sequiturs.
    for (const auto& t : manifest.triple) {
        const auto para = permutation(rng, 5);
        const auto nonseq = permutation(rng, 5);
        const GroundTruth gt = execute_gt(t, t.ordering);
        for (int k = 0; k < 5; ++k) {
            corpus.push_back(make_record(t, "para-" + std::to_string(k + 1), 3,
                                         Variant::paraphrase,
                                         multi_paraphrase(para[static_cast<size_t>(k)], t), gt));
        }
        for (int k = 0; k < 5; ++k) {
            corpus.push_back(make_record(
                t, "nonseq-" + std::to_string(k + 1), 3, Variant::non_sequitur,
                t.base_prompt() + non_sequitur_clauses()[static_cast<size_t>(
                                      nonseq[static_cast<size_t>(k)])],
                gt));
        }
    }

    return corpus;
}

void write_corpus_jsonl(const std::vector<TaskRecord>& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ToolError(errc::config_invalid, "cannot write corpus to '" + path + "'");
    }
    for (const auto& r : corpus) out << r.to_json().dump() << "\n";
}

std::vector<TaskRecord> read_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ToolError(errc::config_invalid, "cannot open corpus '" + path + "'");
    }
    std::vector<TaskRecord> corpus;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        corpus.push_back(TaskRecord::from_json(json::parse(line)));
    }
    return corpus;
}

}  // namespace optctl::bench
