#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <unistd.h>

#include "optctl/agent/local_client.hpp"
#include "optctl/agent/pricing.hpp"
#include "optctl/bench/corpus.hpp"
#include "optctl/bench/runner.hpp"
#include "optctl/ctrl/cases.hpp"
#include "optctl/mcp/server.hpp"
#include "optctl/sim/error.hpp"

namespace {

using nlohmann::json;
using namespace optctl;

std::string fixtures_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("OPTCTL_FIXTURES"); env != nullptr && env[0] != '\0') {
        return env;
    }
    return OPTCTL_DEFAULT_FIXTURE_DIR;
}

sim::Testbed load_testbed(const std::string& topology, const std::string& fixtures_flag) {
    if (!topology.empty()) return sim::Testbed::from_file(topology);
    return sim::Testbed::from_file(fixtures_dir(fixtures_flag) + "/bench.json");
}

int cmd_tools_list(const std::string& topology, const std::string& fixtures_flag,
                   const std::string& device, bool as_json) {
    sim::Testbed tb = load_testbed(topology, fixtures_flag);
    const auto registry = tools::Registry::build_for(tb);
    const auto specs =
        registry.list_tools(device.empty() ? std::nullopt : std::make_optional(device));
    if (as_json) {
        json arr = json::array();
        for (const auto& s : specs) arr.push_back(s.to_json());
        std::cout << arr.dump() << "\n";
    } else {
        for (const auto& s : specs) {
            std::cout << s.name << "\t" << s.device_id << "\t" << s.description << "\n";
        }
    }
    return 0;
}

int cmd_call(const std::string& topology, const std::string& fixtures_flag,
             const std::string& tool, const std::string& args_text, bool as_json) {
    sim::Testbed tb = load_testbed(topology, fixtures_flag);
    const auto registry = tools::Registry::build_for(tb);
    const json args = args_text.empty() ? json::object() : json::parse(args_text);
    agent::LocalClient client(registry, tb);
    const auto result = client.call(tool, args);
    if (as_json) {
        std::cout << result.to_json().dump() << "\n";
    } else if (result.ok()) {
        std::cout << result.payload.dump(2) << "\n";
    } else {
        std::cerr << result.error_code << ": " << result.error_message << "\n";
    }
    return result.ok() ? 0 : 1;
}

int cmd_serve(const std::string& topology, const std::string& fixtures_flag,
              const std::string& listen, bool stdio) {
    sim::Testbed tb = load_testbed(topology, fixtures_flag);
    const auto registry = tools::Registry::build_for(tb);
    if (stdio) {
        mcp::serve_frames(registry, tb, STDIN_FILENO, STDOUT_FILENO);
        return 0;
    }
    const auto colon = listen.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "listen address must be host:port\n";
        return 2;
    }
    const std::string host = listen.substr(0, colon);
    const int port = std::stoi(listen.substr(colon + 1));
    mcp::TcpServer server(registry, tb);
    server.start(host, port);
    std::cerr << "listening on " << host << ":" << server.port() << "\n";
    ::pause();
    return 0;
}

int cmd_bench_generate(const std::string& manifest_path, const std::string& fixtures_flag,
                       const std::string& out, unsigned seed) {
    const std::string path = manifest_path.empty()
                                 ? fixtures_dir(fixtures_flag) + "/tasks_manifest.json"
                                 : manifest_path;
    const auto manifest = bench::TaskManifest::from_file(path);
    const auto corpus = bench::generate_corpus(manifest, seed);
    if (out.empty() || out == "-") {
        for (const auto& t : corpus) std::cout << t.to_json().dump() << "\n";
    } else {
        bench::write_corpus_jsonl(corpus, out);
        std::cerr << "wrote " << corpus.size() << " tasks to " << out << "\n";
    }
    return 0;
}

int cmd_bench_run(const std::string& corpus_path, const std::string& topology,
                  const std::string& fixtures_flag, const std::string& agent_kind,
                  const std::string& model, const std::string& endpoints_path,
                  const std::string& report_path, int workers, bool as_json) {
    const auto corpus = bench::read_corpus_jsonl(corpus_path);
    const std::string topo_path =
        topology.empty() ? fixtures_dir(fixtures_flag) + "/bench.json" : topology;
    std::ifstream topo_in(topo_path);
    if (!topo_in) {
        std::cerr << "cannot open topology '" << topo_path << "'\n";
        return 1;
    }
    json topo;
    topo_in >> topo;

    bench::RunOptions options;
    options.workers = workers;
    if (agent_kind == "oracle") {
        options.agent = agent::AgentKind::oracle;
    } else if (agent_kind == "remote") {
        options.agent = agent::AgentKind::remote;
        const std::string ep = endpoints_path.empty()
                                   ? fixtures_dir(fixtures_flag) + "/endpoints.json"
                                   : endpoints_path;
        options.endpoint = agent::ModelEndpointConfig::from_file(ep, model);
    } else {
        std::cerr << "agent must be 'oracle' or 'remote'\n";
        return 2;
    }

    const auto outcomes = bench::run_benchmark(corpus, topo, options);
    const auto report =
        bench::aggregate(outcomes, agent_kind == "oracle" ? "oracle" : model);
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << report.to_json().dump(2) << "\n";
    }
    if (as_json) {
        std::cout << report.to_json().dump() << "\n";
    } else {
        std::cout << report.to_table();
    }
    return 0;
}

int cmd_case_run(int number, const std::string& fixtures_flag, const std::string& out_dir,
                 bool as_json) {
    ctrl::CaseOptions options;
    options.fixtures_dir = fixtures_dir(fixtures_flag);
    options.output_dir = out_dir.empty() ? "case" + std::to_string(number) + "-out" : out_dir;
    const json summary = ctrl::run_case(number, options);
    std::cout << (as_json ? summary.dump() : summary.dump(2)) << "\n";
    return 0;
}

int cmd_report_show(const std::string& path, bool as_json) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open report '" << path << "'\n";
        return 1;
    }
    json j;
    in >> j;
    if (as_json) {
        std::cout << j.dump() << "\n";
    } else {
        std::cout << bench::BenchmarkReport::from_json(j).to_table();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulated optical-testbed control plane"};
    app.require_subcommand(1);

    std::string fixtures_flag;
    app.add_option("--fixtures", fixtures_flag, "fixture directory (topologies, manifests)");
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-parsable JSON output");

    // serve
    auto* serve = app.add_subcommand("serve", "run the control-plane server");
    std::string serve_topology, listen = "127.0.0.1:7030";
    bool stdio = false;
    serve->add_option("--topology", serve_topology, "topology config file");
    auto* listen_opt = serve->add_option("--listen", listen, "host:port to listen on");
    auto* stdio_opt = serve->add_flag("--stdio", stdio, "serve one session over stdin/stdout");
    listen_opt->excludes(stdio_opt);

    // tools list
    auto* tools_cmd = app.add_subcommand("tools", "tool inventory");
    auto* tools_list = tools_cmd->add_subcommand("list", "list registered tools");
    std::string tools_topology, tools_device;
    tools_list->add_option("--topology", tools_topology, "topology config file");
    tools_list->add_option("--device", tools_device, "filter by device group");

    // call
    auto* call = app.add_subcommand("call", "invoke one tool against a fresh testbed");
    std::string call_tool, call_args, call_topology;
    call->add_option("tool", call_tool, "tool name")->required();
    call->add_option("--args", call_args, "JSON argument object");
    call->add_option("--topology", call_topology, "topology config file");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "benchmark corpus and runs");
    auto* bench_gen = bench_cmd->add_subcommand("generate", "expand the task corpus");
    std::string gen_manifest, gen_out;
    unsigned gen_seed = 1;
    bench_gen->add_option("--manifest", gen_manifest, "basic-task manifest");
    bench_gen->add_option("--out", gen_out, "output JSONL path (default: stdout)");
    bench_gen->add_option("--seed", gen_seed, "generation seed");

    auto* bench_run = bench_cmd->add_subcommand("run", "run the corpus through an agent");
    std::string run_corpus, run_topology, run_agent = "oracle", run_model, run_endpoints,
                run_report;
    int run_workers = 1;
    bench_run->add_option("--corpus", run_corpus, "task corpus JSONL")->required();
    bench_run->add_option("--topology", run_topology, "topology config file");
    bench_run->add_option("--agent", run_agent, "oracle | remote");
    bench_run->add_option("--model", run_model, "remote model name");
    bench_run->add_option("--endpoints", run_endpoints, "endpoint config file");
    bench_run->add_option("--report", run_report, "write the report JSON here");
    bench_run->add_option("--workers", run_workers, "parallel workers")
        ->check(CLI::PositiveNumber);

    // case run
    auto* case_cmd = app.add_subcommand("case", "end-to-end case studies");
    auto* case_run = case_cmd->add_subcommand("run", "run one case study");
    int case_number = 1;
    std::string case_out;
    case_run->add_option("number", case_number, "case study number (1..5)")->required();
    case_run->add_option("--out", case_out, "artifact output directory");

    // report show
    auto* report_cmd = app.add_subcommand("report", "report utilities");
    auto* report_show = report_cmd->add_subcommand("show", "pretty-print a report");
    std::string report_path;
    report_show->add_option("--report", report_path, "report JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (serve->parsed()) {
            return cmd_serve(serve_topology, fixtures_flag, listen, stdio);
        }
        if (tools_list->parsed()) {
            return cmd_tools_list(tools_topology, fixtures_flag, tools_device, as_json);
        }
        if (call->parsed()) {
            return cmd_call(call_topology, fixtures_flag, call_tool, call_args, as_json);
        }
        if (bench_gen->parsed()) {
            return cmd_bench_generate(gen_manifest, fixtures_flag, gen_out, gen_seed);
        }
        if (bench_run->parsed()) {
            return cmd_bench_run(run_corpus, run_topology, fixtures_flag, run_agent, run_model,
                                 run_endpoints, run_report, run_workers, as_json);
        }
        if (case_run->parsed()) {
            return cmd_case_run(case_number, fixtures_flag, case_out, as_json);
        }
        if (report_show->parsed()) {
            return cmd_report_show(report_path, as_json);
        }
        std::cerr << app.help();
        return 2;
    } catch (const ToolError& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
