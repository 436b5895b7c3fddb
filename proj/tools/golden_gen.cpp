// Regenerates the wire-protocol golden fixtures and the registry manifest
// from the current implementation. Run from the repo root after a deliberate
// protocol or registry change, then commit the updated fixtures.

#include <fstream>
#include <iostream>

#include "optctl/mcp/protocol.hpp"
#include "optctl/sim/testbed.hpp"

using namespace optctl;
using nlohmann::json;

namespace {

json record(mcp::SessionHandler& handler, const std::string& request) {
    return json{{"send", request}, {"expect", handler.handle_line(request)}};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string fixtures = argc > 1 ? argv[1] : "fixtures";

    sim::Testbed testbed = sim::Testbed::from_file(fixtures + "/bench.json");
    const auto registry = tools::Registry::build_for(testbed);

    {
        std::ofstream out(fixtures + "/registry_manifest.json");
        out << registry.manifest().dump(2) << "\n";
    }

    // Scripted session: initialize, tools/list, tools/call ok, tools/call
    // tool-error, malformed request, unknown method.
    {
        mcp::SessionHandler handler(registry, testbed, "golden");
        std::ofstream out(fixtures + "/golden/session.jsonl");
        out << record(handler,
                      R"({"jsonrpc":"2.0","id":1,"method":"initialize","params":{"protocolVersion":"2025-03-26","clientInfo":{"name":"golden-client","version":"1.0.0"}}})")
                   .dump()
            << "\n";
        out << record(handler, R"({"jsonrpc":"2.0","id":2,"method":"tools/list","params":{}})")
                   .dump()
            << "\n";
        out << record(handler,
                      R"({"jsonrpc":"2.0","id":3,"method":"tools/call","params":{"name":"osa_set_start_wavelength","arguments":{"nm":1540}}})")
                   .dump()
            << "\n";
        out << record(handler,
                      R"({"jsonrpc":"2.0","id":4,"method":"tools/call","params":{"name":"osa_set_start_wavelength","arguments":{"nm":0}}})")
                   .dump()
            << "\n";
        out << record(handler, R"({"jsonrpc":"2.0","id":5,)").dump() << "\n";
        out << record(handler, R"({"jsonrpc":"2.0","id":6,"method":"tools/nope","params":{}})")
                   .dump()
            << "\n";
    }

    // Fresh session: requests before initialize must be rejected.
    {
        sim::Testbed tb2 = sim::Testbed::from_file(fixtures + "/bench.json");
        mcp::SessionHandler handler(registry, tb2, "golden-preinit");
        std::ofstream out(fixtures + "/golden/pre_init.jsonl");
        out << record(handler, R"({"jsonrpc":"2.0","id":1,"method":"tools/list","params":{}})")
                   .dump()
            << "\n";
        out << record(handler,
                      R"({"jsonrpc":"2.0","id":2,"method":"tools/call","params":{"name":"osa_get_device_info","arguments":{}}})")
                   .dump()
            << "\n";
    }

    std::cout << "golden fixtures written under " << fixtures << "\n";
    return 0;
}
