#pragma once

#include <string>

#include "optctl/tools/tool_client.hpp"

namespace optctl::ctrl {

using nlohmann::json;

// Nine-call provisioning fixture: two mux passbands, the OSA window, two
// demux passbands, the transceiver frequency, and the analog transmitter
// drive. Returns the call log, the peaks visible in the OSA window, and the
// computed channel quality.
json provision_case1(tools::ToolClient& client);

struct CaseOptions {
    std::string fixtures_dir;  // directory holding case*.json
    std::string output_dir;    // where artifacts are written
};

// Runs one end-to-end case study (1..5) on its shipped topology, writes the
// trace/table/CSV artifacts, and returns a summary.
json run_case(int number, const CaseOptions& options);

}  // namespace optctl::ctrl
