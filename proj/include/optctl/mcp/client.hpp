#pragma once

#include <string>

#include "optctl/mcp/protocol.hpp"
#include "optctl/tools/tool_client.hpp"

namespace optctl::mcp {

// Blocking client for the newline-delimited TCP transport. Performs the
// initialize handshake on construction; every call round-trips with a
// timeout and verifies the response id.
class TcpClient : public tools::ToolClient {
public:
    TcpClient(const std::string& host, int port, double timeout_s = 30.0);
    ~TcpClient() override;

    TcpClient(const TcpClient&) = delete;
    TcpClient& operator=(const TcpClient&) = delete;

    nlohmann::json request(const std::string& method, const nlohmann::json& params);

    nlohmann::json list_tools_schema() override;
    tools::ToolResult call(const std::string& tool, const nlohmann::json& args) override;

private:
    std::string read_line();

    int fd_ = -1;
    long next_id_ = 1;
    long next_call_ = 1;
    std::string buffer_;
};

}  // namespace optctl::mcp
