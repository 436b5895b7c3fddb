#include "optctl/mcp/client.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>

namespace optctl::mcp {

using nlohmann::json;

TcpClient::TcpClient(const std::string& host, int port, double timeout_s) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) {
        throw ToolError(errc::transport_closed, "cannot create socket");
    }
    timeval tv{};
    tv.tv_sec = static_cast<long>(timeout_s);
    tv.tv_usec = static_cast<long>((timeout_s - std::floor(timeout_s)) * 1e6);
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    ::setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        fd_ = -1;
        throw ToolError(errc::transport_closed, "invalid address '" + host + "'");
    }
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        ::close(fd_);
        fd_ = -1;
        throw ToolError(errc::transport_closed,
                        "cannot connect to " + host + ":" + std::to_string(port));
    }

    json params;
    params["protocolVersion"] = kProtocolVersion;
    params["clientInfo"] = json{{"name", "optctl-client"}, {"version", kServerVersion}};
    request("initialize", params);
}

TcpClient::~TcpClient() {
    if (fd_ >= 0) ::close(fd_);
}

std::string TcpClient::read_line() {
    size_t pos;
    while ((pos = buffer_.find('\n')) == std::string::npos) {
        char chunk[4096];
        const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
        if (n == 0) {
            throw ToolError(errc::transport_closed, "server closed the connection");
        }
        if (n < 0) {
            if (errno == EAGAIN || errno == EWOULDBLOCK) {
                throw ToolError(errc::timeout, "timed out waiting for a response");
            }
            throw ToolError(errc::transport_closed, "receive failed");
        }
        buffer_.append(chunk, static_cast<size_t>(n));
    }
    std::string line = buffer_.substr(0, pos);
    buffer_.erase(0, pos + 1);
    return line;
}

json TcpClient::request(const std::string& method, const json& params) {
    const long id = next_id_++;
    ordered_json req;
    req["jsonrpc"] = "2.0";
    req["id"] = id;
    req["method"] = method;
    req["params"] = params;
    const std::string line = req.dump() + "\n";
    size_t sent = 0;
    while (sent < line.size()) {
        const ssize_t n = ::send(fd_, line.data() + sent, line.size() - sent, 0);
        if (n <= 0) {
            throw ToolError(errc::transport_closed, "send failed");
        }
        sent += static_cast<size_t>(n);
    }

    const json response = json::parse(read_line(), nullptr, false);
    if (response.is_discarded() || !response.is_object()) {
        throw ToolError(errc::protocol_violation, "response is not a JSON object");
    }
    if (!response.contains("id") || response.at("id") != json(id)) {
        throw ToolError(errc::protocol_violation, "response id does not match the request");
    }
    if (response.contains("error")) {
        const auto& e = response.at("error");
        throw ToolError(errc::protocol_violation,
                        "server error " + std::to_string(e.value("code", 0)) + ": " +
                            e.value("message", ""));
    }
    if (!response.contains("result")) {
        throw ToolError(errc::protocol_violation, "response carries neither result nor error");
    }
    return response.at("result");
}

json TcpClient::list_tools_schema() {
    return request("tools/list", json::object()).at("tools");
}

tools::ToolResult TcpClient::call(const std::string& tool, const json& args) {
    json params;
    params["name"] = tool;
    params["arguments"] = args;
    const json result = request("tools/call", params);

    const std::string call_id = "call-" + std::to_string(next_call_++);
    const bool is_error = result.value("isError", false);
    std::string text;
    if (result.contains("content") && result.at("content").is_array() &&
        !result.at("content").empty()) {
        text = result.at("content").at(0).value("text", "");
    }
    const json body = json::parse(text, nullptr, false);
    if (body.is_discarded()) {
        throw ToolError(errc::protocol_violation, "tool result payload is not valid JSON");
    }
    if (is_error) {
        return tools::ToolResult::make_error(call_id, body.value("error_code", "ToolError"),
                                             body.value("error_message", ""));
    }
    return tools::ToolResult::make_ok(call_id, body);
}

}  // namespace optctl::mcp
