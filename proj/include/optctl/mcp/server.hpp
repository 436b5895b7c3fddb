#pragma once

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "optctl/mcp/protocol.hpp"

namespace optctl::mcp {

// Newline-delimited JSON over TCP; one session handler per connection.
// Long-running tools block only their own session.
class TcpServer {
public:
    TcpServer(const tools::Registry& registry, sim::Testbed& testbed);
    ~TcpServer();

    // Binds and starts accepting. Pass port 0 for an ephemeral port.
    void start(const std::string& host, int port);
    int port() const { return port_; }
    void stop();

private:
    void accept_loop();

    const tools::Registry& registry_;
    sim::Testbed& testbed_;
    int listen_fd_ = -1;
    int port_ = 0;
    std::atomic<bool> running_{false};
    std::thread accept_thread_;
    std::vector<std::thread> sessions_;
    std::atomic<long> session_counter_{0};
};

// Length-prefixed framing (4-byte big-endian length + body) used on the
// standard-input/output transport. Bodies are identical to the TCP ones.
bool read_frame(int fd, std::string& body);
bool write_frame(int fd, const std::string& body);

// Serves a single session over a descriptor pair until EOF.
void serve_frames(const tools::Registry& registry, sim::Testbed& testbed, int in_fd, int out_fd);

}  // namespace optctl::mcp
