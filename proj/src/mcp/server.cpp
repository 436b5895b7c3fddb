#include "optctl/mcp/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include "optctl/sim/error.hpp"

namespace optctl::mcp {

namespace {

void session_loop(const tools::Registry& registry, sim::Testbed& testbed, int fd,
                  const std::string& session_id) {
    SessionHandler handler(registry, testbed, session_id);
    std::string buffer;
    char chunk[4096];
    for (;;) {
        const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
        if (n <= 0) break;
        buffer.append(chunk, static_cast<size_t>(n));
        size_t pos;
        while ((pos = buffer.find('\n')) != std::string::npos) {
            const std::string line = buffer.substr(0, pos);
            buffer.erase(0, pos + 1);
            if (line.empty()) continue;
            const std::string response = handler.handle_line(line) + "\n";
            size_t sent = 0;
            while (sent < response.size()) {
                const ssize_t w = ::send(fd, response.data() + sent, response.size() - sent, 0);
                if (w <= 0) { ::close(fd); return; }
                sent += static_cast<size_t>(w);
            }
        }
    }
    ::close(fd);
}

}  // namespace

TcpServer::TcpServer(const tools::Registry& registry, sim::Testbed& testbed)
    : registry_(registry), testbed_(testbed) {}

TcpServer::~TcpServer() { stop(); }

void TcpServer::start(const std::string& host, int port) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) {
        throw ToolError(errc::transport_closed, "cannot create listening socket");
    }
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        throw ToolError(errc::transport_closed, "invalid listen address '" + host + "'");
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        throw ToolError(errc::transport_closed,
                        "cannot bind " + host + ":" + std::to_string(port));
    }
    if (::listen(listen_fd_, 16) < 0) {
        throw ToolError(errc::transport_closed, "cannot listen");
    }
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);

    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void TcpServer::accept_loop() {
    while (running_) {
        sockaddr_in peer{};
        socklen_t len = sizeof(peer);
        const int fd = ::accept(listen_fd_, reinterpret_cast<sockaddr*>(&peer), &len);
        if (fd < 0) {
            if (!running_) break;
            continue;
        }
        const std::string sid = "session-" + std::to_string(++session_counter_);
        sessions_.emplace_back(
            [this, fd, sid] { session_loop(registry_, testbed_, fd, sid); });
    }
}

void TcpServer::stop() {
    if (!running_.exchange(false)) return;
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    if (accept_thread_.joinable()) accept_thread_.join();
    for (auto& t : sessions_) {
        if (t.joinable()) t.join();
    }
    sessions_.clear();
}

bool read_frame(int fd, std::string& body) {
    unsigned char header[4];
    size_t got = 0;
    while (got < 4) {
        const ssize_t n = ::read(fd, header + got, 4 - got);
        if (n <= 0) return false;
        got += static_cast<size_t>(n);
    }
    const uint32_t length = (static_cast<uint32_t>(header[0]) << 24) |
                            (static_cast<uint32_t>(header[1]) << 16) |
                            (static_cast<uint32_t>(header[2]) << 8) |
                            static_cast<uint32_t>(header[3]);
    body.resize(length);
    size_t read_so_far = 0;
    while (read_so_far < length) {
        const ssize_t n = ::read(fd, body.data() + read_so_far, length - read_so_far);
        if (n <= 0) return false;
        read_so_far += static_cast<size_t>(n);
    }
    return true;
}

bool write_frame(int fd, const std::string& body) {
    const uint32_t length = static_cast<uint32_t>(body.size());
    unsigned char header[4] = {static_cast<unsigned char>((length >> 24) & 0xff),
                               static_cast<unsigned char>((length >> 16) & 0xff),
                               static_cast<unsigned char>((length >> 8) & 0xff),
                               static_cast<unsigned char>(length & 0xff)};
    if (::write(fd, header, 4) != 4) return false;
    size_t sent = 0;
    while (sent < body.size()) {
        const ssize_t n = ::write(fd, body.data() + sent, body.size() - sent);
        if (n <= 0) return false;
        sent += static_cast<size_t>(n);
    }
    return true;
}

void serve_frames(const tools::Registry& registry, sim::Testbed& testbed, int in_fd, int out_fd) {
    SessionHandler handler(registry, testbed, "stdio");
    std::string body;
    while (read_frame(in_fd, body)) {
        if (!write_frame(out_fd, handler.handle_line(body))) break;
    }
}

}  // namespace optctl::mcp
