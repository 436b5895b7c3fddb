#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <fstream>
#include <thread>

#include "optctl/mcp/client.hpp"
#include "optctl/mcp/protocol.hpp"
#include "optctl/mcp/server.hpp"

using namespace optctl;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(OPTCTL_FIXTURES) + "/" + name; }

sim::Testbed bench_testbed() { return sim::Testbed::from_file(fixture("bench.json")); }

void replay_golden(const std::string& path) {
    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);
    mcp::SessionHandler handler(registry, tb, "golden");

    std::ifstream in(path);
    REQUIRE(in.is_open());
    std::string line;
    int replayed = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json rec = json::parse(line);
        const std::string got = handler.handle_line(rec.at("send").get<std::string>());
        CHECK(got == rec.at("expect").get<std::string>());
        replayed++;
    }
    CHECK(replayed > 0);
}

}  // namespace

TEST_CASE("golden session replays byte-for-byte") {
    // Covers initialize, tools/list, tools/call ok, tools/call tool-error,
    // malformed request, unknown method.
    replay_golden(fixture("golden/session.jsonl"));
}

TEST_CASE("golden pre-init session: requests before initialize are rejected") {
    replay_golden(fixture("golden/pre_init.jsonl"));
}

TEST_CASE("session gates tools/* behind initialize") {
    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);
    mcp::SessionHandler handler(registry, tb);

    const json early = json::parse(
        handler.handle_line(R"({"jsonrpc":"2.0","id":1,"method":"tools/call","params":{"name":"arof_get_status","arguments":{}}})"));
    REQUIRE(early.contains("error"));
    CHECK(early.at("error").at("code") == mcp::kNotInitialized);

    const json init = json::parse(handler.handle_line(
        R"({"jsonrpc":"2.0","id":2,"method":"initialize","params":{"protocolVersion":"2025-03-26"}})"));
    REQUIRE(init.contains("result"));
    CHECK(init.at("result").at("protocolVersion") == "2025-03-26");

    const json listed = json::parse(
        handler.handle_line(R"({"jsonrpc":"2.0","id":3,"method":"tools/list","params":{}})"));
    CHECK(listed.at("result").at("tools").size() == 64);
}

TEST_CASE("protocol version negotiation failure is a hard error") {
    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);
    mcp::SessionHandler handler(registry, tb);
    const json r = json::parse(handler.handle_line(
        R"({"jsonrpc":"2.0","id":1,"method":"initialize","params":{"protocolVersion":"1999-01-01"}})"));
    REQUIRE(r.contains("error"));
    CHECK(r.at("error").at("code") == mcp::kInvalidParams);
}

TEST_CASE("server restart reproduces identical tools/list bytes") {
    auto run_once = []() {
        sim::Testbed tb = bench_testbed();
        const auto registry = tools::Registry::build_for(tb);
        mcp::SessionHandler handler(registry, tb);
        handler.handle_line(
            R"({"jsonrpc":"2.0","id":1,"method":"initialize","params":{"protocolVersion":"2025-03-26"}})");
        return handler.handle_line(R"({"jsonrpc":"2.0","id":2,"method":"tools/list","params":{}})");
    };
    CHECK(run_once() == run_once());
}

TEST_CASE("length-prefixed framing round-trips over a pipe") {
    int fds[2];
    REQUIRE(::pipe(fds) == 0);
    const std::string body = R"({"jsonrpc":"2.0","id":1,"method":"initialize","params":{}})";
    CHECK(mcp::write_frame(fds[1], body));
    std::string out;
    CHECK(mcp::read_frame(fds[0], out));
    CHECK(out == body);
    ::close(fds[0]);
    ::close(fds[1]);
}

TEST_CASE("stdio transport carries the same bodies as the line transport") {
    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);

    int to_server[2], from_server[2];
    REQUIRE(::pipe(to_server) == 0);
    REQUIRE(::pipe(from_server) == 0);

    std::thread server([&] {
        mcp::serve_frames(registry, tb, to_server[0], from_server[1]);
        ::close(from_server[1]);
    });

    const std::string init =
        R"({"jsonrpc":"2.0","id":1,"method":"initialize","params":{"protocolVersion":"2025-03-26"}})";
    const std::string list = R"({"jsonrpc":"2.0","id":2,"method":"tools/list","params":{}})";
    CHECK(mcp::write_frame(to_server[1], init));
    CHECK(mcp::write_frame(to_server[1], list));
    ::close(to_server[1]);

    std::string init_resp, list_resp;
    CHECK(mcp::read_frame(from_server[0], init_resp));
    CHECK(mcp::read_frame(from_server[0], list_resp));
    server.join();
    ::close(to_server[0]);
    ::close(from_server[0]);

    sim::Testbed tb2 = bench_testbed();
    const auto registry2 = tools::Registry::build_for(tb2);
    mcp::SessionHandler handler(registry2, tb2);
    CHECK(handler.handle_line(init) == init_resp);
    CHECK(handler.handle_line(list) == list_resp);
}

TEST_CASE("tcp round-trip: list, ok call, in-band tool error") {
    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);
    mcp::TcpServer server(registry, tb);
    server.start("127.0.0.1", 0);

    mcp::TcpClient client("127.0.0.1", server.port(), 5.0);
    CHECK(client.list_tools_schema().size() == 64);

    const auto ok = client.call("osa_set_start_wavelength", {{"nm", 1540}});
    CHECK(ok.ok());
    CHECK(ok.payload.at("start_nm") == 1540.0);

    const auto err = client.call("osa_set_start_wavelength", {{"nm", 0}});
    CHECK_FALSE(err.ok());
    CHECK(err.error_code == "ParamOutOfRange");

    server.stop();
}

TEST_CASE("tcp round-trip: the nine-call provisioning sequence returns nine oks") {
    sim::Testbed tb = sim::Testbed::from_file(fixture("case1.json"));
    const auto registry = tools::Registry::build_for(tb);
    mcp::TcpServer server(registry, tb);
    server.start("127.0.0.1", 0);

    mcp::TcpClient client("127.0.0.1", server.port(), 5.0);
    const std::vector<std::pair<std::string, json>> sequence = {
        {"roadm_add_wss_connection",
         {{"node", 1}, {"side", "mux"}, {"id", 1}, {"name", "ARoF"}, {"port", 1},
          {"start_ghz", 193900}, {"end_ghz", 194450}, {"attenuation_db", 19.5}}},
        {"roadm_add_wss_connection",
         {{"node", 1}, {"side", "mux"}, {"id", 2}, {"name", "CFP2"}, {"port", 20},
          {"start_ghz", 193400}, {"end_ghz", 193700}, {"attenuation_db", 5}}},
        {"osa_set_start_wavelength", {{"nm", 1540}}},
        {"osa_set_stop_wavelength", {{"nm", 1550}}},
        {"roadm_add_wss_connection",
         {{"node", 2}, {"side", "demux"}, {"id", 1}, {"name", "ARoF"}, {"port", 1},
          {"start_ghz", 193900}, {"end_ghz", 194450}, {"attenuation_db", 5}}},
        {"roadm_add_wss_connection",
         {{"node", 2}, {"side", "demux"}, {"id", 2}, {"name", "CFP2"}, {"port", 20},
          {"start_ghz", 193400}, {"end_ghz", 193700}, {"attenuation_db", 5}}},
        {"cfp2_set_center_frequency", {{"port", "cfp2-opt-1-1"}, {"frequency_mhz", 193500000}}},
        {"arof_set_current", {{"ma", 99}}},
        {"arof_set_bias_voltage", {{"volts", -0.9}}},
    };
    int oks = 0;
    for (const auto& [tool, args] : sequence) {
        if (client.call(tool, args).ok()) oks++;
    }
    CHECK(oks == 9);
    server.stop();
}

TEST_CASE("client call to a closed port reports TransportClosed") {
    // Bind-then-close to find a port that is certainly not listening.
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = 0;
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
    socklen_t len = sizeof(addr);
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    const int dead_port = ntohs(addr.sin_port);
    ::close(fd);

    try {
        mcp::TcpClient client("127.0.0.1", dead_port, 1.0);
        FAIL("connect should have failed");
    } catch (const ToolError& e) {
        CHECK(e.code() == std::string("TransportClosed"));
    }
}

TEST_CASE("client rejects a response with a mismatched id") {
    const int listen_fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = 0;
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    REQUIRE(::bind(listen_fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
    REQUIRE(::listen(listen_fd, 1) == 0);
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd, reinterpret_cast<sockaddr*>(&addr), &len);
    const int port = ntohs(addr.sin_port);

    std::thread rigged([listen_fd] {
        const int conn = ::accept(listen_fd, nullptr, nullptr);
        if (conn < 0) return;
        char buf[4096];
        const ssize_t n = ::recv(conn, buf, sizeof(buf), 0);
        (void)n;
        const std::string reply = R"({"jsonrpc":"2.0","id":9999,"result":{}})" "\n";
        ::send(conn, reply.data(), reply.size(), 0);
        ::close(conn);
    });

    try {
        mcp::TcpClient client("127.0.0.1", port, 2.0);
        FAIL("handshake should have failed on the id check");
    } catch (const ToolError& e) {
        CHECK(e.code() == std::string("ProtocolViolation"));
    }
    rigged.join();
    ::close(listen_fd);
}

TEST_CASE("client times out when the server stays silent") {
    const int listen_fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = 0;
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    REQUIRE(::bind(listen_fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
    REQUIRE(::listen(listen_fd, 1) == 0);
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd, reinterpret_cast<sockaddr*>(&addr), &len);
    const int port = ntohs(addr.sin_port);

    std::thread silent([listen_fd] {
        const int conn = ::accept(listen_fd, nullptr, nullptr);
        if (conn >= 0) {
            char buf[4096];
            ::recv(conn, buf, sizeof(buf), 0);  // read the request, never answer
            ::usleep(800 * 1000);
            ::close(conn);
        }
    });

    try {
        mcp::TcpClient client("127.0.0.1", port, 0.3);
        FAIL("handshake should have timed out");
    } catch (const ToolError& e) {
        CHECK(e.code() == std::string("Timeout"));
    }
    silent.join();
    ::close(listen_fd);
}

TEST_CASE("concurrent sessions all complete") {
    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);
    mcp::TcpServer server(registry, tb);
    server.start("127.0.0.1", 0);

    std::vector<std::thread> clients;
    std::array<bool, 4> done{};
    for (int i = 0; i < 4; ++i) {
        clients.emplace_back([&, i] {
            mcp::TcpClient client("127.0.0.1", server.port(), 5.0);
            for (int k = 0; k < 10; ++k) {
                const auto r = client.call(k % 2 == 0 ? "arof_get_status" : "arof_set_current",
                                           k % 2 == 0 ? json::object() : json{{"ma", 40 + k}});
                if (!r.ok()) return;
            }
            done[static_cast<size_t>(i)] = true;
        });
    }
    for (auto& t : clients) t.join();
    for (bool ok : done) CHECK(ok);
    server.stop();
}
