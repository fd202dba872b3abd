#include "penc/transport.hpp"

#include <future>
#include <thread>

#include "testutil.hpp"

using namespace penc;
using namespace std::chrono_literals;

TEST_CASE("loopback transfer is byte exact") {
    auto g = testutil::rng(0x7a);
    auto payload = testutil::random_bytes(g, 5000);

    SessionListener listener("127.0.0.1", 0);
    REQUIRE(listener.port() != 0);
    auto received = std::async(std::launch::async, [&] {
        return listener.accept_session(5s);
    });
    send_session_bytes("127.0.0.1", listener.port(), payload, 5s);
    CHECK(received.get() == payload);
}

TEST_CASE("empty payloads travel too") {
    SessionListener listener("127.0.0.1", 0);
    auto received = std::async(std::launch::async, [&] {
        return listener.accept_session(5s);
    });
    send_session_bytes("127.0.0.1", listener.port(), {}, 5s);
    CHECK(received.get().empty());
}

TEST_CASE("receiving with no sender times out") {
    SessionListener listener("127.0.0.1", 0);
    CHECK_THROWS_AS(listener.accept_session(200ms), TimeoutError);
}

TEST_CASE("sending to a closed port fails after the deadline") {
    SessionListener probe("127.0.0.1", 0);
    std::uint16_t dead_port = probe.port();
    // destroy the listener so the port is closed
    { SessionListener graveyard = std::move(probe); (void)graveyard; }
    std::vector<std::uint8_t> payload{1, 2, 3};
    CHECK_THROWS_AS(send_session_bytes("127.0.0.1", dead_port, payload, 300ms),
                    TransportError);
}

TEST_CASE("oversize sessions are rejected before allocation") {
    SessionListener listener("127.0.0.1", 0);
    auto rejected = std::async(std::launch::async, [&] {
        try {
            listener.accept_session(5s, 1024);
            return false;
        } catch (const TimeoutError&) {
            return false;
        } catch (const TransportError&) {
            return true;
        }
    });
    auto g = testutil::rng(0x7b);
    auto payload = testutil::random_bytes(g, 4096);
    try {
        send_session_bytes("127.0.0.1", listener.port(), payload, 5s);
    } catch (const TransportError&) {
        // the receiver may reset the connection before the body is written
    }
    CHECK(rejected.get());
}

TEST_CASE("a forged length prefix is rejected without a giant allocation") {
    SessionListener listener("127.0.0.1", 0);
    auto rejected = std::async(std::launch::async, [&] {
        try {
            listener.accept_session(5s, default_session_cap);
            return false;
        } catch (const TransportError&) {
            return true;
        }
    });
    // hand-rolled sender declaring ~280 TB, then hanging up
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(fd >= 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(listener.port());
    REQUIRE(::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr) == 1);
    REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
    const std::uint8_t lie[8]{0x00, 0x00, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff};
    REQUIRE(::send(fd, lie, sizeof lie, 0) == 8);
    ::close(fd);
    CHECK(rejected.get());
}

TEST_CASE("unresolvable hosts raise transport errors") {
    std::vector<std::uint8_t> payload{1};
    CHECK_THROWS_AS(
        send_session_bytes("host.invalid.penc.test", 1, payload, 200ms),
        TransportError);
}
