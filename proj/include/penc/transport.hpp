#pragma once

#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "penc/errors.hpp"

namespace penc {

// One session per TCP connection, length-prefixed with an 8-byte big-endian
// total, capped before any allocation. Transport failures are distinct from
// protocol errors so callers can tell a broken pipe from a broken session.

inline constexpr std::size_t default_session_cap = 64ull * 1024 * 1024;
inline constexpr std::chrono::milliseconds default_timeout{30000};

namespace detail {

class Socket {
public:
    Socket() : fd_(-1) {}
    explicit Socket(int fd) : fd_(fd) {}
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    Socket(Socket&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
    Socket& operator=(Socket&& o) noexcept {
        if (this != &o) {
            close_fd();
            fd_ = o.fd_;
            o.fd_ = -1;
        }
        return *this;
    }
    ~Socket() { close_fd(); }

    int fd() const { return fd_; }
    bool valid() const { return fd_ >= 0; }

private:
    void close_fd() {
        if (fd_ >= 0)
            ::close(fd_);
    }
    int fd_;
};

using Clock = std::chrono::steady_clock;

inline int remaining_ms(Clock::time_point deadline) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    return left.count() < 0 ? 0 : static_cast<int>(left.count());
}

inline void wait_readable(int fd, Clock::time_point deadline, const char* what) {
    pollfd p{fd, POLLIN, 0};
    int rc = ::poll(&p, 1, remaining_ms(deadline));
    if (rc < 0)
        throw TransportError(std::string("poll failed: ") + std::strerror(errno));
    if (rc == 0)
        throw TimeoutError(std::string("timed out waiting for ") + what);
}

inline void read_exact(int fd, std::uint8_t* buf, std::size_t len,
                       Clock::time_point deadline) {
    std::size_t got = 0;
    while (got < len) {
        wait_readable(fd, deadline, "session bytes");
        ssize_t n = ::recv(fd, buf + got, len - got, 0);
        if (n == 0)
            throw TransportError("peer closed the connection mid-session");
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN || errno == EWOULDBLOCK)
                continue;
            throw TransportError(std::string("recv failed: ") + std::strerror(errno));
        }
        got += static_cast<std::size_t>(n);
    }
}

inline void write_all(int fd, const std::uint8_t* buf, std::size_t len,
                      Clock::time_point deadline) {
    std::size_t sent = 0;
    while (sent < len) {
        pollfd p{fd, POLLOUT, 0};
        int rc = ::poll(&p, 1, remaining_ms(deadline));
        if (rc < 0)
            throw TransportError(std::string("poll failed: ") + std::strerror(errno));
        if (rc == 0)
            throw TimeoutError("timed out sending session");
        ssize_t n = ::send(fd, buf + sent, len - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN || errno == EWOULDBLOCK)
                continue;
            throw TransportError(std::string("send failed: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
}

inline void set_nonblocking(int fd) {
    int flags = ::fcntl(fd, F_GETFL, 0);
    if (flags < 0 || ::fcntl(fd, F_SETFL, flags | O_NONBLOCK) < 0)
        throw TransportError("fcntl failed on socket");
}

struct AddrInfoHolder {
    addrinfo* info = nullptr;
    ~AddrInfoHolder() {
        if (info)
            ::freeaddrinfo(info);
    }
};

inline AddrInfoHolder resolve(const std::string& host, std::uint16_t port,
                              bool passive) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = passive ? AI_PASSIVE : 0;
    AddrInfoHolder out;
    int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(),
                           std::to_string(port).c_str(), &hints, &out.info);
    if (rc != 0)
        throw TransportError("cannot resolve " + host + ": " + gai_strerror(rc));
    return out;
}

} // namespace detail

// Listener bound at construction, so the port is owned (and known, even
// when requested as 0) before any sender can race it.
class SessionListener {
public:
    explicit SessionListener(const std::string& host, std::uint16_t port) {
        auto addrs = detail::resolve(host, port, true);
        std::string last_err = "no addresses to bind";
        for (addrinfo* ai = addrs.info; ai; ai = ai->ai_next) {
            detail::Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
            if (!s.valid())
                continue;
            int one = 1;
            ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
            if (::bind(s.fd(), ai->ai_addr, ai->ai_addrlen) != 0 ||
                ::listen(s.fd(), 4) != 0) {
                last_err = std::strerror(errno);
                continue;
            }
            sockaddr_storage bound{};
            socklen_t len = sizeof bound;
            if (::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&bound), &len) != 0)
                throw TransportError("getsockname failed");
            if (bound.ss_family == AF_INET)
                port_ = ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
            else
                port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port);
            detail::set_nonblocking(s.fd());
            listener_ = std::move(s);
            return;
        }
        throw TransportError("cannot listen on " + host + ":" +
                             std::to_string(port) + ": " + last_err);
    }

    std::uint16_t port() const { return port_; }

    // Accepts one connection, receives one length-prefixed session, closes.
    std::vector<std::uint8_t> accept_session(
        std::chrono::milliseconds timeout = default_timeout,
        std::size_t max_len = default_session_cap) {
        auto deadline = detail::Clock::now() + timeout;
        detail::Socket conn;
        for (;;) {
            detail::wait_readable(listener_.fd(), deadline, "a connection");
            detail::Socket candidate(::accept(listener_.fd(), nullptr, nullptr));
            if (candidate.valid()) {
                conn = std::move(candidate);
                break;
            }
            if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR ||
                errno == ECONNABORTED)
                continue; // the peer vanished between poll and accept
            throw TransportError(std::string("accept failed: ") + std::strerror(errno));
        }
        detail::set_nonblocking(conn.fd());

        std::uint8_t prefix[8];
        detail::read_exact(conn.fd(), prefix, 8, deadline);
        std::uint64_t declared = 0;
        for (std::uint8_t byte : prefix)
            declared = declared << 8 | byte;
        if (declared > max_len)
            throw TransportError("declared session length " +
                                 std::to_string(declared) + " exceeds cap " +
                                 std::to_string(max_len));
        std::vector<std::uint8_t> payload(static_cast<std::size_t>(declared));
        detail::read_exact(conn.fd(), payload.data(), payload.size(), deadline);
        return payload;
    }

private:
    detail::Socket listener_;
    std::uint16_t port_ = 0;
};

// Connects and transmits one length-prefixed session. Refused connections
// are retried until the deadline, so a sender may start slightly before its
// receiver has bound.
inline void send_session_bytes(const std::string& host, std::uint16_t port,
                               std::span<const std::uint8_t> payload,
                               std::chrono::milliseconds timeout = default_timeout) {
    auto deadline = detail::Clock::now() + timeout;
    auto addrs = detail::resolve(host, port, false);
    std::string last_err = "no addresses to connect";
    for (;;) {
        for (addrinfo* ai = addrs.info; ai; ai = ai->ai_next) {
            detail::Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
            if (!s.valid())
                continue;
            detail::set_nonblocking(s.fd());
            int rc = ::connect(s.fd(), ai->ai_addr, ai->ai_addrlen);
            if (rc != 0 && errno == EINPROGRESS) {
                pollfd p{s.fd(), POLLOUT, 0};
                int pr = ::poll(&p, 1, detail::remaining_ms(deadline));
                if (pr == 0) {
                    last_err = "connect timed out";
                    continue;
                }
                int err = 0;
                socklen_t len = sizeof err;
                ::getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
                if (err != 0) {
                    last_err = std::strerror(err);
                    continue;
                }
                rc = 0;
            } else if (rc != 0) {
                last_err = std::strerror(errno);
                continue;
            }
            std::uint8_t prefix[8];
            for (int i = 0; i < 8; ++i)
                prefix[i] = static_cast<std::uint8_t>(
                    std::uint64_t(payload.size()) >> (8 * (7 - i)));
            detail::write_all(s.fd(), prefix, 8, deadline);
            detail::write_all(s.fd(), payload.data(), payload.size(), deadline);
            return;
        }
        if (detail::remaining_ms(deadline) == 0)
            throw TransportError("cannot connect to " + host + ":" +
                                 std::to_string(port) + ": " + last_err);
        ::poll(nullptr, 0, 50); // retry while the peer may still be binding
    }
}

inline std::vector<std::uint8_t> recv_session_bytes(
    const std::string& host, std::uint16_t port,
    std::chrono::milliseconds timeout = default_timeout,
    std::size_t max_len = default_session_cap) {
    SessionListener listener(host, port);
    return listener.accept_session(timeout, max_len);
}

} // namespace penc
