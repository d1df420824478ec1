#include "noisekey/tcp.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "noisekey/errors.hpp"

namespace noisekey {

namespace {
[[noreturn]] void fail(const std::string& what) {
    throw TransportError(what + ": " + std::strerror(errno));
}
}  // namespace

TcpStream::~TcpStream() {
    if (fd_ >= 0) ::close(fd_);
}

void TcpStream::send(const std::uint8_t* data, std::size_t size) {
    std::size_t off = 0;
    while (off < size) {
        ssize_t n = ::send(fd_, data + off, size - off, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail("tcp send");
        }
        off += static_cast<std::size_t>(n);
    }
}

void TcpStream::recv_exact(std::uint8_t* data, std::size_t size) {
    std::size_t off = 0;
    while (off < size) {
        ssize_t n = ::recv(fd_, data + off, size - off, 0);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail("tcp recv");
        }
        if (n == 0) throw TransportError("tcp recv: connection closed mid-frame");
        off += static_cast<std::size_t>(n);
    }
}

TcpStream tcp_connect(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    std::string service = std::to_string(port);
    int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res);
    if (rc != 0) throw TransportError("tcp connect: resolve " + host + ": " + gai_strerror(rc));

    int fd = -1;
    int saved = 0;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            saved = errno;
            continue;
        }
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        saved = errno;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) {
        errno = saved;
        fail("tcp connect");
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return TcpStream(fd);
}

TcpListener::TcpListener(std::uint16_t port) : fd_(-1), port_(0) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) fail("tcp listen: socket");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) fail("tcp listen: bind");
    if (::listen(fd_, 1) < 0) fail("tcp listen");
    socklen_t len = sizeof addr;
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) < 0)
        fail("tcp listen: getsockname");
    port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

TcpStream TcpListener::accept_one() {
    for (;;) {
        int fd = ::accept(fd_, nullptr, nullptr);
        if (fd >= 0) {
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return TcpStream(fd);
        }
        if (errno != EINTR) fail("tcp accept");
    }
}

}  // namespace noisekey
