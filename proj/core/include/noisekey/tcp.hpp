#ifndef NOISEKEY_TCP_HPP
#define NOISEKEY_TCP_HPP

#include <cstdint>
#include <string>

#include "noisekey/link.hpp"

namespace noisekey {

// Blocking TCP byte stream. All failures surface as TransportError.
class TcpStream : public Link {
  public:
    explicit TcpStream(int fd) : fd_(fd) {}
    TcpStream(TcpStream&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    TcpStream& operator=(TcpStream&&) = delete;
    TcpStream(const TcpStream&) = delete;
    ~TcpStream() override;

    void send(const std::uint8_t* data, std::size_t size) override;
    void recv_exact(std::uint8_t* data, std::size_t size) override;

  private:
    int fd_;
};

TcpStream tcp_connect(const std::string& host, std::uint16_t port);

class TcpListener {
  public:
    // Binds and listens on the given port; port 0 picks a free one, readable
    // afterwards through port().
    explicit TcpListener(std::uint16_t port);
    TcpListener(const TcpListener&) = delete;
    ~TcpListener();

    std::uint16_t port() const { return port_; }
    TcpStream accept_one();

  private:
    int fd_;
    std::uint16_t port_;
};

}  // namespace noisekey

#endif
