#ifndef NOISEKEY_LINK_HPP
#define NOISEKEY_LINK_HPP

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>

namespace noisekey {

// Reliable ordered byte pipe. Implementations must deliver bytes exactly as
// sent; recv_exact blocks until `size` bytes arrived or the peer is gone, in
// which case it throws TransportError.
class Link {
  public:
    virtual ~Link() = default;
    virtual void send(const std::uint8_t* data, std::size_t size) = 0;
    virtual void recv_exact(std::uint8_t* data, std::size_t size) = 0;
};

// Two in-process Link endpoints joined by a pair of byte queues, safe for one
// thread per side. Destroying the duplex while a peer blocks in recv is not
// supported; join the session threads first.
class InMemoryDuplex {
  public:
    InMemoryDuplex();
    Link& a() { return *a_; }
    Link& b() { return *b_; }

    // Marks both directions closed so a blocked or late peer unblocks with
    // TransportError instead of waiting forever. Call when one side fails.
    void close();

  private:
    struct Queue {
        std::mutex mutex;
        std::condition_variable ready;
        std::deque<std::uint8_t> bytes;
        bool closed = false;
    };
    class End;
    std::shared_ptr<Queue> ab_, ba_;
    std::unique_ptr<Link> a_, b_;
};

}  // namespace noisekey

#endif
