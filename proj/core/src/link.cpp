#include "noisekey/link.hpp"

#include "noisekey/errors.hpp"

namespace noisekey {

class InMemoryDuplex::End : public Link {
  public:
    End(std::shared_ptr<Queue> out, std::shared_ptr<Queue> in)
        : out_(std::move(out)), in_(std::move(in)) {}

    ~End() override {
        std::lock_guard<std::mutex> lock(out_->mutex);
        out_->closed = true;
        out_->ready.notify_all();
    }

    void send(const std::uint8_t* data, std::size_t size) override {
        std::lock_guard<std::mutex> lock(out_->mutex);
        if (out_->closed) throw TransportError("in-memory link: peer closed");
        out_->bytes.insert(out_->bytes.end(), data, data + size);
        out_->ready.notify_all();
    }

    void recv_exact(std::uint8_t* data, std::size_t size) override {
        std::unique_lock<std::mutex> lock(in_->mutex);
        for (std::size_t i = 0; i < size; ++i) {
            in_->ready.wait(lock, [&] { return !in_->bytes.empty() || in_->closed; });
            if (in_->bytes.empty())
                throw TransportError("in-memory link: closed with bytes outstanding");
            data[i] = in_->bytes.front();
            in_->bytes.pop_front();
        }
    }

  private:
    std::shared_ptr<Queue> out_, in_;
};

InMemoryDuplex::InMemoryDuplex()
    : ab_(std::make_shared<Queue>()),
      ba_(std::make_shared<Queue>()),
      a_(std::make_unique<End>(ab_, ba_)),
      b_(std::make_unique<End>(ba_, ab_)) {}

void InMemoryDuplex::close() {
    for (auto& q : {ab_, ba_}) {
        std::lock_guard<std::mutex> lock(q->mutex);
        q->closed = true;
        q->ready.notify_all();
    }
}

}  // namespace noisekey
