// Microbenchmarks for the hot paths: symbol coding, noise sampling, posterior
// evaluation, privacy amplification, frame codec, and a whole in-memory
// session. Run `noisekey_bench --benchmark_filter=...` to narrow.

#include <benchmark/benchmark.h>

#include <noisekey/adversary.hpp>
#include <noisekey/session.hpp>
#include <thread>

using namespace noisekey;

namespace {

void bm_encode_decode_sector(benchmark::State& state) {
    WheelConfig cfg = WheelConfig::sector(0.1);
    EntropySource src = EntropySource::seeded(1);
    std::uint8_t sink = 0;
    for (auto _ : state) {
        std::uint32_t k = src.fresh_bit();
        std::uint8_t bit = src.fresh_bit();
        sink ^= decode(cfg, k, encode(cfg, k, bit, src.normal(0.1)));
    }
    benchmark::DoNotOptimize(sink);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_encode_decode_sector);

void bm_encode_decode_uniform256(benchmark::State& state) {
    WheelConfig cfg = WheelConfig::uniform(256);
    EntropySource src = EntropySource::seeded(2);
    std::uint8_t sink = 0;
    for (auto _ : state) {
        std::uint32_t k = static_cast<std::uint32_t>(src.next_u64() & 0xFF);
        std::uint8_t bit = src.fresh_bit();
        sink ^= decode(cfg, k, encode(cfg, k, bit, src.normal(0.1)));
    }
    benchmark::DoNotOptimize(sink);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_encode_decode_uniform256);

void bm_normal_draw(benchmark::State& state) {
    EntropySource src = EntropySource::seeded(3);
    double sink = 0;
    for (auto _ : state) sink += src.normal(0.5);
    benchmark::DoNotOptimize(sink);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_normal_draw);

void bm_eavesdropper_posterior(benchmark::State& state) {
    WheelConfig cfg = WheelConfig::sector(0.02);
    EntropySource src = EntropySource::seeded(4);
    double sink = 0;
    for (auto _ : state) {
        Phase y = encode(cfg, src.fresh_bit(), src.fresh_bit(), src.normal(0.4));
        sink += eavesdropper_posterior(cfg, 0.4, y);
    }
    benchmark::DoNotOptimize(sink);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_eavesdropper_posterior);

void bm_entropy_accumulation(benchmark::State& state) {
    WheelConfig cfg = WheelConfig::sector(0.02);
    EntropySource src = EntropySource::seeded(5);
    for (auto _ : state) {
        EntropyAccumulator acc;
        accumulate_eavesdropper_entropy(cfg, 0.4, src, 1000, acc);
        benchmark::DoNotOptimize(acc.estimate().bits);
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(bm_entropy_accumulation);

void bm_toeplitz_amplify(benchmark::State& state) {
    std::size_t n = static_cast<std::size_t>(state.range(0));
    std::size_t m = n - n / 3;
    EntropySource src = EntropySource::seeded(6);
    Bits input = src.fresh_bits(n);
    Bits seed = src.fresh_bits(n + m - 1);
    for (auto _ : state) {
        Bits out = toeplitz_amplify(input, seed, m);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(bm_toeplitz_amplify)->Arg(1000)->Arg(8192);

void bm_frame_round_trip(benchmark::State& state) {
    std::vector<std::uint16_t> quanta(1000);
    for (std::size_t i = 0; i < quanta.size(); ++i)
        quanta[i] = static_cast<std::uint16_t>(i * 37);
    Frame f;
    f.type = FrameType::Phases;
    f.session_id = 7;
    f.cycle = 1;
    f.payload = encode_phases(quanta);
    for (auto _ : state) {
        std::vector<std::uint8_t> bytes = encode_frame(f);
        Frame back = decode_frame(bytes);
        benchmark::DoNotOptimize(back.payload.data());
    }
    state.SetBytesProcessed(state.iterations() *
                            static_cast<std::int64_t>(encode_frame(f).size()));
}
BENCHMARK(bm_frame_round_trip);

void bm_session_pair(benchmark::State& state) {
    ProtocolParams params;
    params.wheel = WheelConfig::sector(0.1);
    params.sigma = 0.1;
    params.symbols_per_cycle = 1000;
    params.cycles = 10;
    params.f_retain = 0.9991;
    EntropySource keysrc = EntropySource::seeded(8);
    Bits k0 = keysrc.fresh_bits(1064);

    for (auto _ : state) {
        InMemoryDuplex duplex;
        SessionOptions oa;
        oa.role = Role::Initiator;
        oa.params = params;
        oa.k0 = k0;
        oa.entropy = EntropySource::seeded(9);
        oa.record_transcript = false;
        SessionOptions ob = oa;
        ob.role = Role::Responder;
        ob.entropy = EntropySource::seeded(10);

        SessionResult ra;
        std::thread t([&] { ra = run_endpoint(duplex.a(), oa); });
        SessionResult rb = run_endpoint(duplex.b(), ob);
        t.join();
        benchmark::DoNotOptimize(ra.keystream.size() + rb.keystream.size());
    }
    state.SetItemsProcessed(state.iterations() * 10000);  // raw symbols
}
BENCHMARK(bm_session_pair)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
