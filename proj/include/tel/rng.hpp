#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

namespace tel::randomlab {

// Seed bookkeeping for one generator stream.
struct RngSpec {
    uint64_t master = 0;
    uint64_t stream = 0;
};

// Counter-based generator (splitmix64): the state walks an arithmetic
// progression and the output is a bijective mix of the counter, so
// (master, stream, draw index) fully determines every variate. Streams are
// cheap and independent by construction.
class StreamRng {
public:
    StreamRng(uint64_t master, uint64_t stream)
        : state_(mix(master + 0x9E3779B97F4A7C15ULL * (stream + 1))) {}
    explicit StreamRng(const RngSpec& spec) : StreamRng(spec.master, spec.stream) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Unbiased integer in [0, n) by rejection.
    uint64_t below(uint64_t n) {
        uint64_t reject = (-n) % n;  // 2^64 mod n
        uint64_t r = next_u64();
        while (r < reject) r = next_u64();
        return r % n;
    }

    // Uniform in the open interval (0,1), 53-bit resolution.
    double unit_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    // Standard normal via Box-Muller, one spare cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double r = std::sqrt(-2.0 * std::log(unit_open()));
        double theta = 2.0 * 3.141592653589793238462643383279502884 * unit_open();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    std::complex<double> complex_normal() {
        double re = normal();
        return {re, normal()};
    }

private:
    static uint64_t mix(uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Trials are split into fixed-size blocks; block j draws from stream j of
// the master seed, so results are a pure function of (master, trials) and
// never depend on the worker count. Partial results are combined in
// ascending block order.
inline constexpr uint64_t kTrialBlock = 65536;

template <typename Result, typename BlockFn>
std::vector<Result> run_trial_blocks(uint64_t trials, uint64_t master, int threads,
                                     BlockFn block_fn) {
    uint64_t nblocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<Result> parts(static_cast<size_t>(nblocks));
    if (nblocks == 0) return parts;
    if (threads < 1) threads = 1;
    if (static_cast<uint64_t>(threads) > nblocks) threads = static_cast<int>(nblocks);

    std::atomic<uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            uint64_t j = next.fetch_add(1);
            if (j >= nblocks) return;
            uint64_t begin = j * kTrialBlock;
            uint64_t end = std::min(trials, begin + kTrialBlock);
            StreamRng rng(master, j);
            parts[static_cast<size_t>(j)] = block_fn(begin, end, rng);
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return parts;
}

}  // namespace tel::randomlab
