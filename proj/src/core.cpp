#include <algorithm>

#include "gpslab/geometry.hpp"
#include "gpslab/parallel.hpp"
#include "gpslab/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gpslab {

bool valid_trajectory(const Trajectory& t) {
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k].i < 1 || t[k].j < 1) return false;
        if (k > 0 && !precedes(t[k - 1], t[k])) return false;
    }
    return true;
}

Trajectory restrict_to_box(const Trajectory& t, Box b) {
    Trajectory out;
    for (auto p : t)
        if (in_box(p, b)) out.push_back(p);
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index ^ 0x5851F42D4C957F2Dull));
}

Philox::Philox(std::uint64_t seed)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

Philox::block_t Philox::bijection(block_t c, key_t k) {
    constexpr std::uint32_t M0 = 0xD2511F53, M1 = 0xCD9E8D57;
    constexpr std::uint32_t W0 = 0x9E3779B9, W1 = 0xBB67AE85;
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        k[0] += W0;
        k[1] += W1;
    }
    return c;
}

Philox::result_type Philox::operator()() {
    if (pos_ >= 4) {
        buf_ = bijection({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32), 0, 0}, key_);
        ++counter_;
        pos_ = 0;
    }
    const std::uint64_t hi = buf_[pos_], lo = buf_[pos_ + 1];
    pos_ += 2;
    return (hi << 32) | lo;
}

void set_workers(int n) {
#ifdef _OPENMP
    if (n <= 0) n = omp_get_num_procs();
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int workers() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace gpslab
