#pragma once
#include <array>
#include <cstdint>
#include <limits>

namespace gpslab {

std::uint64_t splitmix64(std::uint64_t x);

// Philox4x32-10 (Salmon et al.), used as a UniformRandomBitGenerator with 64-bit output.
class Philox {
public:
    using result_type = std::uint64_t;
    using block_t = std::array<std::uint32_t, 4>;
    using key_t = std::array<std::uint32_t, 2>;

    explicit Philox(std::uint64_t seed = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    // uniform on [0,1) with 53 random bits
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    static block_t bijection(block_t ctr, key_t key);

private:
    key_t key_;
    std::uint64_t counter_ = 0;
    block_t buf_{};
    int pos_ = 4;
};

// stream for sample `index` of a run with `master` seed; depends on nothing else
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);
inline Philox sample_rng(std::uint64_t master, std::uint64_t index) { return Philox(derive_seed(master, index)); }

}  // namespace gpslab
