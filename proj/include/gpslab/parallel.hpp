#pragma once
#include <cstdint>
#include <vector>

namespace gpslab {

// 0 restores the OpenMP default
void set_workers(int n);
int workers();

// out[k] = f(k) for k < n. Each index owns its RNG stream, so results do
// not depend on the number of threads.
template <class T, class F>
std::vector<T> sample_map(std::int64_t n, F&& f) {
    std::vector<T> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = f(static_cast<std::uint64_t>(k));
    return out;
}

}  // namespace gpslab
