#pragma once
#include <cmath>
#include <vector>

#include "gpslab/geometry.hpp"

namespace gpslab {

struct Estimate {
    double value = 0.0;
    double std_err = 0.0;  // sample std / sqrt(samples)
    long samples = 0;
    Box box{};
};

// Mean and standard error, summed in index order in long double so the
// result does not depend on how the samples were produced.
inline Estimate summarize(const std::vector<double>& x, Box box = {}) {
    Estimate e;
    e.samples = static_cast<long>(x.size());
    e.box = box;
    if (x.empty()) return e;
    long double s = 0;
    for (double v : x) s += v;
    const long double mean = s / x.size();
    long double ss = 0;
    for (double v : x) ss += (v - mean) * (v - mean);
    e.value = static_cast<double>(mean);
    if (x.size() > 1) e.std_err = static_cast<double>(std::sqrt(ss / (x.size() - 1) / x.size()));
    return e;
}

}  // namespace gpslab
