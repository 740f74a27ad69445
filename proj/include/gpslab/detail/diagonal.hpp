#pragma once
#include <algorithm>
#include <vector>

namespace gpslab::detail {

// Cells (a, d-a) of one anti-diagonal for a in [lo, hi], with prefix and suffix
// sums. A segment is read from whichever side subtracts the smaller part, so
// short segments at either end carry no cancellation.
struct DiagSums {
    int lo = 0, hi = -1;
    std::vector<double> pre, suf;

    void build(const double* v, int lo_, int hi_) {
        lo = lo_;
        hi = hi_;
        const int len = hi - lo + 1;
        pre.assign(len + 1, 0.0);
        suf.assign(len + 1, 0.0);
        for (int k = 0; k < len; ++k) pre[k + 1] = pre[k] + v[k];
        for (int k = len - 1; k >= 0; --k) suf[k] = suf[k + 1] + v[k];
    }

    double segment(int a, int b) const {
        a = std::max(a, lo);
        b = std::min(b, hi);
        if (a > b) return 0.0;
        const int x = a - lo, y = b - lo + 1, len = hi - lo + 1;
        if (x == 0) return pre[y];
        if (y == len) return suf[x];
        const double below = pre[x], above = suf[y];
        return below <= above ? pre[y] - below : suf[x] - above;
    }
};

// interior cells of anti-diagonal d in an n1 x n2 box: a in [lo, hi]
inline int diag_lo(int d, int n2) { return std::max(1, d - n2); }
inline int diag_hi(int d, int n1) { return std::min(n1, d - 1); }

}  // namespace gpslab::detail
