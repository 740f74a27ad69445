#include "gpslab/partition.hpp"

#include <algorithm>
#include <cmath>

#include "gpslab/detail/diagonal.hpp"
#include "gpslab/errors.hpp"

namespace gpslab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double ScaledGrid::log_value(int i, int j) const {
    const double v = m(i, j);
    return v > 0 ? std::log(v) + diag_log_scale[i + j] : kNegInf;
}

LogWeights quenched_weights(const StrandSample& s, const StrandLaw& slaw, double beta, double h) {
    const double lam = log_mgf(slaw, beta);
    LogWeights w;
    w.box = s.box();
    w.w.resize(static_cast<std::size_t>(w.box.n1) * w.box.n2);
    for (int i = 1; i <= w.box.n1; ++i)
        for (int j = 1; j <= w.box.n2; ++j)
            w.w[static_cast<std::size_t>(i - 1) * w.box.n2 + (j - 1)] = beta * s.hat[i - 1] * s.bar[j - 1] - lam + h;
    return w;
}

LogWeights constant_weights(Box box, double h) {
    LogWeights w;
    w.box = box;
    w.w.assign(static_cast<std::size_t>(box.n1) * box.n2, h);
    return w;
}

ScaledGrid solve_grid(const RenewalLaw& law, const LogWeights& w, const DpOptions& opt, ScaledGrid* contacts) {
    const int n1 = w.box.n1, n2 = w.box.n2, D = n1 + n2;
    law.check_box(w.box);
    if (!(opt.m_cap > 1.0)) throw DomainError("m_cap", "m_cap must exceed 1");
    const auto& K = law.K_table();
    const bool with_c = contacts != nullptr;

    ScaledGrid z;
    z.box = w.box;
    z.m_cap = opt.m_cap;
    z.mantissa.assign(static_cast<std::size_t>(n1 + 1) * (n2 + 1), 0.0);
    z.diag_log_scale.assign(D + 1, 0.0);

    std::vector<std::vector<double>> zm(D + 1), cm(with_c ? D + 1 : 0);
    std::vector<detail::DiagSums> zs(D + 1), cs(with_c ? D + 1 : 0);
    std::vector<char> live(D + 1, 0);  // diagonal has a nonzero entry
    zm[0] = {1.0};
    zs[0].build(zm[0].data(), 0, 0);
    live[0] = 1;
    if (with_c) {
        cm[0] = {0.0};
        cs[0].build(cm[0].data(), 0, 0);
    }
    double top = 0.0;  // max scale over live diagonals
    std::vector<double> f(D + 1, 0.0);

    for (int d = 2; d <= D; ++d) {
        const int lo = detail::diag_lo(d, n2), hi = detail::diag_hi(d, n1);
        const int len = hi - lo + 1;
        // common reference scale for every earlier diagonal
        for (int s = 0; s <= d - 2; ++s) f[s] = live[s] ? std::exp(z.diag_log_scale[s] - top) : 0.0;
        double wmax = kNegInf;
        for (int i = lo; i <= hi; ++i) wmax = std::max(wmax, w(i, d - i));
        if (!std::isfinite(wmax)) wmax = 0.0;

        auto& row = zm[d];
        row.assign(len, 0.0);
        if (with_c) cm[d].assign(len, 0.0);
#pragma omp parallel for schedule(static) if (len > 64)
        for (int i = lo; i <= hi; ++i) {
            const int j = d - i;
            double acc = 0.0, acc_c = 0.0;
            for (int s = 0; s <= d - 2; ++s) {
                if (f[s] == 0.0) continue;
                const auto& S = zs[s];
                const int a0 = std::max(S.lo, s - j + 1), a1 = std::min(S.hi, i - 1);
                if (a0 > a1) continue;
                const double k = K[d - s] * f[s];
                acc += k * S.segment(a0, a1);
                if (with_c) acc_c += k * cs[s].segment(a0, a1);
            }
            const double e = std::exp(w(i, j) - wmax);
            row[i - lo] = acc * e;
            if (with_c) cm[d][i - lo] = acc_c * e + row[i - lo];
        }
        double scale = top + wmax;
        double mx = 0.0;
        for (double v : row) mx = std::max(mx, v);
        if (mx > 0.0 && (mx > opt.m_cap || mx < 1.0 / opt.m_cap)) {
            // exact power-of-two rescale
            const int ex = std::ilogb(mx);
            for (auto& v : row) v = std::ldexp(v, -ex);
            if (with_c)
                for (auto& v : cm[d]) v = std::ldexp(v, -ex);
            scale += ex * std::log(2.0);
        }
        z.diag_log_scale[d] = scale;
        if (mx > 0.0) {
            live[d] = 1;
            top = std::max(top, scale);
        }
        zs[d].build(row.data(), lo, hi);
        if (with_c) cs[d].build(cm[d].data(), lo, hi);
    }

    auto fill = [&](ScaledGrid& g, const std::vector<std::vector<double>>& src) {
        g.mantissa[0] = src[0][0];
        for (int d = 2; d <= D; ++d) {
            const int lo = detail::diag_lo(d, n2), hi = detail::diag_hi(d, n1);
            for (int i = lo; i <= hi; ++i)
                g.mantissa[static_cast<std::size_t>(i) * (n2 + 1) + (d - i)] = src[d][i - lo];
        }
    };
    fill(z, zm);
    if (with_c) {
        *contacts = z;
        fill(*contacts, cm);
    }
    return z;
}

double free_log_sum(const RenewalLaw& law, const ScaledGrid& z) {
    const int n1 = z.box.n1, n2 = z.box.n2, D = n1 + n2;
    std::vector<double> part(D + 1, 0.0);
    part[0] = z.m(0, 0) * law.exit_mass(n1, n2);
    for (int d = 2; d <= D; ++d) {
        long double s = 0;
        for (int i = detail::diag_lo(d, n2); i <= detail::diag_hi(d, n1); ++i)
            s += z.m(i, d - i) * law.exit_mass(n1 - i, n2 - (d - i));
        part[d] = static_cast<double>(s);
    }
    double top = kNegInf;
    for (int d = 0; d <= D; ++d)
        if (part[d] > 0) top = std::max(top, std::log(part[d]) + z.diag_log_scale[d]);
    if (top == kNegInf) return kNegInf;
    long double acc = 0;
    for (int d = 0; d <= D; ++d)
        if (part[d] > 0) acc += std::exp(std::log(part[d]) + z.diag_log_scale[d] - top);
    return top + static_cast<double>(std::log(acc));
}

PartitionResult partition_from_weights(const RenewalLaw& law, const LogWeights& w, Mode mode, const DpOptions& opt) {
    const ScaledGrid z = solve_grid(law, w, opt);
    PartitionResult r;
    r.mode = mode;
    r.box = w.box;
    r.log_value = mode == Mode::constrained ? z.log_value(w.box.n1, w.box.n2) : free_log_sum(law, z);
    return r;
}

PartitionResult quenched_partition(const RenewalLaw& rlaw, const StrandSample& s, const StrandLaw& slaw, double beta,
                                   double h, Box box, Mode mode, const DpOptions& opt) {
    if (!(s.box() == box)) throw RangeError("quenched_partition: strand sample does not match the box");
    return partition_from_weights(rlaw, quenched_weights(s, slaw, beta, h), mode, opt);
}

PartitionResult homogeneous_partition(const RenewalLaw& rlaw, double h, Box box, Mode mode, const DpOptions& opt) {
    return partition_from_weights(rlaw, constant_weights(box, h), mode, opt);
}

PartitionResult conditioned_partition(const RenewalLaw& rlaw, const StrandSample& s, const StrandLaw& slaw,
                                      double beta, double h, Point a, Point b, const DpOptions& opt) {
    PartitionResult r;
    r.box = {b.i - a.i, b.j - a.j};
    if (!precedes(a, b)) return r;
    if (a.i < 0 || a.j < 0 || b.i > static_cast<int>(s.hat.size()) || b.j > static_cast<int>(s.bar.size()))
        throw RangeError("conditioned_partition: points outside the sample");
    StrandSample sub;
    sub.hat.assign(s.hat.begin() + a.i, s.hat.begin() + b.i);
    sub.bar.assign(s.bar.begin() + a.j, s.bar.begin() + b.j);
    return quenched_partition(rlaw, sub, slaw, beta, h, r.box, Mode::constrained, opt);
}

double contact_fraction(const RenewalLaw& rlaw, const StrandSample& s, const StrandLaw& slaw, double beta, double h,
                        Box box, const DpOptions& opt) {
    if (!(s.box() == box)) throw RangeError("contact_fraction: strand sample does not match the box");
    ScaledGrid c;
    const ScaledGrid z = solve_grid(rlaw, quenched_weights(s, slaw, beta, h), opt, &c);
    const double zv = z.m(box.n1, box.n2);
    if (!(zv > 0)) throw DomainError("h", "partition function underflowed to zero");
    return c.m(box.n1, box.n2) / zv / box.n1;
}

namespace reference {

PartitionResult naive_partition(const RenewalLaw& law, const LogWeights& w, Mode mode) {
    const int n1 = w.box.n1, n2 = w.box.n2;
    law.check_box(w.box);
    std::vector<long double> Z(static_cast<std::size_t>(n1 + 1) * (n2 + 1), 0.0L);
    auto at = [&](int i, int j) -> long double& { return Z[static_cast<std::size_t>(i) * (n2 + 1) + j]; };
    at(0, 0) = 1.0L;
    for (int i = 1; i <= n1; ++i)
        for (int j = 1; j <= n2; ++j) {
            long double acc = law.K(i + j);
            for (int a = 1; a < i; ++a)
                for (int b = 1; b < j; ++b) acc += at(a, b) * static_cast<long double>(law.K(i - a + j - b));
            at(i, j) = acc * std::exp(static_cast<long double>(w(i, j)));
        }
    PartitionResult r;
    r.mode = mode;
    r.box = w.box;
    long double v;
    if (mode == Mode::constrained) {
        v = at(n1, n2);
    } else {
        v = law.exit_mass(n1, n2);
        for (int i = 1; i <= n1; ++i)
            for (int j = 1; j <= n2; ++j) v += at(i, j) * static_cast<long double>(law.exit_mass(n1 - i, n2 - j));
    }
    r.log_value = v > 0 ? static_cast<double>(std::log(v)) : kNegInf;
    return r;
}

}  // namespace reference

}  // namespace gpslab
