#include "gpslab/renewal.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>

#include "gpslab/detail/diagonal.hpp"
#include "gpslab/errors.hpp"
#include "gpslab/parallel.hpp"

namespace gpslab {

SlowVary SlowVary::log_power(double kappa) {
    SlowVary s;
    s.kind = Kind::log_power;
    s.kappa = kappa;
    return s;
}

SlowVary SlowVary::table(std::vector<double> values) {
    if (values.empty()) throw DomainError("L.values", "slowly varying table must be nonempty");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("L.values", "slowly varying table entries must be positive");
    SlowVary s;
    s.kind = Kind::table;
    s.values = std::move(values);
    return s;
}

double SlowVary::operator()(double t) const {
    switch (kind) {
    case Kind::constant: return 1.0;
    case Kind::log_power: return std::pow(std::log1p(t), kappa);
    case Kind::table: {
        const long k = std::clamp(static_cast<long>(std::floor(t)) - 2, 0L, static_cast<long>(values.size()) - 1);
        return values[k];
    }
    }
    return 1.0;
}

long SlowVary::smooth_from() const {
    return kind == Kind::table ? static_cast<long>(values.size()) + 8 : 2;
}

double tail_sum(const std::function<double(double)>& f, long m, long from) {
    const long M = std::max(m, from);
    long double s = 0;
    for (long t = m; t < M; ++t) s += f(static_cast<double>(t));
    boost::math::quadrature::exp_sinh<double> q;
    const double x = static_cast<double>(M);
    const double I = q.integrate(f, x, std::numeric_limits<double>::infinity(), 1e-14);
    const double h = std::max(1.0, 0.01 * x);
    const double fp = f(x + h), fm = f(x - h), fp2 = f(x + 2 * h), fm2 = f(x - 2 * h);
    const double d1 = (fp - fm) / (2 * h);
    const double d3 = (fp2 - 2 * fp + 2 * fm - fm2) / (2 * h * h * h);
    return static_cast<double>(s) + I + f(x) / 2 - d1 / 12 + d3 / 720;
}

namespace {

long em_start(const SlowVary& L) { return std::max(2048L, L.smooth_from()); }

// unnormalized (t-1) L(t) t^{-2-alpha}
double g_unit(double alpha, const SlowVary& L, double t) { return (t - 1) * L(t) * std::pow(t, -2.0 - alpha); }

double exact_norm(double alpha, const SlowVary& L) {
    const long from = em_start(L);
    long double s = 0;
    for (long t = 2; t < from; ++t) s += g_unit(alpha, L, t);
    s += tail_sum([&](double t) { return g_unit(alpha, L, t); }, from, from);
    return static_cast<double>(1.0L / s);
}

}  // namespace

long min_horizon(double alpha, const SlowVary& L, double tail_tol) {
    const double c = exact_norm(alpha, L);
    auto ok = [&](long H) { return c * g_unit(alpha, L, static_cast<double>(H)) < tail_tol; };
    long hi = 4;
    while (!ok(hi)) {
        hi *= 2;
        if (hi > (1L << 40)) throw RangeError("no horizon reaches tail_tol");
    }
    long lo = hi / 2;
    while (hi - lo > 1) {
        const long mid = (lo + hi) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return std::max(hi, std::max(2L, L.smooth_from()));
}

double normalize(double alpha, const SlowVary& L, long horizon, double tail_tol) {
    if (!(alpha > 0)) throw DomainError("alpha", "alpha must be positive");
    if (!(tail_tol > 0)) throw DomainError("tail_tol", "tail_tol must be positive");
    const double c = exact_norm(alpha, L);
    if (horizon < 2 || !(c * g_unit(alpha, L, static_cast<double>(horizon)) < tail_tol))
        throw RangeError("horizon " + std::to_string(horizon) + " too small for tail_tol; need at least " +
                         std::to_string(min_horizon(alpha, L, tail_tol)));
    return c;
}

RenewalLaw::RenewalLaw(double alpha, SlowVary L, long horizon, double tail_tol)
    : alpha_(alpha), L_(std::move(L)), tol_(tail_tol) {
    if (!(alpha > 0)) throw DomainError("alpha", "alpha must be positive");
    H_ = horizon > 0 ? horizon : std::max(4096L, min_horizon(alpha, L_, tail_tol));
    c_ = normalize(alpha, L_, H_, tail_tol);

    const long top = H_ + 3;
    Kt_.assign(top, 0.0);
    for (long t = 2; t < top; ++t) Kt_[t] = K(t);
    const double a = alpha_;
    const SlowVary& Lr = L_;
    const double c = c_;
    const long from = std::max(top, em_start(L_));

    S0_.assign(top + 1, 0.0);
    G_.assign(top + 1, 0.0);
    S0_[top] = c * tail_sum([&](double t) { return Lr(t) * std::pow(t, -2.0 - a); }, top, from);
    G_[top] = c * tail_sum([&](double t) { return (t - top + 1) * Lr(t) * std::pow(t, -2.0 - a); }, top, from);
    for (long m = top - 1; m >= 2; --m) {
        S0_[m] = S0_[m + 1] + Kt_[m];
        G_[m] = G_[m + 1] + S0_[m];
    }
    S0_[0] = S0_[1] = S0_[2];
    G_[0] = G_[1] = 0.0;  // not used

    cdf_.assign(H_ + 1, 0.0);
    for (long t = 2; t <= H_; ++t) cdf_[t] = cdf_[t - 1] + (t - 1) * Kt_[t];
}

double RenewalLaw::K(long t) const {
    if (t < 2) return 0.0;
    const double x = static_cast<double>(t);
    return c_ * L_(x) * std::pow(x, -2.0 - alpha_);
}

double RenewalLaw::interarrival_mass(long a, long b) const {
    if (a < 1 || b < 1) throw RangeError("interarrival_mass: a and b must be >= 1");
    if (a + b > H_) throw RangeError("interarrival_mass: a+b exceeds horizon " + std::to_string(H_));
    return Kt_[a + b];
}

double RenewalLaw::mass_within_horizon() const { return cdf_[H_]; }

double RenewalLaw::escape_mass() const { return tail_G(H_ + 1) + static_cast<double>(H_ - 1) * tail_K(H_ + 1); }

double RenewalLaw::tail_K(long m) const {
    if (m < 2) m = 2;
    if (m < static_cast<long>(S0_.size())) return S0_[m];
    const double a = alpha_;
    return c_ * tail_sum([&](double t) { return L_(t) * std::pow(t, -2.0 - a); }, m, std::max(m, em_start(L_)));
}

double RenewalLaw::tail_G(long m) const {
    if (m < 2) return tail_G(2) + static_cast<double>(2 - m) * tail_K(2);
    if (m < static_cast<long>(G_.size())) return G_[m];
    const double a = alpha_;
    return c_ * tail_sum([&](double t) { return (t - m + 1) * L_(t) * std::pow(t, -2.0 - a); }, m,
                         std::max(m, em_start(L_)));
}

double RenewalLaw::exit_mass(long A, long B) const {
    return tail_G(A + 2) + tail_G(B + 2) - tail_G(A + B + 2);
}

long RenewalLaw::sample_total(double u) const {
    if (u >= cdf_[H_]) return 0;
    const auto it = std::upper_bound(cdf_.begin() + 2, cdf_.end(), u);
    return static_cast<long>(it - cdf_.begin());
}

Point RenewalLaw::sample_jump(Philox& rng) const {
    const long t = sample_total(rng.uniform());
    if (t == 0) return {0, 0};
    long a = 1 + static_cast<long>(rng.uniform() * static_cast<double>(t - 1));
    a = std::min(a, t - 1);
    return {static_cast<int>(a), static_cast<int>(t - a)};
}

void RenewalLaw::check_box(Box b) const {
    if (b.n1 < 1 || b.n2 < 1) throw RangeError("box sides must be >= 1");
    if (static_cast<long>(b.n1) + b.n2 > H_)
        throw RangeError("box (" + std::to_string(b.n1) + "," + std::to_string(b.n2) + ") exceeds horizon " +
                         std::to_string(H_));
}

Trajectory sample_trajectory(const RenewalLaw& law, Philox& rng, Box box, Mode mode) {
    law.check_box(box);
    Trajectory path;
    if (mode == Mode::free) {
        Point pos{0, 0};
        for (;;) {
            const Point step = law.sample_jump(rng);
            if (step.i == 0) break;
            const Point next{pos.i + step.i, pos.j + step.j};
            if (!in_box(next, box)) break;
            path.push_back(next);
            pos = next;
        }
        return path;
    }

    if (box.n1 <= 8 && box.n2 <= 8) {
        // backward draw from the exact hitting probabilities
        const Grid u = renewal_mass_grid(law, box);
        Point cur{box.n1, box.n2};
        while (cur.i > 0) {
            path.push_back(cur);
            double total = law.K(cur.i + cur.j);
            for (int a = 1; a < cur.i; ++a)
                for (int b = 1; b < cur.j; ++b) total += u(a, b) * law.K(cur.i - a + cur.j - b);
            double r = rng.uniform() * total;
            Point prev{0, 0};
            r -= law.K(cur.i + cur.j);
            for (int a = 1; a < cur.i && r >= 0; ++a)
                for (int b = 1; b < cur.j && r >= 0; ++b) {
                    r -= u(a, b) * law.K(cur.i - a + cur.j - b);
                    if (r < 0) prev = {a, b};
                }
            cur = prev;
        }
        std::reverse(path.begin(), path.end());
        return path;
    }

    constexpr std::uint64_t budget = 1000000;
    const Point end{box.n1, box.n2};
    for (std::uint64_t attempt = 1; attempt <= budget; ++attempt) {
        path.clear();
        Point pos{0, 0};
        for (;;) {
            const Point step = law.sample_jump(rng);
            if (step.i == 0) break;
            pos = {pos.i + step.i, pos.j + step.j};
            if (pos.i > end.i || pos.j > end.j) break;
            path.push_back(pos);
            if (pos == end) return path;
            if (pos.i == end.i || pos.j == end.j) break;
        }
    }
    throw RejectionBudgetError(budget);
}

Grid renewal_mass_grid(const RenewalLaw& law, Box box) {
    law.check_box(box);
    const int n1 = box.n1, n2 = box.n2, D = n1 + n2;
    const auto& K = law.K_table();
    Grid u(n1, n2);
    u(0, 0) = 1.0;
    std::vector<detail::DiagSums> sums(D + 1);
    const double one = 1.0;
    sums[0].build(&one, 0, 0);
    std::vector<double> vals;
    for (int d = 2; d <= D; ++d) {
        const int lo = detail::diag_lo(d, n2), hi = detail::diag_hi(d, n1);
        vals.assign(hi - lo + 1, 0.0);
        for (int i = lo; i <= hi; ++i) {
            const int j = d - i;
            double acc = K[d];
            for (int s = 2; s <= d - 2; ++s)
                acc += K[d - s] * sums[s].segment(std::max(sums[s].lo, s - j + 1), std::min(sums[s].hi, i - 1));
            vals[i - lo] = acc;
            u(i, j) = acc;
        }
        sums[d].build(vals.data(), lo, hi);
    }
    return u;
}

Grid convolve_K(const RenewalLaw& law, const Grid& in) {
    const int n1 = in.n1, n2 = in.n2, D = n1 + n2;
    law.check_box({n1, n2});
    const auto& K = law.K_table();
    Grid out(n1, n2);
    std::vector<detail::DiagSums> sums(D + 1);
    const double origin = in(0, 0);
    sums[0].build(&origin, 0, 0);
    std::vector<double> vals;
    for (int d = 2; d <= D; ++d) {
        const int lo = detail::diag_lo(d, n2), hi = detail::diag_hi(d, n1);
        vals.assign(hi - lo + 1, 0.0);
        for (int i = lo; i <= hi; ++i) vals[i - lo] = in(i, d - i);
        for (int i = lo; i <= hi; ++i) {
            const int j = d - i;
            double acc = K[d] * origin;
            for (int s = 2; s <= d - 2; ++s)
                acc += K[d - s] * sums[s].segment(std::max(sums[s].lo, s - j + 1), std::min(sums[s].hi, i - 1));
            out(i, j) = acc;
        }
        sums[d].build(vals.data(), lo, hi);
    }
    return out;
}

Grid epoch_mass_grid(const RenewalLaw& law, int j, Box box) {
    if (j < 1) throw RangeError("epoch index must be >= 1");
    Grid p(box.n1, box.n2);
    p(0, 0) = 1.0;
    for (int k = 0; k < j; ++k) p = convolve_K(law, p);
    return p;
}

double truncated_mean(const RenewalLaw& law, long n) {
    long double s = 0;
    for (long a = 1; a <= n; ++a) s += static_cast<long double>(a) * law.projection_interarrival(a);
    return static_cast<double>(s);
}

namespace {

double full_mean(const RenewalLaw& law) {
    if (law.alpha() <= 1.0) return std::numeric_limits<double>::infinity();
    const long H = law.horizon();
    long double s = 0;
    for (long t = 2; t <= H; ++t) s += law.K(t) * 0.5 * t * (t - 1.0);
    const double a = law.alpha(), c = law.norm_const();
    const auto& L = law.slow_vary();
    s += c * tail_sum([&](double t) { return 0.5 * t * (t - 1) * L(t) * std::pow(t, -2.0 - a); }, H + 1,
                      std::max(H + 1, 2048L));
    return static_cast<double>(s);
}

// truncated variance of tau_1^(1) over a <= n
double truncated_variance(const RenewalLaw& law, long n) {
    long double m1 = 0, m2 = 0;
    for (long a = 1; a <= n; ++a) {
        const long double p = law.projection_interarrival(a);
        m1 += a * p;
        m2 += static_cast<long double>(a) * a * p;
    }
    return static_cast<double>(m2 - m1 * m1);
}

}  // namespace

ScalingSeq scaling_sequences(const RenewalLaw& law, long n) {
    if (n < 1) throw RangeError("scaling_sequences: n must be >= 1");
    const double a = law.alpha();
    ScalingSeq s;
    s.mu_n = truncated_mean(law, n);
    if (a < 2.0) {
        const double psi = std::pow(law.norm_const() * law.slow_vary()(static_cast<double>(n)) / (a * (1 + a)), 1.0 / a);
        s.a_n = psi * std::pow(static_cast<double>(n), 1.0 / a);
    } else {
        const long cut = a > 2.0 ? law.horizon() : n;
        s.a_n = std::sqrt(truncated_variance(law, cut)) * std::sqrt(static_cast<double>(n));
    }
    if (a < 1.0)
        s.b_n = 0.0;
    else if (a == 1.0)
        s.b_n = n * truncated_mean(law, std::max(1L, static_cast<long>(std::floor(s.a_n))));
    else
        s.b_n = n * full_mean(law);
    return s;
}

int projection_overlap(const Trajectory& t1, const Trajectory& t2, int coord) {
    int n = 0;
    std::size_t x = 0, y = 0;
    auto key = [coord](Point p) { return coord == 1 ? p.i : p.j; };
    while (x < t1.size() && y < t2.size()) {
        const int u = key(t1[x]), v = key(t2[y]);
        if (u == v) {
            ++n;
            ++x;
            ++y;
        } else if (u < v) {
            ++x;
        } else {
            ++y;
        }
    }
    return n;
}

int bivariate_overlap(const Trajectory& t1, const Trajectory& t2) {
    int n = 0;
    std::size_t x = 0, y = 0;
    while (x < t1.size() && y < t2.size()) {
        if (t1[x] == t2[y]) {
            ++n;
            ++x;
            ++y;
        } else if (t1[x] < t2[y]) {
            ++x;
        } else {
            ++y;
        }
    }
    return n;
}

namespace {

CounterSummary counter_summary(const std::vector<double>& x, Box box) {
    CounterSummary c;
    c.mean = summarize(x, box);
    c.variance = c.mean.std_err * c.mean.std_err * static_cast<double>(x.size());
    c.geometric_q = c.mean.value / (1.0 + c.mean.value);
    return c;
}

}  // namespace

IntersectionSummary intersection_stats(const RenewalLaw& law, Box box, long samples, std::uint64_t seed) {
    IntersectionSummary out;
    if (samples <= 0) return out;
    law.check_box(box);
    struct Row {
        int bi, p1, p2;
    };
    auto rows = sample_map<Row>(samples, [&](std::uint64_t k) {
        // one stream per replica, so a smaller box sees a prefix of the same pair
        Philox ra = sample_rng(seed, 2 * k), rb = sample_rng(seed, 2 * k + 1);
        const Trajectory a = sample_trajectory(law, ra, box, Mode::free);
        const Trajectory b = sample_trajectory(law, rb, box, Mode::free);
        return Row{bivariate_overlap(a, b), projection_overlap(a, b, 1), projection_overlap(a, b, 2)};
    });
    std::vector<double> bi, p1, p2;
    for (const auto& r : rows) {
        bi.push_back(r.bi);
        p1.push_back(r.p1);
        p2.push_back(r.p2);
        if (r.bi > std::min(r.p1, r.p2)) ++out.violations;
    }
    out.empty = false;
    out.samples = samples;
    out.bivariate = counter_summary(bi, box);
    out.first = counter_summary(p1, box);
    out.second = counter_summary(p2, box);
    return out;
}

}  // namespace gpslab
