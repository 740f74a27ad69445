#include "gpslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gpslab/errors.hpp"
#include "gpslab/parallel.hpp"
#include "gpslab/replica.hpp"

namespace gpslab {

namespace {

void check_schedule(const std::vector<int>& schedule) {
    if (schedule.empty()) throw DomainError("schedule", "box schedule is empty");
    for (int n : schedule)
        if (n < 1) throw DomainError("schedule", "box sizes must be positive");
}

void check_samples(long samples) {
    if (samples < 1) throw DomainError("samples", "need at least one sample");
}

// max over the schedule of the per-box estimate, plus every box
FiniteSizeF best_over(const std::vector<Estimate>& per_box) {
    FiniteSizeF out;
    out.per_box = per_box;
    out.best = per_box.front();
    for (const auto& e : per_box)
        if (e.value > out.best.value) out.best = e;
    out.headline = per_box.back();
    return out;
}

}  // namespace

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw DomainError("fit", "need two or more points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw DomainError("fit", "degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0 ? 1.0 : sxy * sxy / (sxx * syy);
    return f;
}

std::vector<double> log_partition_samples(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, double h,
                                          Box box, long samples, std::uint64_t seed, Mode mode) {
    check_samples(samples);
    rlaw.check_box(box);
    if (beta == 0.0) return {homogeneous_partition(rlaw, h, box, mode).log_value};
    log_mgf(slaw, beta);  // domain check before spawning work
    return sample_map<double>(samples, [&](std::uint64_t k) {
        Philox rng = sample_rng(seed, k);
        const StrandSample s = sample_strands(slaw, box, rng);
        return quenched_partition(rlaw, s, slaw, beta, h, box, mode).log_value;
    });
}

Estimate free_energy_estimate(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, double h, Box box,
                              long samples, std::uint64_t seed, Mode mode) {
    auto v = log_partition_samples(rlaw, slaw, beta, h, box, samples, seed, mode);
    for (double& x : v) x /= box.n1;
    return summarize(v, box);
}

FiniteSizeF finite_size_free_energy(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, double h,
                                    const std::vector<int>& schedule, long samples, std::uint64_t seed, Mode mode) {
    check_schedule(schedule);
    std::vector<Estimate> per;
    for (int n : schedule) per.push_back(free_energy_estimate(rlaw, slaw, beta, h, {n, n}, samples, seed, mode));
    return best_over(per);
}

CriticalResult critical_point_bisect(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta,
                                     const std::vector<int>& schedule, const CriticalOptions& opt,
                                     std::uint64_t seed) {
    check_schedule(schedule);
    if (!(opt.tol > 0)) throw DomainError("tol", "tolerance must be positive");
    const double lam = beta == 0.0 ? 0.0 : log_mgf(slaw, beta);
    CriticalResult r;
    auto localized = [&](double h) {
        ++r.evaluations;
        for (int n : schedule) {
            const Estimate e = free_energy_estimate(rlaw, slaw, beta, h, {n, n}, opt.samples, seed, opt.mode);
            if (e.value > opt.n_se * e.std_err + opt.boundary_coef / n + 1e-12) return true;
        }
        return false;
    };
    double lo = -1.0, hi = lam + 1.0;
    if (localized(lo)) throw SearchError("indicator already positive at the lower bracket end");
    if (!localized(hi)) throw SearchError("indicator not positive at the upper bracket end");
    while (hi - lo > opt.tol) {
        const double mid = 0.5 * (lo + hi);
        (localized(mid) ? hi : lo) = mid;
    }
    r.lo = lo;
    r.hi = hi;
    r.h_c = 0.5 * (lo + hi);
    return r;
}

double homogeneous_free_energy(const RenewalLaw& rlaw, double h) {
    if (h <= 0) return 0.0;
    const double target = -std::expm1(-h);
    const long H = rlaw.horizon();
    const double a = rlaw.alpha();
    const double c = rlaw.norm_const();
    const SlowVary& L = rlaw.slow_vary();
    // 1 - sum (t-1) K(t) e^{-xt}, kept as a sum of positive terms
    auto psi = [&](double x) {
        long double s = 0;
        for (long t = 2; t <= H; ++t) s += (t - 1) * rlaw.K(t) * -std::expm1(-x * t);
        s += c * tail_sum([&](double t) { return (t - 1) * L(t) * std::pow(t, -2.0 - a) * -std::expm1(-x * t); },
                          H + 1, std::max(H + 1, std::max(2048L, L.smooth_from())));
        return static_cast<double>(s);
    };
    // psi(x) >= 1 - e^{-2x}, so the root lies below h/2
    double lo = 0.0, hi = 0.5 * h;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (psi(mid) < target ? lo : hi) = mid;
    }
    return lo + hi;  // 2x
}

ExponentFit homogeneous_exponent_fit(const RenewalLaw& rlaw, const std::vector<double>& h_grid, int box_cap) {
    if (h_grid.size() < 3) throw FitQualityError("need at least three h values");
    const auto [mn, mx] = std::minmax_element(h_grid.begin(), h_grid.end());
    if (*mn <= 0) throw DomainError("h_grid", "h values must be positive");
    if (*mx / *mn < 10.0) throw FitQualityError("h grid spans less than one decade");
    ExponentFit f;
    f.box_cap = box_cap;
    std::vector<double> lx, ly;
    for (double h : h_grid) {
        const double F = homogeneous_free_energy(rlaw, h);
        if (!(F > 0)) throw FitQualityError("free energy vanished at h = " + std::to_string(h));
        f.h.push_back(h);
        f.F.push_back(F);
        lx.push_back(std::log(h));
        ly.push_back(std::log(F));
        if (box_cap > 0) {
            const double Fn = homogeneous_partition(rlaw, h, {box_cap, box_cap}, Mode::constrained).log_value / box_cap;
            f.F_finite.push_back(Fn);
            if (Fn > F * (1 + 1e-9) + 1e-12) f.consistent = false;
        }
    }
    const LineFit lf = fit_line(lx, ly);
    f.exponent = lf.slope;
    f.intercept = lf.intercept;
    f.r2 = lf.r2;
    if (f.r2 < 0.99) throw FitQualityError("log-log fit r^2 = " + std::to_string(f.r2));
    return f;
}

NBeta n_beta_estimate(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, double C,
                      const std::vector<int>& schedule, long samples, std::uint64_t seed) {
    check_schedule(schedule);
    if (!(C >= 1)) throw DomainError("C", "threshold must be at least 1");
    std::vector<int> sorted = schedule;
    std::sort(sorted.begin(), sorted.end());
    NBeta r;
    r.unbounded = true;
    for (int n : sorted) {
        const Estimate e = second_moment_mc(rlaw, slaw, beta, {n, n}, samples, seed);
        r.per_box.push_back(e);
        if (e.value > C) {
            r.unbounded = false;
            break;
        }
        r.n_beta = n;
    }
    return r;
}

Estimate fractional_moment(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, double h, double eta, Box box,
                           long samples, std::uint64_t seed) {
    if (!(eta > 0 && eta < 1)) throw DomainError("eta", "eta must lie in (0,1)");
    auto v = log_partition_samples(rlaw, slaw, beta, h, box, samples, seed, Mode::constrained);
    for (double& x : v) x = std::exp(eta * x);
    return summarize(v, box);
}

FracMomentTable frac_moment_table(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, double h, double eta,
                                  int k, long samples, std::uint64_t seed) {
    if (k < 1) throw DomainError("k", "k must be positive");
    if (!(eta > 0 && eta < 1)) throw DomainError("eta", "eta must lie in (0,1)");
    check_samples(samples);
    FracMomentTable t;
    t.eta = eta;
    t.k = k;
    t.entries.assign(static_cast<std::size_t>(k) * k, Estimate{});
    t.entries[0] = {1.0, 0.0, samples, {0, 0}};  // Z_{0} = 1
    if (k == 1) return t;
    const Box big{k - 1, k - 1};
    rlaw.check_box(big);
    // one DP per sample covers every i in the table
    const long S = beta == 0.0 ? 1 : samples;
    if (beta != 0.0) log_mgf(slaw, beta);
    auto rows = sample_map<std::vector<double>>(S, [&](std::uint64_t s) {
        LogWeights w;
        if (beta == 0.0) {
            w = constant_weights(big, h);
        } else {
            Philox rng = sample_rng(seed, s);
            w = quenched_weights(sample_strands(slaw, big, rng), slaw, beta, h);
        }
        const ScaledGrid z = solve_grid(rlaw, w);
        std::vector<double> out(static_cast<std::size_t>(k) * k, 0.0);
        for (int i = 1; i < k; ++i)
            for (int j = 1; j < k; ++j) out[static_cast<std::size_t>(i) * k + j] = std::exp(eta * z.log_value(i, j));
        return out;
    });
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (i == 0 || j == 0) {
                if (i + j > 0) t.entries[static_cast<std::size_t>(i) * k + j] = {0.0, 0.0, S, {i, j}};
                continue;
            }
            std::vector<double> v;
            v.reserve(rows.size());
            for (const auto& r : rows) v.push_back(r[static_cast<std::size_t>(i) * k + j]);
            t.entries[static_cast<std::size_t>(i) * k + j] = summarize(v, {i, j});
        }
    return t;
}

FracMomentTable jensen_table(const RenewalLaw& rlaw, double h, double eta, int k) {
    if (k < 1) throw DomainError("k", "k must be positive");
    FracMomentTable t;
    t.eta = eta;
    t.k = k;
    t.entries.assign(static_cast<std::size_t>(k) * k, Estimate{});
    t.entries[0] = {1.0, 0.0, 1, {0, 0}};
    if (k == 1) return t;
    const ScaledGrid z = solve_grid(rlaw, constant_weights({k - 1, k - 1}, h));
    for (int i = 1; i < k; ++i)
        for (int j = 1; j < k; ++j)
            t.entries[static_cast<std::size_t>(i) * k + j] = {std::exp(eta * z.log_value(i, j)), 0.0, 1, {i, j}};
    return t;
}

double coarse_grain_constant(const StrandLaw& slaw, double beta, double h, double eta) {
    return std::exp(log_mgf(slaw, eta * beta) - eta * log_mgf(slaw, beta) + eta * h);
}

RhoResult coarse_grain_rho(const RenewalLaw& rlaw, int k, double eta, const FracMomentTable& A, double c_const,
                           long radius, bool include_tail) {
    if (k < 1 || A.k != k) throw DomainError("k", "table size does not match k");
    const double a = rlaw.alpha();
    if (!((2 + a) * eta > 2)) throw DomainError("eta", "need (2+alpha) eta > 2 for the block sums to converge");
    const long R = radius > 0 ? radius : std::max(4096L, 64L * k);
    if (R < 2L * k + 2) throw DomainError("radius", "radius too small for k");
    const double c = rlaw.norm_const();
    const SlowVary& L = rlaw.slow_vary();
    auto keta = [&](double t) { return std::pow(c * L(t) * std::pow(t, -2.0 - a), eta); };

    // T0(m) = sum_{t>=m} K^η(t), G(m) = sum_{t>=m} (t-m+1) K^η(t), m <= 2k
    std::vector<long double> T0(R + 2, 0.0L), G(R + 2, 0.0L);
    for (long t = R; t >= 2; --t) {
        T0[t] = T0[t + 1] + keta(static_cast<double>(t));
        G[t] = G[t + 1] + T0[t];
    }
    long double tail0 = 0, tail1 = 0;
    if (include_tail) {
        const long from = std::max(R + 1, std::max(2048L, L.smooth_from()));
        tail0 = tail_sum(keta, R + 1, from);
        tail1 = tail_sum([&](double t) { return (t - R) * keta(t); }, R + 1, from);
    }
    auto Gm = [&](long m) { return G[m] + tail1 + (R - m + 1) * tail0; };
    auto T0m = [&](long m) { return T0[m] + tail0; };

    long double r1 = 0, r2 = 0, r3 = 0;
    for (int i1 = 0; i1 < k; ++i1)
        for (int i2 = 0; i2 < k; ++i2) {
            const double Ai = A.at(i1, i2).value;
            if (Ai == 0.0) continue;
            const long p = k - i1, q = k - i2;
            r1 += Ai * Gm(p + q);
            // G(q+1) - G(q+p) and G(p+1) - G(p+q) summed directly
            long double s2 = 0, s3 = 0;
            for (long m = q + 1; m < q + p; ++m) s2 += T0m(m);
            for (long m = p + 1; m < p + q; ++m) s3 += T0m(m);
            r2 += Ai * s2;
            r3 += Ai * s3;
        }
    RhoResult r;
    r.radius = R;
    r.rho1 = static_cast<double>(c_const * r1);
    r.rho2 = static_cast<double>(c_const * r2);
    r.rho3 = static_cast<double>(c_const * r3);
    r.sum = r.rho1 + r.rho2 + r.rho3;
    r.triggered = r.sum <= 1.0;
    return r;
}

ZhomCheck zhom_negative_check(const RenewalLaw& rlaw, double u, Box box, double alpha_minus, double c2) {
    if (!(u > 0)) throw DomainError("u", "u must be positive");
    if (box.n1 != box.n2 || box.n1 < 1) throw DomainError("box", "diagonal box expected");
    const double am = alpha_minus > 0 ? alpha_minus : 0.9 * rlaw.alpha();
    if (am >= rlaw.alpha()) throw DomainError("alpha_minus", "alpha_minus must be below alpha");
    const double gamma = std::min(am, 1.0);
    const int n = box.n1;
    const ScaledGrid z = solve_grid(rlaw, constant_weights(box, -u));
    const Grid P = renewal_mass_grid(rlaw, box);
    ZhomCheck r;
    double cfit = 0.0;
    double t1 = 0, t2 = 0, lhs = 0;
    for (int j = 1; j <= n; ++j) {
        lhs = std::exp(z.log_value(j, j));
        t1 = rlaw.K(2L * j) / (u * u);
        t2 = P(j, j) * std::exp(-c2 * u * std::pow(2.0 * j, gamma));
        cfit = std::max(cfit, std::max(0.0, lhs - t2) / t1);
    }
    r.lhs = lhs;
    r.t1 = t1;
    r.t2 = t2;
    r.c_fit = cfit;
    r.rhs = cfit * t1 + t2;
    r.holds = r.lhs <= r.rhs * (1 + 1e-12);
    return r;
}

double tilted_annealed(const RenewalLaw& rlaw, const StrandLaw& slaw, double delta, double beta, double h, Box box,
                       TiltMode kind) {
    const double fm1 = kind == TiltMode::linear ? frac_Q_minus_one(slaw, delta, beta)
                                                : frac_R_minus_one(slaw, delta, beta);
    return homogeneous_partition(rlaw, h + std::log1p(fm1), box, Mode::constrained).log_value;
}

double diagonal_width(double alpha, int n, double eps, double c_wide) {
    if (!(alpha > 1)) throw DomainError("alpha", "diagonal tilt needs alpha > 1");
    if (alpha <= 2) return std::pow(static_cast<double>(n), (1 + eps * eps) / alpha);
    return c_wide * std::sqrt(n * std::log(std::max(n, 2)));
}

DiagonalTilt diagonal_tilt(const RenewalLaw& rlaw, const StrandLaw& slaw, Box box, double delta, long samples,
                           std::uint64_t seed, double eps, double c_wide) {
    if (slaw.kind != StrandLaw::Kind::rademacher || slaw.x != 1.0)
        throw UnsupportedLawError("diagonal tilt is implemented for Rademacher(1) only");
    check_samples(samples);
    DiagonalTilt r;
    r.ell = diagonal_width(rlaw.alpha(), box.n1, eps, c_wide);
    const int w = static_cast<int>(std::floor(2 * r.ell));
    r.half_width = w;
    const int n1 = box.n1, n2 = box.n2;
    for (int i = 1; i <= n1; ++i)
        r.max_row = std::max(r.max_row, std::max(0, std::min(n2, i + w) - std::max(1, i - w) + 1));
    struct Out {
        double value, max_sigma;
    };
    auto outs = sample_map<Out>(samples, [&](std::uint64_t s) {
        Philox rng = sample_rng(seed, s);
        const std::vector<double> bar = sample_strand(slaw, n2, rng);
        std::vector<double> pre(n2 + 1, 0.0);
        for (int j = 1; j <= n2; ++j) pre[j] = pre[j - 1] + bar[j - 1];
        double lg = 0.0, ms = 0.0;
        for (int i = 1; i <= n1; ++i) {
            const int lo = std::max(1, i - w), hi = std::min(n2, i + w);
            const double sig = hi >= lo ? pre[hi] - pre[lo - 1] : 0.0;
            ms = std::max(ms, std::abs(sig));
            const double x = std::abs(delta * sig);
            lg += x + std::log1p(std::exp(-2 * x)) - std::log(2.0);  // log cosh
        }
        return Out{std::exp(lg), ms};
    });
    std::vector<double> v;
    v.reserve(outs.size());
    for (const auto& o : outs) {
        v.push_back(o.value);
        r.max_abs_sigma = std::max(r.max_abs_sigma, o.max_sigma);
    }
    r.qbar = summarize(v, box);
    r.sigma_within_2ell = r.max_abs_sigma <= 2 * r.ell;
    return r;
}

SmoothingCurve smoothing_curve(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta,
                               const std::vector<double>& t_grid, const std::vector<int>& schedule, long samples,
                               std::uint64_t seed) {
    CriticalOptions opt;
    opt.samples = samples;
    SmoothingCurve c;
    c.h_c = critical_point_bisect(rlaw, slaw, beta, schedule, opt, seed).h_c;
    std::vector<double> lx, ly;
    for (double t : t_grid) {
        if (!(t > 0)) throw DomainError("t_grid", "offsets must be positive");
        const FiniteSizeF f = finite_size_free_energy(rlaw, slaw, beta, c.h_c + t, schedule, samples, seed, Mode::free);
        c.t.push_back(t);
        c.F.push_back(f.best);
        if (f.best.value > 0) {
            lx.push_back(std::log(t));
            ly.push_back(std::log(f.best.value));
        }
    }
    c.local_exponent = lx.size() >= 2 ? fit_line(lx, ly).slope : std::numeric_limits<double>::quiet_NaN();
    return c;
}

}  // namespace gpslab
