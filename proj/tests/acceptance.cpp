#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gpslab/analysis.hpp"
#include "gpslab/oracle.hpp"
#include "gpslab/partition.hpp"
#include "gpslab/replica.hpp"

using namespace gpslab;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

StrandLaw three_point() { return StrandLaw::discrete({-1.0, 0.0, 1.5}, {0.3, 0.4, 0.3}); }

Outcome replica_identity() {
    double worst = 0;
    for (double a : {0.5, 1.5}) {
        const RenewalLaw law(a);
        for (double b : {0.3, 0.8}) {
            const auto r = StrandLaw::rademacher();
            const double brute = static_cast<double>(oracle::exact_second_moment_brute(law, r, b, {3, 3}));
            const double pairs = static_cast<double>(oracle::exact_intersection_moment(law, r, b, {3, 3}));
            worst = std::max(worst, rel(brute, pairs));
        }
    }
    return {worst < 1e-10, fmt("max rel err %.2e", worst)};
}

Outcome annealed_homogeneous() {
    double worst = 0;
    const RenewalLaw law(0.75);
    for (const auto& sl : {StrandLaw::rademacher(), three_point()})
        for (double h : {0.0, 0.2}) {
            const double ann = static_cast<double>(oracle::exact_annealed_brute(law, sl, 0.4, h, {4, 4}));
            const double hom = std::exp(homogeneous_partition(law, h, {4, 4}, Mode::constrained).log_value);
            worst = std::max(worst, rel(ann, hom));
        }
    return {worst < 1e-12, fmt("max rel err %.2e", worst)};
}

Outcome chain_recursion() {
    const auto g = StrandLaw::gaussian();
    double zmax = 0;
    for (double b : {0.2, 0.4}) {
        const auto mc = chain_weight_mc(g, b, 6, 10'000'000, 2024 + static_cast<std::uint64_t>(b * 10));
        for (int l = 1; l <= 6; ++l)
            zmax = std::max(zmax, std::fabs(mc[l - 1].value - chain_weight(g, b, l)) / mc[l - 1].std_err);
    }
    double xerr = 0;
    for (double b : {0.2, 0.4}) xerr = std::max(xerr, rel(xi_sequence(b, 1)[0], std::exp(log_mgf(g, b))));
    return {zmax < 4 && xerr < 1e-12, fmt("max |z| %.2f, xi1 rel err %.1e", zmax, xerr)};
}

Outcome decomposition_suite() {
    long bad = 0, pairs = 0;
    for (double a : {0.5, 1.5}) {
        const RenewalLaw law(a);
        for (long k = 0; k < 10000; ++k) {
            Philox r1 = sample_rng(77 + static_cast<std::uint64_t>(a * 2), 2 * k);
            Philox r2 = sample_rng(77 + static_cast<std::uint64_t>(a * 2), 2 * k + 1);
            const Box box{64, 64};
            const auto t1 = sample_trajectory(law, r1, box, Mode::free);
            const auto t2 = sample_trajectory(law, r2, box, Mode::free);
            const auto d = decompose(t1, t2, box);
            if (!check_decomposition(d, t1, t2, box).empty()) ++bad;
            ++pairs;
        }
    }
    return {bad == 0, fmt("%.0f violations in %.0f pairs", static_cast<double>(bad), static_cast<double>(pairs))};
}

std::vector<double> geometric(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return v;
}

Outcome critical_exponent() {
    const auto hs = geometric(1e-3, 1e-1, 9);
    const auto f05 = homogeneous_exponent_fit(RenewalLaw(0.5), hs, 512);
    const auto f15 = homogeneous_exponent_fit(RenewalLaw(1.5), hs, 512);
    const bool ok = f05.exponent >= 1.7 && f05.exponent <= 2.3 && f15.exponent >= 0.85 && f15.exponent <= 1.15 &&
                    f05.consistent && f15.consistent;
    return {ok, fmt("alpha 0.5: %.4f, alpha 1.5: %.4f", f05.exponent, f15.exponent)};
}

Outcome second_moment_probe() {
    const RenewalLaw law(0.8);
    const auto r = StrandLaw::rademacher();
    std::vector<Estimate> est;
    long dominated = 0, total = 0;
    for (int n : {16, 32, 64, 128}) {
        const auto ps = replica_samples(law, r, 0.1, {n, n}, 10000, 31);
        std::vector<double> w;
        for (const auto& p : ps) {
            w.push_back(p.weight);
            dominated += p.cs_bound >= p.weight;
            ++total;
        }
        est.push_back(summarize(w));
    }
    double worst = 0;
    for (std::size_t i = 0; i < est.size(); ++i)
        for (std::size_t j = i + 1; j < est.size(); ++j) {
            const double pooled = std::hypot(est[i].std_err, est[j].std_err);
            worst = std::max(worst, std::fabs(est[i].value - est[j].value) / pooled);
        }
    return {worst <= 4 && dominated == total,
            fmt("max pairwise gap %.2f pooled se, CS dominates %.0f%%", worst, 100.0 * dominated / total)};
}

Outcome critical_bracket() {
    const RenewalLaw law(0.75);
    const auto g = StrandLaw::gaussian();
    CriticalOptions opt;
    opt.samples = 64;
    const auto r0 = critical_point_bisect(law, g, 0.0, {16, 32, 64}, opt, 42);
    const auto r3 = critical_point_bisect(law, g, 0.3, {16, 32, 64}, opt, 42);
    const double lam = log_mgf(g, 0.3);
    const bool ok = std::fabs(r0.h_c) <= 1e-3 && r3.h_c >= -1e-3 && r3.h_c <= lam + 1e-3;
    return {ok, fmt("h_c(0) = %.5f, h_c(0.3) = %.5f, lambda(0.3) = %.5f", r0.h_c, r3.h_c, lam)};
}

Outcome tilt_expansion() {
    const auto g = StrandLaw::gaussian();
    std::vector<double> grid;
    for (int k = 4; k <= 9; ++k) grid.push_back(std::ldexp(1.0, -k));
    // Frac: residual bounded by a fixed multiple of δ² on the whole grid, and o(δβ) along the diagonal
    double sup_q = 0;
    for (double d : grid)
        for (double b : grid) sup_q = std::max(sup_q, std::fabs(taylor_residual(TiltKind::Q_frac, g, d, b).residual) / (d * d));
    bool q_mono = true, r_mono = true;
    double prev_q = INFINITY, prev_r = INFINITY;
    for (double t : grid) {
        const double q = std::fabs(taylor_residual(TiltKind::Q_frac, g, t, t).residual) / (t * t);
        const double r = std::fabs(taylor_residual(TiltKind::R_frac, g, t, t).residual) / (t * t * t);
        q_mono = q_mono && q < prev_q;
        r_mono = r_mono && r < prev_r;
        prev_q = q;
        prev_r = r;
    }
    const auto rad = StrandLaw::rademacher();
    double lead = 0;
    for (double d : grid)
        for (double b : grid) {
            lead = std::max(lead, std::fabs(taylor_residual(TiltKind::Q_frac, rad, d, b).leading_term));
            lead = std::max(lead, std::fabs(taylor_residual(TiltKind::R_frac, rad, d, b).leading_term));
        }
    const bool ok = sup_q <= 1.0 && q_mono && r_mono && lead <= 1e-14;
    return {ok, fmt("sup |res|/d^2 = %.3f, last Frac2 ratio %.3e, rademacher lead %.1e", sup_q, prev_r, lead)};
}

Outcome dilation() {
    const auto g = StrandLaw::gaussian();
    const double ratio = dilation_entropy(g, 0.01) / 1e-4;
    double mn = INFINITY;
    for (int i = -300; i <= 300; ++i) mn = std::min(mn, dilation_entropy(g, i * 1e-3));
    return {ratio >= 0.95 && ratio <= 1.05 && mn >= 0, fmt("H/d^2 = %.5f at 0.01, min H = %.2e", ratio, mn)};
}

Outcome dp_equivalence() {
    Philox rng(5150);
    double worst = 0, cap_worst = 0;
    const std::vector<StrandLaw> laws{StrandLaw::gaussian(), StrandLaw::rademacher(2.0), three_point()};
    for (int k = 0; k < 50; ++k) {
        const Box box{1 + static_cast<int>(rng() % 32), 1 + static_cast<int>(rng() % 32)};
        const RenewalLaw law(0.3 + 2.0 * rng.uniform());
        const auto& sl = laws[k % 3];
        const double beta = rng.uniform(), h = 2 * rng.uniform() - 1;
        const Mode mode = k % 2 ? Mode::free : Mode::constrained;
        const auto s = sample_strands(sl, box, rng);
        const auto w = quenched_weights(s, sl, beta, h);
        const double fast = partition_from_weights(law, w, mode).log_value;
        const double slow = reference::naive_partition(law, w, mode).log_value;
        worst = std::max(worst, std::fabs(fast - slow) / std::max(1.0, std::fabs(slow)));
        for (double cap : {1e8, 1e30, 1e250}) {
            DpOptions o;
            o.m_cap = cap;
            cap_worst = std::max(cap_worst, std::fabs(partition_from_weights(law, w, mode, o).log_value - fast));
        }
    }
    return {worst < 1e-12 && cap_worst < 1e-10, fmt("max log err %.2e, cap spread %.2e", worst, cap_worst)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> cs{
        {"rademacher replica identity", 10, replica_identity},
        {"annealed equals homogeneous", 30, annealed_homogeneous},
        {"gaussian chain recursion", 120, chain_recursion},
        {"chain decomposition suite", 60, decomposition_suite},
        {"homogeneous critical exponent", 600, critical_exponent},
        {"second moment boundedness", 600, second_moment_probe},
        {"critical point bracket", 900, critical_bracket},
        {"tilt expansion leading terms", 60, tilt_expansion},
        {"dilation entropy", 1, dilation},
        {"dp equivalence and stability", 120, dp_equivalence},
    };
    int failed = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cs[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = o.ok && dt <= cs[i].budget_s;
        failed += !ok;
        std::printf("%s %2zu %-32s %s [%.2fs / %.0fs]\n", ok ? "PASS" : "FAIL", i + 1, cs[i].name, o.detail.c_str(), dt,
                    cs[i].budget_s);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
