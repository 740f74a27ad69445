#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gpslab/analysis.hpp"
#include "gpslab/errors.hpp"
#include "gpslab/oracle.hpp"

using namespace gpslab;

namespace {
double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }
StrandLaw three_point() { return StrandLaw::discrete({-1.0, 0.0, 1.5}, {0.3, 0.4, 0.3}); }
std::vector<double> geom(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return v;
}
}  // namespace

TEST_SUITE("analysis") {

// references: root of c(Li_{1+a}(e^{-x}) - Li_{2+a}(e^{-x})) = e^{-h}, F = 2x
TEST_CASE("homogeneous free energy") {
    const RenewalLaw a15(1.5), a05(0.5);
    CHECK(rel(homogeneous_free_energy(a15, 0.1), 0.0422398330123112769) < 1e-9);
    CHECK(rel(homogeneous_free_energy(a15, 0.01), 0.00364123563822873) < 1e-9);
    CHECK(rel(homogeneous_free_energy(a05, 0.1), 0.00252592688780871765) < 1e-9);
    CHECK(rel(homogeneous_free_energy(a05, 0.01), 2.56607795291564600701e-5) < 1e-8);
    CHECK(homogeneous_free_energy(a15, 0.0) == 0.0);
    CHECK(homogeneous_free_energy(a15, -0.3) == 0.0);
}

TEST_CASE("finite boxes stay below the limit") {
    const RenewalLaw law(1.5);
    for (double h : {0.05, 0.2, 1.0}) {
        const double F = homogeneous_free_energy(law, h);
        for (int n : {8, 32, 128}) {
            const double fn = homogeneous_partition(law, h, {n, n}, Mode::constrained).log_value / n;
            CHECK(fn <= F + 1e-12);
        }
    }
    const double F = homogeneous_free_energy(law, 1.0);
    const double f256 = homogeneous_partition(law, 1.0, {256, 256}, Mode::constrained).log_value / 256;
    CHECK(F - f256 < 0.02);
}

TEST_CASE("exponent fit") {
    const auto f05 = homogeneous_exponent_fit(RenewalLaw(0.5), geom(1e-3, 1e-1, 7), 32);
    CHECK(f05.exponent == doctest::Approx(2.0).epsilon(0.01));
    CHECK(f05.r2 > 0.999);
    CHECK(f05.consistent);
    const auto f15 = homogeneous_exponent_fit(RenewalLaw(1.5), geom(1e-3, 1e-1, 7), 32);
    CHECK(f15.exponent == doctest::Approx(1.0).epsilon(0.08));
    CHECK_THROWS_AS(homogeneous_exponent_fit(RenewalLaw(1.5), {0.01, 0.02}, 16), FitQualityError);
    CHECK_THROWS_AS(homogeneous_exponent_fit(RenewalLaw(1.5), {0.01, 0.02, 0.05}, 16), FitQualityError);
    CHECK_THROWS_AS(homogeneous_exponent_fit(RenewalLaw(1.5), {0.0, 0.02, 0.5}, 16), DomainError);
}

TEST_CASE("line fit") {
    const auto f = fit_line({1, 2, 3, 4}, {1, 3, 5, 7});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(-1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
}

TEST_CASE("critical point without disorder") {
    const RenewalLaw law(0.8);
    CriticalOptions opt;
    opt.samples = 4;
    const auto r = critical_point_bisect(law, StrandLaw::rademacher(), 0.0, {16, 32, 64}, opt, 1);
    CHECK(r.lo >= 0.0);
    CHECK(r.hi - r.lo <= opt.tol);
    CHECK(r.h_c <= 2e-3);
    CHECK(r.evaluations > 0);
}

TEST_CASE("log partition is monotone in h for matched disorder") {
    const RenewalLaw law(0.8);
    const auto g = StrandLaw::gaussian();
    const auto a = log_partition_samples(law, g, 0.4, -0.1, {24, 24}, 40, 11);
    const auto b = log_partition_samples(law, g, 0.4, 0.0, {24, 24}, 40, 11);
    const auto c = log_partition_samples(law, g, 0.4, 0.1, {24, 24}, 40, 11);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k] < b[k]);
        CHECK(b[k] < c[k]);
    }
}

TEST_CASE("quenched below annealed") {
    const RenewalLaw law(0.8);
    for (double beta : {0.2, 0.6}) {
        const auto q = free_energy_estimate(law, StrandLaw::gaussian(), beta, 0.05, {32, 32}, 200, 3);
        const double ann = homogeneous_partition(law, 0.05, {32, 32}, Mode::constrained).log_value / 32;
        CHECK(q.value <= ann + 4 * q.std_err);
    }
    const auto z = free_energy_estimate(law, StrandLaw::gaussian(), 0.0, 0.05, {32, 32}, 50, 3);
    CHECK(z.std_err == 0.0);
    CHECK(rel(z.value, homogeneous_partition(law, 0.05, {32, 32}, Mode::constrained).log_value / 32) < 1e-14);
}

TEST_CASE("mean log partition against disorder enumeration") {
    const RenewalLaw law(0.75);
    for (Mode m : {Mode::constrained, Mode::free}) {
        const double exact =
            static_cast<double>(oracle::exact_mean_log_partition(law, three_point(), 0.5, 0.1, {3, 3}, m)) / 3;
        const auto e = free_energy_estimate(law, three_point(), 0.5, 0.1, {3, 3}, 20000, 8, m);
        CHECK(std::fabs(e.value - exact) < 4 * e.std_err);
    }
}

TEST_CASE("finite size free energy") {
    const RenewalLaw law(0.8);
    const auto f = finite_size_free_energy(law, StrandLaw::rademacher(), 0.0, 0.1, {8, 16, 32}, 4, 1);
    CHECK(f.per_box.size() == 3);
    CHECK(f.headline.value == f.per_box.back().value);
    for (const auto& e : f.per_box) CHECK(e.value <= f.best.value);
}

TEST_CASE("fractional moments") {
    const RenewalLaw law(0.75);
    const auto z0 = fractional_moment(law, StrandLaw::gaussian(), 0.0, 0.2, 0.7, {20, 20}, 10, 1);
    CHECK(rel(z0.value, std::exp(0.7 * homogeneous_partition(law, 0.2, {20, 20}, Mode::constrained).log_value)) <
          1e-13);
    const double ex = static_cast<double>(oracle::exact_fractional_moment(law, three_point(), 0.5, 0.1, 0.6, {3, 3}));
    const auto e = fractional_moment(law, three_point(), 0.5, 0.1, 0.6, {3, 3}, 20000, 2);
    CHECK(std::fabs(e.value - ex) < 4 * e.std_err);
    const auto g = fractional_moment(law, StrandLaw::gaussian(), 0.5, 0.1, 0.6, {24, 24}, 400, 2);
    CHECK(g.value <= std::exp(0.6 * homogeneous_partition(law, 0.1, {24, 24}, Mode::constrained).log_value) +
                         4 * g.std_err);
    CHECK_THROWS_AS(fractional_moment(law, three_point(), 0.5, 0.1, 1.0, {3, 3}, 10, 1), DomainError);
}

TEST_CASE("fractional moment table") {
    const RenewalLaw law(0.75);
    const auto t = frac_moment_table(law, StrandLaw::gaussian(), 0.0, 0.05, 0.9, 8, 3, 1);
    const auto j = jensen_table(law, 0.05, 0.9, 8);
    CHECK(t.at(0, 0).value == 1.0);
    for (int i = 1; i < 8; ++i) {
        CHECK(t.at(i, 0).value == 0.0);
        CHECK(t.at(0, i).value == 0.0);
    }
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) CHECK(std::fabs(t.at(a, b).value - j.at(a, b).value) <= 1e-13 * j.at(a, b).value);
    CHECK(rel(j.at(5, 3).value, std::exp(0.9 * homogeneous_partition(law, 0.05, {5, 3}, Mode::constrained).log_value)) <
          1e-13);
}

TEST_CASE("coarse graining constant") {
    const auto g = StrandLaw::gaussian();
    const double c = coarse_grain_constant(g, 0.3, 0.1, 0.8);
    CHECK(rel(c, std::exp(log_mgf(g, 0.24) - 0.8 * log_mgf(g, 0.3) + 0.08)) < 1e-14);
    CHECK(rel(coarse_grain_constant(g, 0.0, 0.1, 0.8), std::exp(0.08)) < 1e-14);
}

// direct sum over the three block sets with the same explicit radius
TEST_CASE("rho against literal block sums") {
    const RenewalLaw law(0.75);
    const int k = 16;
    const double eta = 0.9, cc = 1.3;
    const long R = 200;
    const auto A = jensen_table(law, 0.02, eta, k);
    long double s[3] = {0, 0, 0};
    for (int i1 = 0; i1 < k; ++i1)
        for (int i2 = 0; i2 < k; ++i2) {
            const double a = A.at(i1, i2).value;
            for (long j1 = 1; j1 < R; ++j1)
                for (long j2 = 1; j1 + j2 <= R; ++j2) {
                    const bool up1 = i1 + j1 >= k, up2 = i2 + j2 >= k;
                    const long double v = std::pow(law.K(j1 + j2), eta) * a;
                    if (up1 && up2) s[0] += v;
                    else if (!up1 && up2) s[1] += v;
                    else if (up1 && !up2) s[2] += v;
                }
        }
    const auto r = coarse_grain_rho(law, k, eta, A, cc, R, false);
    CHECK(rel(r.rho1, static_cast<double>(cc * s[0])) < 1e-8);
    CHECK(rel(r.rho2, static_cast<double>(cc * s[1])) < 1e-8);
    CHECK(rel(r.rho3, static_cast<double>(cc * s[2])) < 1e-8);
    CHECK(r.sum == doctest::Approx(r.rho1 + r.rho2 + r.rho3));
}

TEST_CASE("rho properties") {
    const RenewalLaw law(0.75);
    const int k = 16;
    const auto A = jensen_table(law, 0.02, 0.9, k);
    const auto r = coarse_grain_rho(law, k, 0.9, A, 1.0);
    CHECK(rel(r.rho2, r.rho3) < 1e-12);
    CHECK(r.triggered == (r.sum <= 1.0));
    const auto r2 = coarse_grain_rho(law, k, 0.9, A, 1.0, 2 * r.radius);
    CHECK(std::fabs(r.rho1 - r2.rho1) < 1e-6);
    CHECK(std::fabs(r.rho2 - r2.rho2) < 1e-6);
    CHECK(std::fabs(r.rho3 - r2.rho3) < 1e-6);
    auto Z = A;
    for (auto& e : Z.entries) e.value = 0.0;
    const auto r0 = coarse_grain_rho(law, k, 0.9, Z, 1.0);
    CHECK(r0.rho1 == 0.0);
    CHECK(r0.rho2 == 0.0);
    CHECK(r0.rho3 == 0.0);
    CHECK(r0.triggered);
    CHECK_THROWS_AS(coarse_grain_rho(law, k, 0.5, A, 1.0), DomainError);
    CHECK_THROWS_AS(coarse_grain_rho(law, k + 1, 0.9, A, 1.0), DomainError);
}

TEST_CASE("negative homogeneous bound") {
    const RenewalLaw law(0.8);
    const double z0 = std::exp(homogeneous_partition(law, 0.0, {64, 64}, Mode::constrained).log_value);
    for (double u : {0.02, 0.1, 0.5}) {
        const auto r = zhom_negative_check(law, u, {64, 64});
        CHECK(r.holds);
        CHECK(r.lhs <= z0);
        CHECK(r.lhs > 0);
    }
    const auto tiny = zhom_negative_check(law, 1e-9, {64, 64});
    CHECK(rel(tiny.lhs, z0) < 1e-6);
    const auto a = zhom_negative_check(law, 0.1, {256, 256});
    const auto b = zhom_negative_check(law, 0.1, {512, 512});
    CHECK(b.c_fit / a.c_fit == doctest::Approx(1.0).epsilon(0.05));
    CHECK_THROWS_AS(zhom_negative_check(law, 0.1, {8, 9}), DomainError);
    CHECK_THROWS_AS(zhom_negative_check(law, -0.1, {8, 8}), DomainError);
}

TEST_CASE("tilted annealed partition") {
    const RenewalLaw law(0.75);
    const auto sl = three_point();
    for (TiltMode m : {TiltMode::linear, TiltMode::quadratic}) {
        CHECK(rel(tilted_annealed(law, sl, 0.0, 0.4, 0.1, {6, 5}, m),
                  homogeneous_partition(law, 0.1, {6, 5}, Mode::constrained).log_value) < 1e-13);
        for (double d : {0.05, 0.3}) {
            const double ex = std::log(static_cast<double>(
                oracle::exact_tilted_brute(law, sl, d, 0.4, 0.1, {2, 2}, m == TiltMode::quadratic)));
            CHECK(std::fabs(tilted_annealed(law, sl, d, 0.4, 0.1, {2, 2}, m) - ex) < 1e-12);
        }
    }
}

TEST_CASE("diagonal tilt") {
    const RenewalLaw law(1.5);
    const auto r = StrandLaw::rademacher();
    const auto z = diagonal_tilt(law, r, {64, 64}, 0.0, 50, 1);
    CHECK(z.qbar.value == 1.0);
    CHECK(z.qbar.std_err == 0.0);
    const auto d = diagonal_tilt(law, r, {64, 64}, 0.005, 200, 2);
    CHECK(d.qbar.value >= 1.0 - 4 * d.qbar.std_err);
    CHECK(d.max_row <= 4 * d.half_width + 1);
    CHECK(d.sigma_within_2ell);
    CHECK_THROWS_AS(diagonal_tilt(law, StrandLaw::gaussian(), {8, 8}, 0.01, 10, 1), UnsupportedLawError);
    CHECK_THROWS_AS(diagonal_width(0.8, 64), DomainError);
    CHECK(diagonal_width(1.5, 256) > diagonal_width(1.5, 64));
}

TEST_CASE("n beta") {
    const RenewalLaw law(0.8);
    const auto r = StrandLaw::rademacher();
    const std::vector<int> sched{8, 16, 32, 64};
    const auto z = n_beta_estimate(law, r, 0.0, 2.0, sched, 10, 1);
    CHECK(z.unbounded);
    const auto lo = n_beta_estimate(law, r, 0.5, 1.05, sched, 200, 4);
    const auto hi = n_beta_estimate(law, r, 0.5, 3.0, sched, 200, 4);
    CHECK((hi.unbounded || lo.n_beta <= hi.n_beta));
    CHECK_FALSE((lo.unbounded && !hi.unbounded));
    CHECK_THROWS_AS(n_beta_estimate(law, r, 0.5, 0.5, sched, 10, 1), DomainError);
}

TEST_CASE("smoothing curve") {
    const RenewalLaw law(0.8);
    const std::vector<double> t{0.01, 0.02, 0.04};
    const auto c = smoothing_curve(law, StrandLaw::rademacher(), 0.3, t, {16, 32}, 16, 5);
    CHECK(c.t.size() == t.size());
    CHECK(c.F.size() == t.size());
    CHECK(c.exploratory);
    for (std::size_t i = 1; i < c.F.size(); ++i) CHECK(c.F[i].value >= c.F[i - 1].value);
}

}
