#include <doctest.h>

#include <cmath>
#include <map>

#include "gpslab/errors.hpp"
#include "gpslab/oracle.hpp"
#include "gpslab/renewal.hpp"

using namespace gpslab;

namespace {
double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }
}  // namespace

TEST_SUITE("renewal") {

// reference values from Hurwitz zeta / polylog evaluations at 30 digits
TEST_CASE("normalization constants") {
    CHECK(rel(RenewalLaw(0.5).norm_const(), 0.786851341781954817946) < 1e-12);
    CHECK(rel(RenewalLaw(1.5).norm_const(), 4.65650391040615789667) < 1e-12);
    CHECK(rel(RenewalLaw(0.75, SlowVary::log_power(1.0)).norm_const(), 0.634299118217074952348) < 1e-10);
}

TEST_CASE("interarrival mass") {
    const RenewalLaw law(0.5);
    CHECK(rel(law.interarrival_mass(1, 1), law.norm_const() * std::pow(2.0, -2.5)) < 1e-15);
    CHECK(law.interarrival_mass(1, 2) == law.interarrival_mass(2, 1));
    CHECK(law.interarrival_mass(3, 4) == law.K(7));
    CHECK_THROWS_AS(law.interarrival_mass(law.horizon(), 1), RangeError);
    CHECK(law.K(1) == 0.0);
}

TEST_CASE("mass within the horizon plus escape is one") {
    for (double a : {0.5, 0.75, 1.5, 2.5}) {
        const RenewalLaw law(a);
        CHECK(std::fabs(law.mass_within_horizon() + law.escape_mass() - 1.0) < 1e-12);
        long double s = 0;
        for (long t = 2; t <= law.horizon(); ++t) s += (t - 1) * law.K(t);
        CHECK(rel(static_cast<double>(s), law.mass_within_horizon()) < 1e-12);
    }
}

TEST_CASE("horizon handling") {
    const RenewalLaw a(1.5), b(1.5, SlowVary::constant(), 2 * a.horizon());
    CHECK(std::fabs(a.norm_const() - b.norm_const()) < a.tail_tol());
    CHECK(a.horizon() >= 4096);
    const long hmin = min_horizon(0.5, SlowVary::constant(), 1e-6);
    CHECK(hmin > 100);
    CHECK_THROWS_AS(RenewalLaw(0.5, SlowVary::constant(), 100), RangeError);
    CHECK_NOTHROW(RenewalLaw(0.5, SlowVary::constant(), hmin));
    CHECK_THROWS_AS(RenewalLaw(-1.0), DomainError);
}

TEST_CASE("tail sums") {
    const RenewalLaw l15(1.5), l05(0.5);
    CHECK(rel(l15.tail_K(10), 0.00666909446299755208464) < 1e-11);
    CHECK(rel(l15.tail_G(10), 0.0458144265108174104634) < 1e-11);
    CHECK(rel(l05.tail_K(100), 0.000528518210202894070926) < 1e-11);
    CHECK(rel(l15.projection_interarrival(9), l15.tail_K(10)) < 1e-15);
    CHECK(rel(l15.tail_G(2), 1.0) < 1e-12);
    // beyond the table
    CHECK(rel(l15.tail_K(l15.horizon() + 10) - l15.tail_K(l15.horizon() + 11), l15.K(l15.horizon() + 10)) < 1e-8);
}

TEST_CASE("exit mass") {
    const RenewalLaw law(0.75);
    for (auto [A, B] : {std::pair{1, 1}, {3, 5}, {10, 2}, {40, 40}}) {
        long double inside = 0;
        for (int a = 1; a <= A; ++a)
            for (int b = 1; b <= B; ++b) inside += law.K(a + b);
        CHECK(rel(law.exit_mass(A, B), static_cast<double>(1.0L - inside)) < 1e-12);
    }
    CHECK(law.exit_mass(0, 7) == doctest::Approx(1.0));
}

TEST_CASE("jump sampler") {
    const RenewalLaw law(1.5);
    Philox rng(5);
    const int n = 200000;
    int t2 = 0, esc = 0, a_first = 0, t3 = 0;
    for (int k = 0; k < n; ++k) {
        const Point p = law.sample_jump(rng);
        if (p.i == 0) {
            ++esc;
            continue;
        }
        REQUIRE(p.i >= 1);
        REQUIRE(p.j >= 1);
        t2 += p.i + p.j == 2;
        if (p.i + p.j == 3) {
            ++t3;
            a_first += p.i == 1;
        }
    }
    const double p2 = law.K(2);
    CHECK(std::fabs(t2 - n * p2) < 5 * std::sqrt(n * p2 * (1 - p2)));
    CHECK(std::fabs(a_first - 0.5 * t3) < 5 * std::sqrt(0.25 * t3));
    const double pe = law.escape_mass();
    CHECK(std::fabs(esc - n * pe) < 5 * std::sqrt(n * pe * (1 - pe)) + 1);
}

TEST_CASE("sampled trajectories respect the box and the mode") {
    const RenewalLaw law(0.75);
    Philox rng(9);
    for (int k = 0; k < 300; ++k) {
        const Trajectory f = sample_trajectory(law, rng, {20, 30}, Mode::free);
        REQUIRE(valid_trajectory(f));
        for (auto p : f) REQUIRE(in_box(p, {20, 30}));
        for (Box b : {Box{3, 3}, Box{8, 5}, Box{12, 12}}) {
            const Trajectory c = sample_trajectory(law, rng, b, Mode::constrained);
            REQUIRE(valid_trajectory(c));
            REQUIRE(!c.empty());
            CHECK(c.back() == Point{b.n1, b.n2});
        }
    }
}

TEST_CASE("constrained sampler matches the path law on (3,3)") {
    const RenewalLaw law(0.5);
    const Box box{3, 3};
    const auto e = oracle::enumerate_trajectories(box, Mode::constrained);
    long double z = 0;
    std::map<Trajectory, double> p;
    for (const auto& t : e.paths) z += oracle::path_probability(law, t, box, Mode::constrained);
    for (const auto& t : e.paths) p[t] = static_cast<double>(oracle::path_probability(law, t, box, Mode::constrained) / z);
    std::map<Trajectory, int> cnt;
    Philox rng(21);
    const int n = 100000;
    for (int k = 0; k < n; ++k) ++cnt[sample_trajectory(law, rng, box, Mode::constrained)];
    CHECK(cnt.size() <= p.size());
    for (const auto& [t, q] : p) CHECK(std::fabs(cnt[t] - n * q) < 5 * std::sqrt(n * q * (1 - q)) + 1);
}

TEST_CASE("renewal mass grid against path enumeration") {
    const RenewalLaw law(1.5);
    const Box box{4, 4};
    const Grid u = renewal_mass_grid(law, box);
    CHECK(u(0, 0) == 1.0);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) {
            long double s = 0;
            for (const auto& t : oracle::enumerate_trajectories({i, j}, Mode::constrained).paths)
                s += oracle::path_probability(law, t, {i, j}, Mode::constrained);
            CHECK(rel(u(i, j), static_cast<double>(s)) < 1e-12);
        }
    CHECK(u(0, 3) == 0.0);
}

TEST_CASE("epoch masses sum to the renewal mass") {
    const RenewalLaw law(0.75);
    const Box box{7, 6};
    const Grid u = renewal_mass_grid(law, box);
    Grid sum(7, 6);
    for (int j = 1; j <= 7; ++j) {
        const Grid g = epoch_mass_grid(law, j, box);
        for (std::size_t k = 0; k < g.v.size(); ++k) sum.v[k] += g.v[k];
    }
    for (int i = 1; i <= 7; ++i)
        for (int j = 1; j <= 6; ++j) CHECK(rel(sum(i, j), u(i, j)) < 1e-12);
    const Grid one = epoch_mass_grid(law, 1, box);
    CHECK(rel(one(2, 5), law.K(7)) < 1e-15);
}

TEST_CASE("convolution of a point mass gives K") {
    const RenewalLaw law(1.5);
    Grid in(5, 5);
    in(0, 0) = 1.0;
    const Grid out = convolve_K(law, in);
    CHECK(rel(out(3, 2), law.K(5)) < 1e-15);
    CHECK(out(0, 2) == 0.0);
}

TEST_CASE("scaling sequences") {
    const RenewalLaw l05(0.5), l15(1.5), l25(2.5);
    double prev = 0;
    for (long n : {1L, 4L, 16L, 64L, 256L}) {
        const auto s = scaling_sequences(l05, n);
        CHECK(s.a_n >= prev);
        CHECK(s.b_n == 0.0);
        prev = s.a_n;
    }
    const auto s15 = scaling_sequences(l15, 100);
    CHECK(s15.b_n > 0);
    CHECK(s15.mu_n > 0);
    CHECK(scaling_sequences(l25, 400).a_n > scaling_sequences(l25, 100).a_n);
    long double m = 0;
    for (long a = 1; a <= 50; ++a) m += a * l15.projection_interarrival(a);
    CHECK(rel(truncated_mean(l15, 50), static_cast<double>(m)) < 1e-12);
}

TEST_CASE("intersection statistics") {
    const RenewalLaw law(0.8);
    const auto s = intersection_stats(law, {32, 32}, 4000, 3);
    CHECK(s.violations == 0);
    CHECK(s.samples == 4000);
    CHECK(s.bivariate.mean.value <= s.first.mean.value);
    CHECK(s.bivariate.geometric_q == doctest::Approx(s.bivariate.mean.value / (1 + s.bivariate.mean.value)));
    CHECK(intersection_stats(law, {8, 8}, 0, 1).empty);
    CHECK(projection_overlap({{1, 1}, {3, 4}}, {{1, 2}, {3, 5}}, 1) == 2);
    CHECK(projection_overlap({{1, 1}, {3, 4}}, {{1, 2}, {3, 5}}, 2) == 0);
    CHECK(bivariate_overlap({{1, 1}, {3, 4}}, {{1, 1}, {3, 5}}) == 1);
}

}
