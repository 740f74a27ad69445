#include <algorithm>
#include <cmath>

#include "gpslab/analysis.hpp"
#include "gpslab/cli.hpp"
#include "gpslab/oracle.hpp"
#include "gpslab/partition.hpp"
#include "gpslab/replica.hpp"

namespace gpslab::cli {

namespace {

double rel(long double a, long double b) {
    const long double d = std::fabs(a - b), s = std::max(std::fabs(a), std::fabs(b));
    return s == 0 ? 0.0 : static_cast<double>(d / s);
}

StrandLaw three_point() { return StrandLaw::discrete({-1.0, 0.0, 1.5}, {0.3, 0.4, 0.3}); }

VerifyCase make(std::string name, double err, double tol) { return {std::move(name), err <= tol, err, tol}; }

}  // namespace

std::vector<VerifyCase> verify_suite() {
    std::vector<VerifyCase> out;
    const RenewalLaw l05(0.5), l15(1.5);
    const std::vector<const RenewalLaw*> laws = {&l05, &l15};
    const std::vector<StrandLaw> slaws = {StrandLaw::gaussian(), StrandLaw::rademacher(), three_point()};

    {
        const auto e = oracle::enumerate_trajectories({3, 3}, Mode::constrained);
        const double err = std::fabs(static_cast<double>(e.paths.size()) - 6) +
                           std::fabs(static_cast<double>(oracle::constrained_path_count({3, 3})) - 6);
        out.push_back(make("path-count (3,3)", err, 0.0));
    }
    {
        // c = 1/(ζ(1.5) - ζ(2.5)) for α = 1/2, L = 1
        const double c = 1.0 / (2.612375348685488 - 1.341487257250917);
        out.push_back(make("normalization alpha=0.5", rel(l05.norm_const(), c), 1e-12));
    }
    {
        double worst = 0;
        Philox rng(20240601);
        for (const auto* law : laws)
            for (const auto& sl : slaws)
                for (double beta : {0.0, 0.3, 0.6})
                    for (Box b : {Box{1, 1}, Box{2, 3}, Box{3, 2}, Box{4, 4}})
                        for (Mode m : {Mode::constrained, Mode::free}) {
                            const auto s = sample_strands(sl, b, rng);
                            const auto w = quenched_weights(s, sl, beta, 0.1);
                            const double dp = partition_from_weights(*law, w, m).log_value;
                            const long double bf = oracle::exact_partition_brute(*law, w, m);
                            worst = std::max(worst, rel(std::exp(static_cast<long double>(dp)), bf));
                        }
        out.push_back(make("dp vs path enumeration", worst, 1e-12));
    }
    {
        double worst = 0;
        Philox rng(77);
        for (int k = 0; k < 10; ++k) {
            const Box b{3 + static_cast<int>(rng() % 10), 3 + static_cast<int>(rng() % 10)};
            const auto s = sample_strands(slaws[0], b, rng);
            const auto w = quenched_weights(s, slaws[0], 0.4, -0.05);
            for (Mode m : {Mode::constrained, Mode::free}) {
                const double a = partition_from_weights(l15, w, m).log_value;
                const double r = reference::naive_partition(l15, w, m).log_value;
                worst = std::max(worst, std::fabs(a - r) / std::max(1.0, std::fabs(r)));
            }
        }
        out.push_back(make("dp vs naive recursion", worst, 1e-12));
    }
    {
        double worst = 0;
        for (const auto& sl : {slaws[1], slaws[2]})
            for (double h : {0.0, 0.2}) {
                const long double a = oracle::exact_annealed_brute(l05, sl, 0.4, h, {3, 3});
                const double z = homogeneous_partition(l05, h, {3, 3}, Mode::constrained).log_value;
                worst = std::max(worst, rel(a, std::exp(static_cast<long double>(z))));
            }
        out.push_back(make("annealed = homogeneous", worst, 1e-12));
    }
    {
        double worst = 0;
        for (const auto* law : laws) {
            const long double a = oracle::exact_second_moment_brute(*law, slaws[1], 0.6, {3, 3});
            const long double b = oracle::exact_intersection_moment(*law, slaws[1], 0.6, {3, 3});
            worst = std::max(worst, rel(a, b));
        }
        out.push_back(make("rademacher second moment identity", worst, 1e-10));
    }
    {
        const long double a = oracle::exact_second_moment_brute(l15, slaws[2], 0.4, {2, 2});
        const long double b = oracle::exact_second_moment_factorized(l15, slaws[2], 0.4, {2, 2});
        out.push_back(make("chain factorization (3-point)", rel(a, b), 1e-10));
    }
    {
        double worst = 0;
        for (bool quad : {false, true}) {
            const long double a = oracle::exact_tilted_brute(l15, slaws[2], 0.1, 0.3, 0.1, {3, 3}, quad);
            const double t = tilted_annealed(l15, slaws[2], 0.1, 0.3, 0.1, {3, 3},
                                             quad ? TiltMode::quadratic : TiltMode::linear);
            worst = std::max(worst, rel(a, std::exp(static_cast<long double>(t))));
        }
        out.push_back(make("tilted annealed (3-point)", worst, 1e-10));
    }
    {
        const double b = 0.3;
        out.push_back(make("xi_1 = exp(lambda)", rel(xi_sequence(b, 1)[0], std::exp(log_mgf(slaws[0], b))), 1e-12));
    }
    return out;
}

}  // namespace gpslab::cli
