#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "gpslab/geometry.hpp"
#include "gpslab/rng.hpp"
#include "gpslab/stats.hpp"

namespace gpslab {

// Slowly varying factor L(t) of the inter-arrival law.
struct SlowVary {
    enum class Kind { constant, log_power, table };
    Kind kind = Kind::constant;
    double kappa = 0.0;
    std::vector<double> values;  // L(2), L(3), ...; the last entry is held beyond the table

    static SlowVary constant() { return {}; }
    static SlowVary log_power(double kappa);
    static SlowVary table(std::vector<double> values);

    double operator()(double t) const;
    // from here on L is smooth enough for Euler-Maclaurin
    long smooth_from() const;
};

// Sum of f(t) over integers t >= m. Explicit up to `from`, Euler-Maclaurin
// (exp_sinh quadrature plus two boundary corrections) beyond.
double tail_sum(const std::function<double(double)>& f, long m, long from = 2048);

// c such that sum_{t>=2} (t-1) c L(t) t^{-2-alpha} = 1 (tail included analytically).
// Throws RangeError naming the minimum horizon if the truncation bracket at
// `horizon` (width c * (H) L(H+1) (H+1)^{-2-alpha}) is not below tail_tol.
double normalize(double alpha, const SlowVary& L, long horizon, double tail_tol = 1e-6);
long min_horizon(double alpha, const SlowVary& L, double tail_tol = 1e-6);

// K(a,b) = c L(a+b) (a+b)^{-(2+alpha)} on N^2.
class RenewalLaw {
public:
    // horizon 0 picks max(4096, min_horizon)
    explicit RenewalLaw(double alpha, SlowVary L = SlowVary::constant(), long horizon = 0,
                        double tail_tol = 1e-6);

    double alpha() const { return alpha_; }
    const SlowVary& slow_vary() const { return L_; }
    double norm_const() const { return c_; }
    long horizon() const { return H_; }
    double tail_tol() const { return tol_; }

    // K as a function of the total jump length t = a+b (any t; 0 below 2)
    double K(long t) const;
    const std::vector<double>& K_table() const { return Kt_; }  // index t, 0..H+2

    double interarrival_mass(long a, long b) const;  // checks the horizon
    double mass_within_horizon() const;  // sum_{t<=H} (t-1) K(t)
    double escape_mass() const;          // sum_{t>H} (t-1) K(t)

    double tail_K(long m) const;  // sum_{t>=m} K(t)
    double tail_G(long m) const;  // sum_{t>=m} (t-m+1) K(t)

    // P(tau_1^(1) = a) = sum_{b>=1} K(a+b)
    double projection_interarrival(long a) const { return tail_K(a + 1); }
    // P(first jump does not stay inside [1,A]x[1,B]) = P(a>A or b>B)
    double exit_mass(long A, long B) const;

    // total t of a jump drawn with mass (t-1)K(t); 0 means t > horizon
    long sample_total(double u) const;
    // a single jump (a,b); (0,0) if the total is beyond the horizon
    Point sample_jump(Philox& rng) const;

    void check_box(Box b) const;

private:
    double alpha_;
    SlowVary L_;
    double c_;
    long H_;
    double tol_;
    std::vector<double> Kt_, S0_, G_, cdf_;
};

Trajectory sample_trajectory(const RenewalLaw& law, Philox& rng, Box box, Mode mode);

// u(i,j) = P((i,j) in tau), u(0,0) = 1
Grid renewal_mass_grid(const RenewalLaw& law, Box box);

// out(n) = sum over m = (0,0) or m ≺ n of in(m) K(|n-m|), for n in N^2 ∩ box
Grid convolve_K(const RenewalLaw& law, const Grid& in);
// P(tau_j = n) for n in the box
Grid epoch_mass_grid(const RenewalLaw& law, int j, Box box);

struct ScalingSeq {
    double a_n = 0.0;
    double b_n = 0.0;
    double mu_n = 0.0;
};
double truncated_mean(const RenewalLaw& law, long n);  // sum_{a<=n} a P(tau_1^(1)=a)
ScalingSeq scaling_sequences(const RenewalLaw& law, long n);

struct CounterSummary {
    Estimate mean;
    double variance = 0.0;
    double geometric_q = 0.0;  // MLE of a geometric law on {0,1,...}: mean/(1+mean)
};
struct IntersectionSummary {
    bool empty = true;
    long samples = 0;
    CounterSummary bivariate, first, second;
    long violations = 0;  // pairs with |tau∩tau'| > min(p1,p2)
};
IntersectionSummary intersection_stats(const RenewalLaw& law, Box box, long samples, std::uint64_t seed);

// projection overlap |{rows of t1} ∩ {rows of t2}| (coordinate 1 or 2)
int projection_overlap(const Trajectory& t1, const Trajectory& t2, int coord);
int bivariate_overlap(const Trajectory& t1, const Trajectory& t2);

}  // namespace gpslab
