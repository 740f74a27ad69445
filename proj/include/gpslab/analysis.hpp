#pragma once
#include <cstdint>
#include <vector>

#include "gpslab/disorder.hpp"
#include "gpslab/geometry.hpp"
#include "gpslab/partition.hpp"
#include "gpslab/renewal.hpp"
#include "gpslab/stats.hpp"

namespace gpslab {

// log Z^q for `samples` independent disorder draws (one deterministic draw when beta == 0)
std::vector<double> log_partition_samples(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, double h,
                                          Box box, long samples, std::uint64_t seed, Mode mode = Mode::constrained);

// mean of (1/n1) log Z^q
Estimate free_energy_estimate(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, double h, Box box,
                              long samples, std::uint64_t seed, Mode mode = Mode::constrained);

struct FiniteSizeF {
    Estimate best;      // box attaining the max (super-additive lower bound when constrained)
    Estimate headline;  // largest box
    std::vector<Estimate> per_box;
};
FiniteSizeF finite_size_free_energy(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, double h,
                                    const std::vector<int>& schedule, long samples, std::uint64_t seed,
                                    Mode mode = Mode::constrained);

struct CriticalOptions {
    double n_se = 3.0;           // threshold in standard errors
    double boundary_coef = 0.0;  // extra boundary allowance coef/n
    double tol = 1e-3;
    long samples = 200;
    Mode mode = Mode::free;
};
struct CriticalResult {
    double h_c = 0.0, lo = 0.0, hi = 0.0;
    int evaluations = 0;
};
CriticalResult critical_point_bisect(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta,
                                     const std::vector<int>& schedule, const CriticalOptions& opt,
                                     std::uint64_t seed);

// F(0,h) from the renewal equation sum_t (t-1) K(t) e^{-x t} = e^{-h}, F = 2x (zero for h <= 0)
double homogeneous_free_energy(const RenewalLaw& rlaw, double h);

struct ExponentFit {
    double exponent = 0.0, intercept = 0.0, r2 = 0.0;
    std::vector<double> h, F, F_finite;  // F_finite: (1/n) log Z_{n,h} at n = box_cap
    int box_cap = 0;
    bool consistent = true;  // F_finite <= F on every grid point
};
ExponentFit homogeneous_exponent_fit(const RenewalLaw& rlaw, const std::vector<double>& h_grid, int box_cap);

struct NBeta {
    int n_beta = 0;  // 0: even the smallest box exceeds C
    bool unbounded = false;
    std::vector<Estimate> per_box;
};
NBeta n_beta_estimate(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, double C,
                      const std::vector<int>& schedule, long samples, std::uint64_t seed);

Estimate fractional_moment(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, double h, double eta, Box box,
                           long samples, std::uint64_t seed);

// Â_i for i in [0,k-1]^2
struct FracMomentTable {
    double eta = 0.5;
    int k = 0;
    std::vector<Estimate> entries;
    const Estimate& at(int i1, int i2) const { return entries[static_cast<std::size_t>(i1) * k + i2]; }
};
FracMomentTable frac_moment_table(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, double h, double eta,
                                  int k, long samples, std::uint64_t seed);
// A_i replaced by its Jensen bound (homogeneous Z_{i,h})^η
FracMomentTable jensen_table(const RenewalLaw& rlaw, double h, double eta, int k);

// c_{β,h,η} = e^{λ(ηβ) - ηλ(β) + ηh}
double coarse_grain_constant(const StrandLaw& slaw, double beta, double h, double eta);

struct RhoResult {
    double rho1 = 0.0, rho2 = 0.0, rho3 = 0.0, sum = 0.0;
    bool triggered = false;  // sum <= 1
    long radius = 0;
};
// radius: explicit sum over ‖j‖ <= radius (0 = automatic); the rest from Euler-Maclaurin if include_tail
RhoResult coarse_grain_rho(const RenewalLaw& rlaw, int k, double eta, const FracMomentTable& A, double c_const,
                           long radius = 0, bool include_tail = true);

struct ZhomCheck {
    double lhs = 0.0;    // Z_{n,-u}
    double t1 = 0.0;     // K(‖n‖)/u²
    double t2 = 0.0;     // P(n∈τ) e^{-c2 u ‖n‖^γ}
    double c_fit = 0.0;  // smallest C1 on the diagonal grid m <= n
    double rhs = 0.0;
    bool holds = false;
};
// alpha_minus <= 0 means 0.9 alpha
ZhomCheck zhom_negative_check(const RenewalLaw& rlaw, double u, Box box, double alpha_minus = 0.0, double c2 = 1.0);

enum class TiltMode { linear, quadratic };
// log E_{n,δ}[Z^q_{n,h}] (constrained) = log Z_{n,h'} with h' = h + log Frac
double tilted_annealed(const RenewalLaw& rlaw, const StrandLaw& slaw, double delta, double beta, double h, Box box,
                       TiltMode kind);

struct DiagonalTilt {
    Estimate qbar;
    double ell = 0.0;
    int half_width = 0;  // |i-j| <= half_width
    int max_row = 0;     // largest |J_n(i)|
    double max_abs_sigma = 0.0;
    bool sigma_within_2ell = true;
};
DiagonalTilt diagonal_tilt(const RenewalLaw& rlaw, const StrandLaw& slaw, Box box, double delta, long samples,
                           std::uint64_t seed, double eps = 0.0, double c_wide = 2.0);
double diagonal_width(double alpha, int n, double eps = 0.0, double c_wide = 2.0);

struct SmoothingCurve {
    double h_c = 0.0;
    std::vector<double> t;
    std::vector<Estimate> F;
    double local_exponent = 0.0;  // NaN if fewer than two positive points
    bool exploratory = true;
};
SmoothingCurve smoothing_curve(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta,
                               const std::vector<double>& t_grid, const std::vector<int>& schedule, long samples,
                               std::uint64_t seed);

// least squares slope of y on x
struct LineFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gpslab
