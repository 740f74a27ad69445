#pragma once
#include <limits>
#include <vector>

#include "gpslab/disorder.hpp"
#include "gpslab/geometry.hpp"
#include "gpslab/renewal.hpp"

namespace gpslab {

// Value at (i,j) is mantissa(i,j) * exp(diag_log_scale[i+j]).
struct ScaledGrid {
    Box box{};
    double m_cap = 1e100;
    std::vector<double> mantissa;        // (n1+1) x (n2+1), row-major
    std::vector<double> diag_log_scale;  // index d = i+j, 0..n1+n2

    double m(int i, int j) const { return mantissa[static_cast<std::size_t>(i) * (box.n2 + 1) + j]; }
    double log_value(int i, int j) const;
};

struct PartitionResult {
    double log_value = -std::numeric_limits<double>::infinity();
    Mode mode = Mode::constrained;
    Box box{};
    bool zero() const { return log_value == -std::numeric_limits<double>::infinity(); }
};

struct DpOptions {
    double m_cap = 1e100;
};

// Per-site log weights w(i,j) for 1<=i<=n1, 1<=j<=n2, stored (i-1)*n2 + (j-1).
struct LogWeights {
    Box box{};
    std::vector<double> w;
    double operator()(int i, int j) const { return w[static_cast<std::size_t>(i - 1) * box.n2 + (j - 1)]; }
};

LogWeights quenched_weights(const StrandSample& s, const StrandLaw& slaw, double beta, double h);
LogWeights constant_weights(Box box, double h);

// Z(i,j) = e^{w(i,j)} sum_{(a,b) ≺ (i,j) or (0,0)} Z(a,b) K(i-a+j-b), Z(0,0) = 1.
// `contacts`, if given, receives sum over paths of weight x number of contacts (same scales).
ScaledGrid solve_grid(const RenewalLaw& law, const LogWeights& w, const DpOptions& opt = {},
                      ScaledGrid* contacts = nullptr);

// log of sum_{(i,j) in box or (0,0)} Z(i,j) ExitMass(n1-i, n2-j)
double free_log_sum(const RenewalLaw& law, const ScaledGrid& z);

PartitionResult partition_from_weights(const RenewalLaw& law, const LogWeights& w, Mode mode,
                                       const DpOptions& opt = {});

PartitionResult quenched_partition(const RenewalLaw& rlaw, const StrandSample& s, const StrandLaw& slaw, double beta,
                                   double h, Box box, Mode mode, const DpOptions& opt = {});
PartitionResult homogeneous_partition(const RenewalLaw& rlaw, double h, Box box, Mode mode,
                                      const DpOptions& opt = {});
// Z_{a,b}: start at a, end at b, disorder on [a+1, b]. Zero sentinel unless a ≺ b.
PartitionResult conditioned_partition(const RenewalLaw& rlaw, const StrandSample& s, const StrandLaw& slaw,
                                      double beta, double h, Point a, Point b, const DpOptions& opt = {});
// (1/n1) E^{Gibbs}[|tau ∩ box|] for the constrained measure
double contact_fraction(const RenewalLaw& rlaw, const StrandSample& s, const StrandLaw& slaw, double beta, double h,
                        Box box, const DpOptions& opt = {});

namespace reference {
// Serial O(n^4) recursion in long double, no rescaling. For tests and benchmarks.
PartitionResult naive_partition(const RenewalLaw& law, const LogWeights& w, Mode mode);
}  // namespace reference

}  // namespace gpslab
