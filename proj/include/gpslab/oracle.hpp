#pragma once
#include <functional>
#include <vector>

#include "gpslab/disorder.hpp"
#include "gpslab/geometry.hpp"
#include "gpslab/partition.hpp"
#include "gpslab/renewal.hpp"

// Brute-force ground truth on tiny boxes. Nothing here samples or rescales.
namespace gpslab::oracle {

struct PathEnumeration {
    Box box{};
    Mode mode = Mode::constrained;
    std::vector<Trajectory> paths;
};

// every strictly increasing point sequence in the box (constrained: ending at the corner;
// free: any, including the empty one). Requires n1*n2 <= 36.
PathEnumeration enumerate_trajectories(Box box, Mode mode);

// c(i,j) = 1 + sum_{a<i, b<j} c(a,b)
long long constrained_path_count(Box box);

// prod of jump masses, times the exit mass from the last point in free mode
long double path_probability(const RenewalLaw& law, const Trajectory& p, Box box, Mode mode);

long double exact_partition_brute(const RenewalLaw& law, const LogWeights& w, Mode mode);
long double exact_partition_brute(const RenewalLaw& law, const StrandSample& s, const StrandLaw& slaw, double beta,
                                  double h, Box box, Mode mode);

// calls f(sample, probability) for every strand configuration; s^{n1+n2} <= 1e7
void enumerate_disorder(const StrandLaw& slaw, Box box,
                        const std::function<void(const StrandSample&, long double)>& f);
// strand configurations weighted by a tilted single-site law q(x) ∝ p(x) e^{tilt(x)}
void enumerate_disorder_tilted(const StrandLaw& slaw, Box box, const std::function<double(double)>& tilt,
                               const std::function<void(const StrandSample&, long double)>& f);

// E[(Z^free_{n,0})^2] by full disorder enumeration
long double exact_second_moment_brute(const RenewalLaw& law, const StrandLaw& slaw, double beta, Box box);
// E over free pairs of e^{(λ(2β)-2λ(β))|τ∩τ'|}
long double exact_intersection_moment(const RenewalLaw& law, const StrandLaw& slaw, double beta, Box box);
// E over free pairs of the factorized pair weight (decompose + chain weights)
long double exact_second_moment_factorized(const RenewalLaw& law, const StrandLaw& slaw, double beta, Box box);
// E[Z^q_{n,h}] (constrained) by disorder enumeration
long double exact_annealed_brute(const RenewalLaw& law, const StrandLaw& slaw, double beta, double h, Box box);
// E[log Z^q] and E[Z^η] (constrained) by disorder enumeration
long double exact_mean_log_partition(const RenewalLaw& law, const StrandLaw& slaw, double beta, double h, Box box,
                                     Mode mode = Mode::constrained);
long double exact_fractional_moment(const RenewalLaw& law, const StrandLaw& slaw, double beta, double h, double eta,
                                    Box box);
// E_{n,δ}[Z^q_{n,h}] under the linear (e^{δx}) or quadratic (e^{-δx²}) strand tilt
long double exact_tilted_brute(const RenewalLaw& law, const StrandLaw& slaw, double delta, double beta, double h,
                               Box box, bool quadratic);

}  // namespace gpslab::oracle
