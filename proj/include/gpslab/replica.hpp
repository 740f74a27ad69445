#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "gpslab/disorder.hpp"
#include "gpslab/geometry.hpp"
#include "gpslab/renewal.hpp"
#include "gpslab/stats.hpp"

namespace gpslab {

struct ChainDecomposition {
    std::vector<Point> doubles;                // τ ∩ τ'
    std::vector<Point> isolated;               // no aligned partner
    std::vector<std::vector<Point>> chains;    // alternating aligned sequences
    std::size_t chained_points() const;
};

// Both trajectories are cut to the box first.
ChainDecomposition decompose(const Trajectory& t1, const Trajectory& t2, Box box);

// Empty when every structural property holds; one message per violation otherwise.
// Also checks ½(p1+p2) <= |ν| + |chained| <= 2(p1+p2).
std::vector<std::string> check_decomposition(const ChainDecomposition& d, const Trajectory& t1,
                                             const Trajectory& t2, Box box);

// ξ_1..ξ_ℓ with ξ_0 = 1, ξ_{k+1} = (1 - β²ξ_k²)^{-1/2}; needs β <= ½
std::vector<double> xi_sequence(double beta, int len);
double xi_limit(double beta);

// E[prod over a chain of ℓ points of e^{βω - λ(β)}]
double chain_weight(const StrandLaw& slaw, double beta, int len);

// Monte Carlo of the chain expectation E[prod_{k<=len} e^{β X_k X_{k+1} - λ(β)}] for len = 1..max_len
// (entry len-1). Gaussian strands are drawn from N(0, (proposal_sd σ)²) and reweighted, which keeps
// the variance finite where plain sampling has none; other laws are sampled directly.
std::vector<Estimate> chain_weight_mc(const StrandLaw& slaw, double beta, int max_len, long samples,
                                      std::uint64_t seed, double proposal_sd = 2.0);

// chain weights for lengths 0..max_len, computed once per (law, β)
class ChainWeights {
public:
    ChainWeights(const StrandLaw& slaw, double beta, int max_len);
    double operator()(int len) const;

private:
    std::vector<double> w_;
};

double pair_second_moment_weight(const ChainDecomposition& d, const StrandLaw& slaw, double beta);
double pair_second_moment_weight(const ChainDecomposition& d, double gap, const ChainWeights& cw);

struct PairSample {
    double weight = 1.0;     // e^{gap |ν|} prod chain weights
    double cs_bound = 1.0;   // e^{(3/2) gap (p1+p2)}
    double cs_single = 1.0;  // e^{3 gap p1}
    int doubles = 0, isolated = 0, chained = 0, chains = 0, p1 = 0, p2 = 0;
};

// one pair of independent free trajectories per index, derived from `seed`
std::vector<PairSample> replica_samples(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, Box box,
                                        long samples, std::uint64_t seed);

Estimate second_moment_mc(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, Box box, long samples,
                          std::uint64_t seed);

struct CsBound {
    Estimate full;    // E[e^{(3/2)gap(p1+p2)}]
    Estimate single;  // E[e^{3 gap p1}]
};
CsBound second_moment_cs_bound(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, Box box, long samples,
                               std::uint64_t seed);

}  // namespace gpslab
