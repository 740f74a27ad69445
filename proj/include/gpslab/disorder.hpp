#pragma once
#include <string>
#include <vector>

#include "gpslab/geometry.hpp"
#include "gpslab/rng.hpp"

namespace gpslab {

// Law of a single strand charge. Both strands use the same law.
struct StrandLaw {
    enum class Kind { gaussian, rademacher, discrete };
    Kind kind = Kind::gaussian;
    double sigma = 1.0;          // gaussian
    double x = 1.0;              // rademacher: +-x
    std::vector<double> values;  // discrete support
    std::vector<double> probs;

    static StrandLaw gaussian(double sigma = 1.0);
    static StrandLaw rademacher(double x = 1.0);
    static StrandLaw discrete(std::vector<double> values, std::vector<double> probs);

    // largest beta with E[exp(beta w1 w2)] finite; +inf for bounded laws
    double beta0() const;
    bool bounded() const { return kind != Kind::gaussian; }
    std::string name() const;
};

// Finite support view (rademacher becomes a two-point discrete law). Throws for gaussian.
StrandLaw as_discrete(const StrandLaw& law);

struct StrandSample {
    std::vector<double> hat;  // ω̂_1..ω̂_{n1}
    std::vector<double> bar;  // ω̄_1..ω̄_{n2}
    Box box() const { return {static_cast<int>(hat.size()), static_cast<int>(bar.size())}; }
};

StrandSample sample_strands(const StrandLaw& law, Box box, Philox& rng);
std::vector<double> sample_strand(const StrandLaw& law, int n, Philox& rng);

// ω_ij = ω̂_i ω̄_j, 1-based
double field_value(const StrandSample& s, int i, int j);

// λ(β) = log E[exp(β ω̂ ω̄)]
double log_mgf(const StrandLaw& law, double beta);
// λ(2β) - 2λ(β)
double replica_gap(const StrandLaw& law, double beta);

double moment(const StrandLaw& law, int k);

// Q(δ,β) = E[exp(β ω̂ω̄ + δω̂ + δω̄)]
double tilt_Q(const StrandLaw& law, double delta, double beta);
// R(δ,β) = E[exp(β ω̂ω̄ - δω̂² - δω̄²)]
double tilt_R(const StrandLaw& law, double delta, double beta);

// Frac = Q(δ,β)/(Q(δ,0)Q(0,β)), Frac2 = R(δ,β)/(R(δ,0)R(0,β)); returned minus one
// so that tiny deviations keep their digits.
double frac_Q_minus_one(const StrandLaw& law, double delta, double beta);
double frac_R_minus_one(const StrandLaw& law, double delta, double beta);

enum class TiltKind { Q_frac, R_frac };

struct TaylorResidual {
    double value = 0.0;          // Frac
    double value_minus_one = 0.0;
    double leading_term = 0.0;
    double residual = 0.0;       // value - 1 - leading_term
};
TaylorResidual taylor_residual(TiltKind kind, const StrandLaw& law, double delta, double beta);

// relative entropy of the law of (1+δ)ω̂ with respect to that of ω̂ (gaussian only)
double dilation_entropy(const StrandLaw& law, double delta);

}  // namespace gpslab
