#include "gpslab/disorder.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "gpslab/errors.hpp"

namespace gpslab {

StrandLaw StrandLaw::gaussian(double sigma) {
    if (!(sigma > 0)) throw DomainError("sigma", "gaussian sigma must be positive");
    StrandLaw l;
    l.kind = Kind::gaussian;
    l.sigma = sigma;
    return l;
}

StrandLaw StrandLaw::rademacher(double x) {
    if (!(x > 0)) throw DomainError("x", "rademacher magnitude must be positive");
    StrandLaw l;
    l.kind = Kind::rademacher;
    l.x = x;
    return l;
}

StrandLaw StrandLaw::discrete(std::vector<double> values, std::vector<double> probs) {
    if (values.empty() || values.size() != probs.size())
        throw DomainError("probs", "discrete law needs matching nonempty values/probs");
    if (values.size() > 8) throw DomainError("values", "discrete support is capped at 8 points");
    double s = 0;
    for (double p : probs) {
        if (!(p >= 0)) throw DomainError("probs", "probabilities must be nonnegative");
        s += p;
    }
    if (std::abs(s - 1.0) > 1e-12) throw DomainError("probs", "probabilities must sum to 1");
    StrandLaw l;
    l.kind = Kind::discrete;
    l.values = std::move(values);
    l.probs = std::move(probs);
    return l;
}

double StrandLaw::beta0() const {
    if (kind == Kind::gaussian) return 1.0 / (sigma * sigma);
    return std::numeric_limits<double>::infinity();
}

std::string StrandLaw::name() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::gaussian: os << "gaussian(" << sigma << ")"; break;
    case Kind::rademacher: os << "rademacher(" << x << ")"; break;
    case Kind::discrete:
        os << "discrete(";
        for (std::size_t k = 0; k < values.size(); ++k) os << (k ? ";" : "") << values[k] << ":" << probs[k];
        os << ")";
        break;
    }
    return os.str();
}

StrandLaw as_discrete(const StrandLaw& law) {
    switch (law.kind) {
    case StrandLaw::Kind::discrete: return law;
    case StrandLaw::Kind::rademacher: return StrandLaw::discrete({-law.x, law.x}, {0.5, 0.5});
    default: throw UnsupportedLawError("gaussian law has no finite support");
    }
}

std::vector<double> sample_strand(const StrandLaw& law, int n, Philox& rng) {
    std::vector<double> v(n);
    switch (law.kind) {
    case StrandLaw::Kind::gaussian: {
        std::normal_distribution<double> nd(0.0, law.sigma);
        for (auto& w : v) w = nd(rng);
        break;
    }
    case StrandLaw::Kind::rademacher:
        for (auto& w : v) w = (rng() >> 63) ? law.x : -law.x;
        break;
    case StrandLaw::Kind::discrete:
        for (auto& w : v) {
            double u = rng.uniform();
            std::size_t k = 0;
            while (k + 1 < law.probs.size() && u >= law.probs[k]) u -= law.probs[k++];
            w = law.values[k];
        }
        break;
    }
    return v;
}

StrandSample sample_strands(const StrandLaw& law, Box box, Philox& rng) {
    if (box.n1 < 1 || box.n2 < 1) throw RangeError("sample_strands: box sides must be >= 1");
    StrandSample s;
    s.hat = sample_strand(law, box.n1, rng);
    s.bar = sample_strand(law, box.n2, rng);
    return s;
}

double field_value(const StrandSample& s, int i, int j) {
    if (i < 1 || j < 1 || i > static_cast<int>(s.hat.size()) || j > static_cast<int>(s.bar.size()))
        throw RangeError("field_value: index outside the sample");
    return s.hat[i - 1] * s.bar[j - 1];
}

namespace {

// log sum_{x,y} p_x p_y exp(f(x,y))
template <class F>
double log_double_sum(const StrandLaw& d, F f) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < d.values.size(); ++a)
        for (std::size_t b = 0; b < d.values.size(); ++b)
            if (d.probs[a] > 0 && d.probs[b] > 0) mx = std::max(mx, f(d.values[a], d.values[b]));
    long double s = 0;
    for (std::size_t a = 0; a < d.values.size(); ++a)
        for (std::size_t b = 0; b < d.values.size(); ++b)
            if (d.probs[a] > 0 && d.probs[b] > 0)
                s += static_cast<long double>(d.probs[a]) * d.probs[b] * std::exp(f(d.values[a], d.values[b]) - mx);
    return mx + static_cast<double>(std::log(s));
}

void check_beta(const StrandLaw& law, double beta) {
    if (!std::isfinite(beta)) throw DomainError("beta", "beta must be finite");
    if (std::abs(beta) >= law.beta0())
        throw DomainError("beta", "E[exp(beta*omega)] diverges: |beta| = " + std::to_string(std::abs(beta)) +
                                      " >= beta0 = " + std::to_string(law.beta0()));
}

}  // namespace

double log_mgf(const StrandLaw& law, double beta) {
    check_beta(law, beta);
    switch (law.kind) {
    case StrandLaw::Kind::gaussian: {
        const double b = beta * law.sigma * law.sigma;
        return -0.5 * std::log1p(-b * b);
    }
    case StrandLaw::Kind::rademacher: {
        const double b = std::abs(beta) * law.x * law.x;
        // log cosh without overflow
        return b + std::log1p(std::exp(-2 * b)) - std::log(2.0);
    }
    case StrandLaw::Kind::discrete:
        return log_double_sum(law, [beta](double u, double v) { return beta * u * v; });
    }
    return 0.0;
}

double replica_gap(const StrandLaw& law, double beta) { return log_mgf(law, 2 * beta) - 2 * log_mgf(law, beta); }

double moment(const StrandLaw& law, int k) {
    if (k < 0) throw RangeError("moment order must be >= 0");
    switch (law.kind) {
    case StrandLaw::Kind::gaussian: {
        if (k % 2) return 0.0;
        double df = 1.0;
        for (int m = k - 1; m > 1; m -= 2) df *= m;
        return df * std::pow(law.sigma, k);
    }
    case StrandLaw::Kind::rademacher: return k % 2 ? 0.0 : std::pow(law.x, k);
    case StrandLaw::Kind::discrete: {
        long double s = 0;
        for (std::size_t a = 0; a < law.values.size(); ++a) s += law.probs[a] * std::pow(law.values[a], k);
        return static_cast<double>(s);
    }
    }
    return 0.0;
}

namespace {

double log_Q(const StrandLaw& law, double delta, double beta) {
    check_beta(law, beta);
    switch (law.kind) {
    case StrandLaw::Kind::gaussian: {
        const double s2 = law.sigma * law.sigma, b = beta * s2, d2 = delta * delta * s2;
        return -0.5 * std::log1p(-b * b) + d2 / (1 - b);
    }
    case StrandLaw::Kind::rademacher: {
        const double b = beta * law.x * law.x, d = delta * law.x;
        // ½[e^b cosh 2d + e^{-b}]
        const double m = std::max(b + 2 * std::abs(d), -b);
        return m + std::log(0.25 * (std::exp(b + 2 * d - m) + std::exp(b - 2 * d - m)) + 0.5 * std::exp(-b - m));
    }
    case StrandLaw::Kind::discrete:
        return log_double_sum(law, [=](double u, double v) { return beta * u * v + delta * (u + v); });
    }
    return 0.0;
}

double log_R(const StrandLaw& law, double delta, double beta) {
    check_beta(law, beta);
    switch (law.kind) {
    case StrandLaw::Kind::gaussian: {
        const double s2 = law.sigma * law.sigma, b = beta * s2, e = delta * s2;
        const double a = 1 + 2 * e;
        if (!(a > std::abs(b))) throw DomainError("delta", "quadratic tilt outside the finiteness region");
        return -0.5 * std::log((a - b) * (a + b));
    }
    case StrandLaw::Kind::rademacher: {
        const double x2 = law.x * law.x;
        return -2 * delta * x2 + log_mgf(law, beta);
    }
    case StrandLaw::Kind::discrete:
        return log_double_sum(law, [=](double u, double v) { return beta * u * v - delta * (u * u + v * v); });
    }
    return 0.0;
}

}  // namespace

double tilt_Q(const StrandLaw& law, double delta, double beta) { return std::exp(log_Q(law, delta, beta)); }
double tilt_R(const StrandLaw& law, double delta, double beta) { return std::exp(log_R(law, delta, beta)); }

double frac_Q_minus_one(const StrandLaw& law, double delta, double beta) {
    switch (law.kind) {
    case StrandLaw::Kind::gaussian: {
        check_beta(law, beta);
        const double s2 = law.sigma * law.sigma, b = beta * s2;
        return std::expm1(delta * delta * s2 * b / (1 - b));
    }
    case StrandLaw::Kind::rademacher: {
        check_beta(law, beta);
        const double t = std::tanh(delta * law.x);
        return t * t * std::tanh(beta * law.x * law.x);
    }
    default:
        return std::expm1(log_Q(law, delta, beta) - log_Q(law, delta, 0.0) - log_Q(law, 0.0, beta));
    }
}

double frac_R_minus_one(const StrandLaw& law, double delta, double beta) {
    switch (law.kind) {
    case StrandLaw::Kind::gaussian: {
        check_beta(law, beta);
        const double s2 = law.sigma * law.sigma, b = beta * s2, a = 1 + 2 * delta * s2;
        if (!(a > std::abs(b))) throw DomainError("delta", "quadratic tilt outside the finiteness region");
        return std::expm1(0.5 * (std::log1p(-b * b) - std::log1p(-(b / a) * (b / a))));
    }
    case StrandLaw::Kind::rademacher:
        check_beta(law, beta);
        return 0.0;  // e^{-2δx²} factors out of R exactly
    default:
        return std::expm1(log_R(law, delta, beta) - log_R(law, delta, 0.0) - log_R(law, 0.0, beta));
    }
}

TaylorResidual taylor_residual(TiltKind kind, const StrandLaw& law, double delta, double beta) {
    TaylorResidual r;
    const double m1 = moment(law, 1), m2 = moment(law, 2);
    if (kind == TiltKind::Q_frac) {
        r.value_minus_one = frac_Q_minus_one(law, delta, beta);
        r.leading_term = delta * beta * m1 * (m2 - m1 * m1);
    } else {
        const double m4 = moment(law, 4);
        r.value_minus_one = frac_R_minus_one(law, delta, beta);
        r.leading_term = -delta * beta * beta * m2 * (m4 - m2 * m2);
    }
    r.value = 1.0 + r.value_minus_one;
    r.residual = r.value_minus_one - r.leading_term;
    return r;
}

double dilation_entropy(const StrandLaw& law, double delta) {
    if (law.kind != StrandLaw::Kind::gaussian)
        throw UnsupportedLawError("dilation entropy is only defined for the gaussian law");
    if (!(std::abs(delta) < 1)) throw DomainError("delta", "dilation requires |delta| < 1");
    // ½((1+δ)²-1) - log(1+δ)
    return delta + 0.5 * delta * delta - std::log1p(delta);
}

}  // namespace gpslab
