#include "gpslab/oracle.hpp"

#include <cmath>

#include "gpslab/errors.hpp"
#include "gpslab/replica.hpp"

namespace gpslab::oracle {

namespace {

void check_cap(Box box) {
    if (box.n1 < 1 || box.n2 < 1) throw RangeError("oracle: box sides must be >= 1");
    if (static_cast<long>(box.n1) * box.n2 > 36) throw EnumerationCapError("oracle: n1*n2 exceeds 36");
}

void extend(Point last, Box box, Trajectory& cur, std::vector<Trajectory>& out, Mode mode) {
    for (int i = last.i + 1; i <= box.n1; ++i)
        for (int j = last.j + 1; j <= box.n2; ++j) {
            cur.push_back({i, j});
            if (mode == Mode::free || (i == box.n1 && j == box.n2)) out.push_back(cur);
            extend({i, j}, box, cur, out, mode);
            cur.pop_back();
        }
}

}  // namespace

PathEnumeration enumerate_trajectories(Box box, Mode mode) {
    check_cap(box);
    PathEnumeration e;
    e.box = box;
    e.mode = mode;
    if (mode == Mode::free) e.paths.push_back({});
    Trajectory cur;
    extend({0, 0}, box, cur, e.paths, mode);
    return e;
}

long long constrained_path_count(Box box) {
    std::vector<std::vector<long long>> c(box.n1 + 1, std::vector<long long>(box.n2 + 1, 0));
    for (int i = 1; i <= box.n1; ++i)
        for (int j = 1; j <= box.n2; ++j) {
            long long s = 1;
            for (int a = 1; a < i; ++a)
                for (int b = 1; b < j; ++b) s += c[a][b];
            c[i][j] = s;
        }
    return c[box.n1][box.n2];
}

long double path_probability(const RenewalLaw& law, const Trajectory& p, Box box, Mode mode) {
    long double pr = 1;
    Point prev{0, 0};
    for (auto q : p) {
        pr *= law.K(q.i - prev.i + q.j - prev.j);
        prev = q;
    }
    if (mode == Mode::free) pr *= law.exit_mass(box.n1 - prev.i, box.n2 - prev.j);
    return pr;
}

long double exact_partition_brute(const RenewalLaw& law, const LogWeights& w, Mode mode) {
    const auto e = enumerate_trajectories(w.box, mode);
    long double z = 0;
    for (const auto& p : e.paths) {
        long double lw = 0;
        for (auto q : p) lw += w(q.i, q.j);
        z += path_probability(law, p, w.box, mode) * std::exp(lw);
    }
    return z;
}

long double exact_partition_brute(const RenewalLaw& law, const StrandSample& s, const StrandLaw& slaw, double beta,
                                  double h, Box box, Mode mode) {
    check_cap(box);
    const long double lam = log_mgf(slaw, beta);
    LogWeights w;
    w.box = box;
    for (int i = 1; i <= box.n1; ++i)
        for (int j = 1; j <= box.n2; ++j)
            w.w.push_back(static_cast<double>(static_cast<long double>(beta) * s.hat[i - 1] * s.bar[j - 1] - lam + h));
    return exact_partition_brute(law, w, mode);
}

void enumerate_disorder_tilted(const StrandLaw& slaw, Box box, const std::function<double(double)>& tilt,
                               const std::function<void(const StrandSample&, long double)>& f) {
    const StrandLaw d = as_discrete(slaw);
    const std::size_t s = d.values.size();
    const int n = box.n1 + box.n2;
    if (std::pow(static_cast<double>(s), n) > 1e7) throw EnumerationCapError("oracle: too many disorder configurations");
    std::vector<long double> q(s);
    long double norm = 0;
    for (std::size_t k = 0; k < s; ++k) norm += q[k] = d.probs[k] * std::exp(static_cast<long double>(tilt(d.values[k])));
    for (auto& v : q) v /= norm;

    std::vector<std::size_t> idx(n, 0);
    StrandSample smp;
    smp.hat.resize(box.n1);
    smp.bar.resize(box.n2);
    for (;;) {
        long double p = 1;
        for (int k = 0; k < n; ++k) {
            const double v = d.values[idx[k]];
            (k < box.n1 ? smp.hat[k] : smp.bar[k - box.n1]) = v;
            p *= q[idx[k]];
        }
        if (p > 0) f(smp, p);
        int k = 0;
        while (k < n && ++idx[k] == s) idx[k++] = 0;
        if (k == n) break;
    }
}

void enumerate_disorder(const StrandLaw& slaw, Box box,
                        const std::function<void(const StrandSample&, long double)>& f) {
    enumerate_disorder_tilted(slaw, box, [](double) { return 0.0; }, f);
}

namespace {

// paths with probabilities, reused across disorder configurations
struct WeightedPaths {
    std::vector<Trajectory> paths;
    std::vector<long double> prob;
};

WeightedPaths weighted(const RenewalLaw& law, Box box, Mode mode) {
    WeightedPaths wp;
    wp.paths = enumerate_trajectories(box, mode).paths;
    for (const auto& p : wp.paths) wp.prob.push_back(path_probability(law, p, box, mode));
    return wp;
}

long double z_of(const WeightedPaths& wp, const StrandSample& s, long double beta, long double shift) {
    long double z = 0;
    for (std::size_t k = 0; k < wp.paths.size(); ++k) {
        long double lw = 0;
        for (auto q : wp.paths[k]) lw += beta * s.hat[q.i - 1] * s.bar[q.j - 1] + shift;
        z += wp.prob[k] * std::exp(lw);
    }
    return z;
}

}  // namespace

long double exact_second_moment_brute(const RenewalLaw& law, const StrandLaw& slaw, double beta, Box box) {
    check_cap(box);
    const auto wp = weighted(law, box, Mode::free);
    const long double lam = log_mgf(slaw, beta);
    long double m = 0;
    enumerate_disorder(slaw, box, [&](const StrandSample& s, long double p) {
        const long double z = z_of(wp, s, beta, -lam);
        m += p * z * z;
    });
    return m;
}

long double exact_intersection_moment(const RenewalLaw& law, const StrandLaw& slaw, double beta, Box box) {
    check_cap(box);
    const auto wp = weighted(law, box, Mode::free);
    const long double gap = static_cast<long double>(log_mgf(slaw, 2 * beta)) - 2.0L * log_mgf(slaw, beta);
    long double m = 0;
    for (std::size_t x = 0; x < wp.paths.size(); ++x)
        for (std::size_t y = 0; y < wp.paths.size(); ++y) {
            int nu = 0;
            for (auto p : wp.paths[x])
                for (auto q : wp.paths[y]) nu += p == q;
            m += wp.prob[x] * wp.prob[y] * std::exp(gap * nu);
        }
    return m;
}

long double exact_second_moment_factorized(const RenewalLaw& law, const StrandLaw& slaw, double beta, Box box) {
    check_cap(box);
    const auto wp = weighted(law, box, Mode::free);
    long double m = 0;
    for (std::size_t x = 0; x < wp.paths.size(); ++x)
        for (std::size_t y = 0; y < wp.paths.size(); ++y)
            m += wp.prob[x] * wp.prob[y] *
                 pair_second_moment_weight(decompose(wp.paths[x], wp.paths[y], box), slaw, beta);
    return m;
}

long double exact_annealed_brute(const RenewalLaw& law, const StrandLaw& slaw, double beta, double h, Box box) {
    check_cap(box);
    const auto wp = weighted(law, box, Mode::constrained);
    const long double shift = static_cast<long double>(h) - log_mgf(slaw, beta);
    long double m = 0;
    enumerate_disorder(slaw, box, [&](const StrandSample& s, long double p) { m += p * z_of(wp, s, beta, shift); });
    return m;
}

long double exact_mean_log_partition(const RenewalLaw& law, const StrandLaw& slaw, double beta, double h, Box box,
                                     Mode mode) {
    check_cap(box);
    const auto wp = weighted(law, box, mode);
    const long double shift = static_cast<long double>(h) - log_mgf(slaw, beta);
    long double m = 0;
    enumerate_disorder(slaw, box,
                       [&](const StrandSample& s, long double p) { m += p * std::log(z_of(wp, s, beta, shift)); });
    return m;
}

long double exact_fractional_moment(const RenewalLaw& law, const StrandLaw& slaw, double beta, double h, double eta,
                                    Box box) {
    check_cap(box);
    const auto wp = weighted(law, box, Mode::constrained);
    const long double shift = static_cast<long double>(h) - log_mgf(slaw, beta);
    long double m = 0;
    enumerate_disorder(slaw, box, [&](const StrandSample& s, long double p) {
        m += p * std::pow(z_of(wp, s, beta, shift), static_cast<long double>(eta));
    });
    return m;
}

long double exact_tilted_brute(const RenewalLaw& law, const StrandLaw& slaw, double delta, double beta, double h,
                               Box box, bool quadratic) {
    check_cap(box);
    const auto wp = weighted(law, box, Mode::constrained);
    const long double shift = static_cast<long double>(h) - log_mgf(slaw, beta);
    auto tilt = [=](double x) { return quadratic ? -delta * x * x : delta * x; };
    long double m = 0;
    enumerate_disorder_tilted(slaw, box, tilt,
                              [&](const StrandSample& s, long double p) { m += p * z_of(wp, s, beta, shift); });
    return m;
}

}  // namespace gpslab::oracle
