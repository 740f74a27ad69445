#include "gpslab/replica.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

#include "gpslab/errors.hpp"
#include "gpslab/parallel.hpp"

namespace gpslab {

std::size_t ChainDecomposition::chained_points() const {
    std::size_t n = 0;
    for (const auto& c : chains) n += c.size();
    return n;
}

namespace {

struct Side {
    std::unordered_map<int, Point> row, col;
    std::vector<Point> pts;
    void add(Point p) {
        pts.push_back(p);
        row[p.i] = p;
        col[p.j] = p;
    }
    // partners of p (from the other trajectory) that share a row or a column
    void partners(Point p, Point out[2], int& n) const {
        n = 0;
        if (auto it = row.find(p.i); it != row.end()) out[n++] = it->second;
        if (auto it = col.find(p.j); it != col.end()) out[n++] = it->second;
    }
};

}  // namespace

ChainDecomposition decompose(const Trajectory& t1, const Trajectory& t2, Box box) {
    const Trajectory a = restrict_to_box(t1, box), b = restrict_to_box(t2, box);
    ChainDecomposition d;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d.doubles));

    Side A, B;  // τ\τ' and τ'\τ
    for (auto p : a)
        if (!std::binary_search(d.doubles.begin(), d.doubles.end(), p)) A.add(p);
    for (auto p : b)
        if (!std::binary_search(d.doubles.begin(), d.doubles.end(), p)) B.add(p);

    // lexical order over all single points; side 0 = τ, 1 = τ'
    std::vector<std::pair<Point, int>> all;
    for (auto p : A.pts) all.push_back({p, 0});
    for (auto p : B.pts) all.push_back({p, 1});
    std::sort(all.begin(), all.end());

    std::map<std::pair<Point, int>, bool> taken;
    auto other = [&](int side) -> const Side& { return side == 0 ? B : A; };

    for (const auto& [p, side] : all) {
        Point nb[2];
        int n = 0;
        other(side).partners(p, nb, n);
        if (n == 0) {
            d.isolated.push_back(p);
            continue;
        }
        if (taken.count({p, side})) continue;
        std::vector<Point> chain{p};
        taken[{p, side}] = true;
        Point cur = p;
        int cs = side;
        for (;;) {
            other(cs).partners(cur, nb, n);
            int free_n = 0;
            Point next{};
            for (int k = 0; k < n; ++k)
                if (!taken.count({nb[k], 1 - cs})) {
                    next = nb[k];
                    ++free_n;
                }
            if (free_n == 0) break;
            if (free_n > 1) throw Error("decompose: chain start is not an end point");
            cs = 1 - cs;
            cur = next;
            taken[{cur, cs}] = true;
            chain.push_back(cur);
        }
        d.chains.push_back(std::move(chain));
    }
    std::sort(d.isolated.begin(), d.isolated.end());
    return d;
}

std::vector<std::string> check_decomposition(const ChainDecomposition& d, const Trajectory& t1,
                                             const Trajectory& t2, Box box) {
    std::vector<std::string> bad;
    const Trajectory a = restrict_to_box(t1, box), b = restrict_to_box(t2, box);
    auto in = [](const Trajectory& t, Point p) { return std::binary_search(t.begin(), t.end(), p); };

    // disjoint cover of (τ ∪ τ') ∩ box
    std::vector<Point> parts = d.doubles;
    parts.insert(parts.end(), d.isolated.begin(), d.isolated.end());
    for (const auto& c : d.chains) parts.insert(parts.end(), c.begin(), c.end());
    std::sort(parts.begin(), parts.end());
    if (std::adjacent_find(parts.begin(), parts.end()) != parts.end()) bad.push_back("parts overlap");
    std::vector<Point> uni;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
    if (parts != uni) bad.push_back("parts do not cover the union");

    for (auto p : d.doubles)
        if (!(in(a, p) && in(b, p))) bad.push_back("double point not in both trajectories");

    std::map<Point, int> chain_of;
    for (std::size_t m = 0; m < d.chains.size(); ++m) {
        const auto& c = d.chains[m];
        if (c.size() < 2) bad.push_back("chain shorter than 2");
        for (std::size_t k = 0; k < c.size(); ++k) {
            chain_of[c[k]] = static_cast<int>(m);
            if (in(a, c[k]) == in(b, c[k])) bad.push_back("chain point is not in exactly one trajectory");
            if (k > 0) {
                const bool row = c[k].i == c[k - 1].i, col = c[k].j == c[k - 1].j;
                if (row == col) bad.push_back("consecutive chain points must share exactly one coordinate");
                if (in(a, c[k]) == in(a, c[k - 1])) bad.push_back("chain does not alternate");
            }
        }
    }
    // aligned points of τ∪τ' lie in one chain
    for (std::size_t x = 0; x < uni.size(); ++x)
        for (std::size_t y = x + 1; y < uni.size(); ++y) {
            if (!aligned(uni[x], uni[y])) continue;
            auto ix = chain_of.find(uni[x]), iy = chain_of.find(uni[y]);
            if (ix == chain_of.end() || iy == chain_of.end() || ix->second != iy->second)
                bad.push_back("aligned points in different parts");
        }

    const int p1 = projection_overlap(a, b, 1), p2 = projection_overlap(a, b, 2);
    const double mid = static_cast<double>(d.doubles.size() + d.chained_points());
    if (!(0.5 * (p1 + p2) <= mid && mid <= 2.0 * (p1 + p2))) bad.push_back("count inequality fails");
    return bad;
}

std::vector<double> xi_sequence(double beta, int len) {
    if (!(beta >= 0 && beta <= 0.5)) throw DomainError("beta", "xi recursion needs 0 <= beta <= 1/2");
    std::vector<double> xi;
    double x = 1.0;
    for (int k = 0; k < len; ++k) {
        x = 1.0 / std::sqrt(1.0 - beta * beta * x * x);
        xi.push_back(x);
    }
    return xi;
}

double xi_limit(double beta) {
    if (!(beta > 0 && beta <= 0.5)) throw DomainError("beta", "xi limit needs 0 < beta <= 1/2");
    return std::sqrt(1.0 - std::sqrt(1.0 - 4 * beta * beta)) / (beta * std::sqrt(2.0));
}

ChainWeights::ChainWeights(const StrandLaw& slaw, double beta, int max_len) {
    if (max_len < 0) max_len = 0;
    w_.assign(max_len + 1, 1.0);
    switch (slaw.kind) {
    case StrandLaw::Kind::rademacher:
        break;  // exactly one
    case StrandLaw::Kind::gaussian: {
        const double b = beta * slaw.sigma * slaw.sigma;
        const auto xi = xi_sequence(b, max_len);
        double lp = 0.0;
        for (int l = 1; l <= max_len; ++l) {
            lp += std::log(xi[l - 1]);
            w_[l] = std::exp(lp - l * std::log(xi[0]));
        }
        break;
    }
    case StrandLaw::Kind::discrete: {
        const double lam = log_mgf(slaw, beta);
        const auto& v = slaw.values;
        const auto& p = slaw.probs;
        const std::size_t s = v.size();
        // v_{k+1}(x) = sum_y p(y) e^{βxy - λ} v_k(y), started at v_0 = 1
        std::vector<double> cur(s, 1.0), nxt(s);
        for (int l = 1; l <= max_len; ++l) {
            for (std::size_t a = 0; a < s; ++a) {
                long double acc = 0;
                for (std::size_t b = 0; b < s; ++b) acc += p[b] * std::exp(beta * v[a] * v[b] - lam) * cur[b];
                nxt[a] = static_cast<double>(acc);
            }
            cur.swap(nxt);
            long double tot = 0;
            for (std::size_t a = 0; a < s; ++a) tot += p[a] * cur[a];
            w_[l] = static_cast<double>(tot);
        }
        break;
    }
    }
}

double ChainWeights::operator()(int len) const {
    if (len < 0 || len >= static_cast<int>(w_.size())) throw RangeError("chain length outside the table");
    return w_[len];
}

double chain_weight(const StrandLaw& slaw, double beta, int len) {
    if (len < 1) throw RangeError("chain length must be >= 1");
    log_mgf(slaw, beta);  // region check
    return ChainWeights(slaw, beta, len)(len);
}

double pair_second_moment_weight(const ChainDecomposition& d, double gap, const ChainWeights& cw) {
    double lw = gap * static_cast<double>(d.doubles.size());
    for (const auto& c : d.chains) lw += std::log(cw(static_cast<int>(c.size())));
    return std::exp(lw);
}

double pair_second_moment_weight(const ChainDecomposition& d, const StrandLaw& slaw, double beta) {
    int longest = 0;
    for (const auto& c : d.chains) longest = std::max(longest, static_cast<int>(c.size()));
    return pair_second_moment_weight(d, replica_gap(slaw, beta), ChainWeights(slaw, beta, longest));
}

std::vector<PairSample> replica_samples(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, Box box,
                                        long samples, std::uint64_t seed) {
    if (samples < 1) throw RangeError("samples must be >= 1");
    rlaw.check_box(box);
    const double gap = replica_gap(slaw, beta);
    const ChainWeights cw(slaw, beta, box.n1 + box.n2);
    return sample_map<PairSample>(samples, [&](std::uint64_t k) {
        // one stream per replica, so a smaller box sees a prefix of the same pair
        Philox ra = sample_rng(seed, 2 * k), rb = sample_rng(seed, 2 * k + 1);
        const Trajectory a = sample_trajectory(rlaw, ra, box, Mode::free);
        const Trajectory b = sample_trajectory(rlaw, rb, box, Mode::free);
        const ChainDecomposition d = decompose(a, b, box);
        PairSample s;
        s.doubles = static_cast<int>(d.doubles.size());
        s.isolated = static_cast<int>(d.isolated.size());
        s.chained = static_cast<int>(d.chained_points());
        s.chains = static_cast<int>(d.chains.size());
        s.p1 = projection_overlap(a, b, 1);
        s.p2 = projection_overlap(a, b, 2);
        s.weight = pair_second_moment_weight(d, gap, cw);
        s.cs_bound = std::exp(1.5 * gap * (s.p1 + s.p2));
        s.cs_single = std::exp(3.0 * gap * s.p1);
        return s;
    });
}

Estimate second_moment_mc(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, Box box, long samples,
                          std::uint64_t seed) {
    std::vector<double> w;
    for (const auto& s : replica_samples(rlaw, slaw, beta, box, samples, seed)) w.push_back(s.weight);
    return summarize(w, box);
}

CsBound second_moment_cs_bound(const RenewalLaw& rlaw, const StrandLaw& slaw, double beta, Box box, long samples,
                               std::uint64_t seed) {
    std::vector<double> f, g;
    for (const auto& s : replica_samples(rlaw, slaw, beta, box, samples, seed)) {
        f.push_back(s.cs_bound);
        g.push_back(s.cs_single);
    }
    return {summarize(f, box), summarize(g, box)};
}

}  // namespace gpslab

namespace gpslab {

std::vector<Estimate> chain_weight_mc(const StrandLaw& slaw, double beta, int max_len, long samples,
                                      std::uint64_t seed, double proposal_sd) {
    if (max_len < 1) throw DomainError("max_len", "need a chain length of at least 1");
    if (samples < 2) throw DomainError("samples", "need at least two samples");
    const double lam = log_mgf(slaw, beta);
    const bool gauss = slaw.kind == StrandLaw::Kind::gaussian;
    if (gauss && !(proposal_sd >= 1.0)) throw DomainError("proposal_sd", "proposal must be at least as wide");
    const double sd = gauss ? proposal_sd * slaw.sigma : 0.0;
    const double shrink = gauss ? 0.5 * (1.0 - 1.0 / (proposal_sd * proposal_sd)) / (slaw.sigma * slaw.sigma) : 0.0;
    const double log_s = std::log(proposal_sd);
    const long block = 4096;
    const long nblocks = (samples + block - 1) / block;
    struct Acc {
        std::vector<long double> s, ss;
    };
    auto parts = sample_map<Acc>(nblocks, [&](std::uint64_t b) {
        Philox rng = sample_rng(seed, b);
        std::normal_distribution<double> nd(0.0, sd > 0 ? sd : 1.0);
        Acc a{std::vector<long double>(max_len, 0.0L), std::vector<long double>(max_len, 0.0L)};
        const long lo = static_cast<long>(b) * block, hi = std::min(samples, lo + block);
        std::vector<double> x(max_len + 1);
        for (long k = lo; k < hi; ++k) {
            double lw = 0.0;  // log importance weight of the coordinates used so far
            for (int i = 0; i <= max_len; ++i) {
                if (gauss) {
                    x[i] = nd(rng);
                } else {
                    x[i] = sample_strand(slaw, 1, rng)[0];
                }
            }
            if (gauss) lw += log_s - shrink * x[0] * x[0];
            double le = 0.0;
            for (int l = 1; l <= max_len; ++l) {
                if (gauss) lw += log_s - shrink * x[l] * x[l];
                le += beta * x[l - 1] * x[l] - lam;
                const double v = std::exp(le + lw);
                a.s[l - 1] += v;
                a.ss[l - 1] += static_cast<long double>(v) * v;
            }
        }
        return a;
    });
    std::vector<Estimate> out(max_len);
    for (int l = 0; l < max_len; ++l) {
        long double s = 0, ss = 0;
        for (const auto& a : parts) s += a.s[l], ss += a.ss[l];
        const long double m = s / samples;
        const long double var = std::max(0.0L, (ss / samples - m * m)) * samples / (samples - 1);
        out[l] = {static_cast<double>(m), static_cast<double>(std::sqrt(var / samples)), samples, {}};
    }
    return out;
}

}  // namespace gpslab
