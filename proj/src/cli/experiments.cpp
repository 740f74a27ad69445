#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "gpslab/analysis.hpp"
#include "gpslab/cli.hpp"
#include "gpslab/replica.hpp"

namespace gpslab::cli {

using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}
std::string num(long v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "1" : "0"; }

std::vector<double> reals(const Config& c, const char* k) { return c.params.at(k).get<std::vector<double>>(); }
std::vector<int> ints(const Config& c, const char* k) { return c.params.at(k).get<std::vector<int>>(); }
double real(const Config& c, const char* k) { return c.params.at(k).get<double>(); }
long integer(const Config& c, const char* k) { return c.params.at(k).get<long>(); }
std::string str(const Config& c, const char* k) { return c.params.at(k).get<std::string>(); }
Mode mode_of(const Config& c) { return str(c, "mode") == "free" ? Mode::free : Mode::constrained; }

RenewalLaw make_law(const Config& c) { return RenewalLaw(c.alpha, c.L, c.horizon, c.tail_tol); }

// the seed of one (row-group) computation; same across boxes so boxes see matched disorder
std::uint64_t group_seed(const Config& c, std::uint64_t group) { return derive_seed(c.master_seed, 0x9e37ULL + group); }

void need_samples(const Config& c) {
    if (c.params.contains("samples") && integer(c, "samples") < 1) throw DomainError("samples", "samples must be >= 1");
}

Table free_energy_scan(const Config& c) {
    const RenewalLaw law = make_law(c);
    Table t;
    t.columns = {"beta", "h", "n", "mode", "samples", "F", "std_err", "best"};
    std::uint64_t g = 0;
    for (double beta : reals(c, "betas"))
        for (double h : reals(c, "hs")) {
            const auto f = finite_size_free_energy(law, c.slaw, beta, h, ints(c, "boxes"), integer(c, "samples"),
                                                   group_seed(c, g++), mode_of(c));
            for (const auto& e : f.per_box)
                t.rows.push_back({num(beta), num(h), num(e.box.n1), str(c, "mode"), num(e.samples), num(e.value),
                                  num(e.std_err), flag(e.box == f.best.box)});
        }
    return t;
}

Table critical_point(const Config& c) {
    const RenewalLaw law = make_law(c);
    CriticalOptions o;
    o.samples = integer(c, "samples");
    o.n_se = real(c, "n_se");
    o.boundary_coef = real(c, "boundary_coef");
    o.tol = real(c, "tol");
    o.mode = mode_of(c);
    Table t;
    t.columns = {"beta", "lambda", "h_c", "lo", "hi", "evaluations", "samples"};
    std::uint64_t g = 0;
    for (double beta : reals(c, "betas")) {
        const auto r = critical_point_bisect(law, c.slaw, beta, ints(c, "boxes"), o, group_seed(c, g++));
        t.rows.push_back({num(beta), num(beta == 0 ? 0.0 : log_mgf(c.slaw, beta)), num(r.h_c), num(r.lo), num(r.hi),
                          num(r.evaluations), num(beta == 0 ? 1L : o.samples)});
    }
    return t;
}

Table exponent_fit(const Config& c) {
    const RenewalLaw law = make_law(c);
    const auto f = homogeneous_exponent_fit(law, reals(c, "hs"), static_cast<int>(integer(c, "box_cap")));
    Table t;
    t.columns = {"h", "F", "F_finite", "box_cap", "exponent", "r2"};
    for (std::size_t i = 0; i < f.h.size(); ++i)
        t.rows.push_back({num(f.h[i]), num(f.F[i]), f.F_finite.empty() ? "nan" : num(f.F_finite[i]), num(f.box_cap),
                          num(f.exponent), num(f.r2)});
    t.summary = {{"exponent", f.exponent}, {"r2", f.r2}, {"consistent", f.consistent},
                 {"expected", 1.0 / std::min(1.0, c.alpha)}};
    t.ok = f.consistent;
    return t;
}

Table second_moment_scan(const Config& c) {
    const RenewalLaw law = make_law(c);
    Table t;
    t.columns = {"beta", "gap", "n", "samples", "m2", "std_err", "cs_full", "cs_full_se", "cs_single", "cs_single_se",
                 "dominated_frac"};
    std::uint64_t g = 0;
    for (double beta : reals(c, "betas")) {
        const std::uint64_t seed = group_seed(c, g++);
        for (int n : ints(c, "boxes")) {
            const auto ps = replica_samples(law, c.slaw, beta, {n, n}, integer(c, "samples"), seed);
            std::vector<double> w, f, s;
            long dom = 0;
            for (const auto& p : ps) {
                w.push_back(p.weight);
                f.push_back(p.cs_bound);
                s.push_back(p.cs_single);
                dom += p.cs_bound >= p.weight * (1 - 1e-12);
            }
            const auto ew = summarize(w), ef = summarize(f), es = summarize(s);
            t.rows.push_back({num(beta), num(replica_gap(c.slaw, beta)), num(n), num(ew.samples), num(ew.value),
                              num(ew.std_err), num(ef.value), num(ef.std_err), num(es.value), num(es.std_err),
                              num(static_cast<double>(dom) / ps.size())});
        }
    }
    return t;
}

Table n_beta(const Config& c) {
    const RenewalLaw law = make_law(c);
    Table t;
    t.columns = {"beta", "C", "n", "samples", "m2", "std_err", "n_beta", "unbounded"};
    std::uint64_t g = 0;
    for (double beta : reals(c, "betas")) {
        const std::uint64_t seed = group_seed(c, g++);
        for (double C : reals(c, "C")) {
            const auto r = n_beta_estimate(law, c.slaw, beta, C, ints(c, "boxes"), integer(c, "samples"), seed);
            for (const auto& e : r.per_box)
                t.rows.push_back({num(beta), num(C), num(e.box.n1), num(e.samples), num(e.value), num(e.std_err),
                                  num(r.n_beta), flag(r.unbounded)});
        }
    }
    return t;
}

Table fractional_moments(const Config& c) {
    const RenewalLaw law = make_law(c);
    const double eta = real(c, "eta");
    Table t;
    t.columns = {"beta", "h", "eta", "n", "samples", "A", "std_err", "jensen"};
    std::uint64_t g = 0;
    for (double beta : reals(c, "betas"))
        for (double h : reals(c, "hs")) {
            const std::uint64_t seed = group_seed(c, g++);
            for (int n : ints(c, "boxes")) {
                const auto e = fractional_moment(law, c.slaw, beta, h, eta, {n, n}, integer(c, "samples"), seed);
                const double j = std::exp(eta * homogeneous_partition(law, h, {n, n}, Mode::constrained).log_value);
                t.rows.push_back({num(beta), num(h), num(eta), num(n), num(e.samples), num(e.value), num(e.std_err),
                                  num(j)});
            }
        }
    return t;
}

Table coarse_grain(const Config& c) {
    const RenewalLaw law = make_law(c);
    const double eta = real(c, "eta");
    const int k = static_cast<int>(integer(c, "k"));
    const bool mc = str(c, "table") == "mc";
    Table t;
    t.columns = {"beta", "h", "eta", "k", "table", "c_const", "rho1", "rho2", "rho3", "sum", "triggered", "radius"};
    std::uint64_t g = 0;
    for (double beta : reals(c, "betas"))
        for (double h : reals(c, "hs")) {
            const auto A = mc ? frac_moment_table(law, c.slaw, beta, h, eta, k, integer(c, "samples"), group_seed(c, g++))
                              : jensen_table(law, h, eta, k);
            const double cc = real(c, "c_const") > 0 ? real(c, "c_const") : coarse_grain_constant(c.slaw, beta, h, eta);
            const auto r = coarse_grain_rho(law, k, eta, A, cc, integer(c, "radius"));
            t.rows.push_back({num(beta), num(h), num(eta), num(k), str(c, "table"), num(cc), num(r.rho1), num(r.rho2),
                              num(r.rho3), num(r.sum), flag(r.triggered), num(r.radius)});
        }
    return t;
}

Table chain_weights(const Config& c) {
    const int L = static_cast<int>(integer(c, "max_len"));
    const long S = integer(c, "samples");
    Table t;
    t.columns = {"beta", "len", "weight", "xi", "mc", "mc_se", "samples"};
    std::uint64_t g = 0;
    for (double beta : reals(c, "betas")) {
        const ChainWeights cw(c.slaw, beta, L);
        std::vector<double> xi;
        if (c.slaw.kind == StrandLaw::Kind::gaussian) xi = xi_sequence(beta * c.slaw.sigma * c.slaw.sigma, L);
        std::vector<Estimate> mc;
        if (S > 0) mc = chain_weight_mc(c.slaw, beta, L, S, group_seed(c, g++), real(c, "proposal_sd"));
        for (int l = 1; l <= L; ++l)
            t.rows.push_back({num(beta), num(l), num(cw(l)), xi.empty() ? "nan" : num(xi[l - 1]),
                              mc.empty() ? "nan" : num(mc[l - 1].value), mc.empty() ? "nan" : num(mc[l - 1].std_err),
                              num(S)});
    }
    return t;
}

Table intersections(const Config& c) {
    const RenewalLaw law = make_law(c);
    Table t;
    t.columns = {"n", "samples", "counter", "mean", "std_err", "variance", "geometric_q", "violations"};
    const std::uint64_t seed = group_seed(c, 0);
    for (int n : ints(c, "boxes")) {
        const auto s = intersection_stats(law, {n, n}, integer(c, "samples"), seed);
        const std::pair<const char*, const CounterSummary*> rows[] = {
            {"bivariate", &s.bivariate}, {"first", &s.first}, {"second", &s.second}};
        for (const auto& [name, cs] : rows)
            t.rows.push_back({num(n), num(s.samples), name, num(cs->mean.value), num(cs->mean.std_err),
                              num(cs->variance), num(cs->geometric_q), num(s.violations)});
        if (s.violations) t.ok = false;
    }
    return t;
}

Table tilt_checks(const Config& c) {
    const std::string check = str(c, "check");
    Table t;
    if (check == "taylor") {
        t.columns = {"kind", "delta", "beta", "frac_minus_one", "leading", "residual"};
        for (auto kind : {TiltKind::Q_frac, TiltKind::R_frac})
            for (double d : reals(c, "deltas"))
                for (double b : reals(c, "betas")) {
                    const auto r = taylor_residual(kind, c.slaw, d, b);
                    t.rows.push_back({kind == TiltKind::Q_frac ? "linear" : "quadratic", num(d), num(b),
                                      num(r.value_minus_one), num(r.leading_term), num(r.residual)});
                }
    } else if (check == "annealed") {
        const RenewalLaw law = make_law(c);
        t.columns = {"kind", "delta", "beta", "h", "n", "log_tilted", "log_untilted"};
        for (auto kind : {TiltMode::linear, TiltMode::quadratic})
            for (double d : reals(c, "deltas"))
                for (double b : reals(c, "betas"))
                    for (double h : reals(c, "hs"))
                        for (int n : ints(c, "boxes"))
                            t.rows.push_back({kind == TiltMode::linear ? "linear" : "quadratic", num(d), num(b), num(h),
                                              num(n), num(tilted_annealed(law, c.slaw, d, b, h, {n, n}, kind)),
                                              num(homogeneous_partition(law, h, {n, n}, Mode::constrained).log_value)});
    } else {
        const RenewalLaw law = make_law(c);
        t.columns = {"n", "delta", "samples", "qbar", "std_err", "ell", "half_width", "max_row", "max_abs_sigma",
                     "sigma_within_2ell"};
        std::uint64_t g = 0;
        for (int n : ints(c, "boxes"))
            for (double d : reals(c, "deltas")) {
                const auto r = diagonal_tilt(law, c.slaw, {n, n}, d, integer(c, "samples"), group_seed(c, g++),
                                             real(c, "eps"), real(c, "c_wide"));
                t.rows.push_back({num(n), num(d), num(r.qbar.samples), num(r.qbar.value), num(r.qbar.std_err),
                                  num(r.ell), num(r.half_width), num(r.max_row), num(r.max_abs_sigma),
                                  flag(r.sigma_within_2ell)});
            }
    }
    return t;
}

Table zhom_check(const Config& c) {
    const RenewalLaw law = make_law(c);
    Table t;
    t.columns = {"u", "n", "lhs", "t1", "t2", "c_fit", "rhs", "holds"};
    for (double u : reals(c, "us"))
        for (int n : ints(c, "boxes")) {
            const auto r = zhom_negative_check(law, u, {n, n}, real(c, "alpha_minus"), real(c, "c2"));
            t.rows.push_back({num(u), num(n), num(r.lhs), num(r.t1), num(r.t2), num(r.c_fit), num(r.rhs), flag(r.holds)});
        }
    return t;
}

Table smoothing(const Config& c) {
    const RenewalLaw law = make_law(c);
    const double beta = real(c, "beta");
    const auto s = smoothing_curve(law, c.slaw, beta, reals(c, "ts"), ints(c, "boxes"), integer(c, "samples"),
                                   group_seed(c, 0));
    Table t;
    t.columns = {"beta", "h_c", "t", "n_best", "F", "std_err", "local_exponent", "exploratory"};
    for (std::size_t i = 0; i < s.t.size(); ++i)
        t.rows.push_back({num(beta), num(s.h_c), num(s.t[i]), num(s.F[i].box.n1), num(s.F[i].value),
                          num(s.F[i].std_err), num(s.local_exponent), "1"});
    t.summary = {{"exploratory", true},
                 {"note", "finite-size curve near the estimated critical point; no asymptotic claim"}};
    return t;
}

Table oracle_verify(const Config&) {
    Table t;
    t.columns = {"case", "ok", "error", "tolerance"};
    for (const auto& v : verify_suite()) {
        t.rows.push_back({v.name, flag(v.ok), num(v.error), num(v.tolerance)});
        t.ok = t.ok && v.ok;
    }
    return t;
}

const std::map<std::string, std::function<Table(const Config&)>>& runners() {
    static const std::map<std::string, std::function<Table(const Config&)>> m = {
        {"free-energy-scan", free_energy_scan}, {"critical-point", critical_point},
        {"exponent-fit", exponent_fit},         {"second-moment-scan", second_moment_scan},
        {"n-beta", n_beta},                     {"fractional-moments", fractional_moments},
        {"coarse-grain", coarse_grain},         {"chain-weights", chain_weights},
        {"intersections", intersections},       {"tilt-checks", tilt_checks},
        {"zhom-check", zhom_check},             {"smoothing-curve", smoothing},
        {"oracle-verify", oracle_verify},
    };
    return m;
}

}  // namespace

void precheck(const Config& c) {
    if (c.experiment == "oracle-verify") return;
    const RenewalLaw law = make_law(c);
    need_samples(c);
    const bool pairs = c.experiment == "second-moment-scan" || c.experiment == "n-beta";
    auto check_beta = [&](double b) {
        if (b < 0) throw DomainError("beta", "beta must be nonnegative");
        if (b > 0) log_mgf(c.slaw, b);
        if (pairs && b > 0) {
            try {
                log_mgf(c.slaw, 2 * b);
            } catch (const DomainError&) {
                throw DomainError("beta", "second moment diverges: need 2 beta < beta0 = " + std::to_string(c.slaw.beta0()));
            }
        }
    };
    if (c.params.contains("betas") && c.experiment != "tilt-checks")
        for (double b : reals(c, "betas")) check_beta(b);
    if (c.params.contains("beta")) check_beta(real(c, "beta"));
    if (c.params.contains("boxes"))
        for (int n : ints(c, "boxes")) law.check_box({n, n});
    if (c.params.contains("eta")) {
        const double e = real(c, "eta");
        if (!(e > 0 && e < 1)) throw DomainError("eta", "eta must lie in (0,1)");
    }
    if (c.experiment == "coarse-grain" && !((2 + c.alpha) * real(c, "eta") > 2))
        throw DomainError("eta", "need (2+alpha) eta > 2");
    if (c.experiment == "coarse-grain") law.check_box({static_cast<int>(integer(c, "k")), static_cast<int>(integer(c, "k"))});
    if (c.experiment == "exponent-fit" && integer(c, "box_cap") > 0)
        law.check_box({static_cast<int>(integer(c, "box_cap")), static_cast<int>(integer(c, "box_cap"))});
    if (c.experiment == "chain-weights" && integer(c, "max_len") < 1)
        throw DomainError("max_len", "need max_len >= 1");
    if (c.experiment == "tilt-checks" && str(c, "check") == "diagonal") {
        if (c.slaw.kind != StrandLaw::Kind::rademacher || c.slaw.x != 1.0)
            throw DomainError("disorder", "diagonal tilt needs Rademacher(1)");
        diagonal_width(c.alpha, 1);
    }
    if (c.experiment == "zhom-check")
        for (double u : reals(c, "us"))
            if (!(u > 0)) throw DomainError("u", "u must be positive");
    if (c.experiment == "smoothing-curve")
        for (double x : reals(c, "ts"))
            if (!(x > 0)) throw DomainError("ts", "offsets must be positive");
}

Table run_experiment(const Config& c) {
    precheck(c);
    return runners().at(c.experiment)(c);
}

}  // namespace gpslab::cli
