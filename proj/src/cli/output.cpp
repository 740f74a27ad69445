#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "gpslab/cli.hpp"

namespace gpslab::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::map<std::string, std::string>& column_docs() {
    static const std::map<std::string, std::string> d = {
        {"beta", "disorder strength"},
        {"h", "pinning parameter"},
        {"n", "square box size"},
        {"mode", "constrained or free endpoint"},
        {"samples", "number of Monte Carlo samples behind the row"},
        {"F", "mean of (1/n) log Z"},
        {"std_err", "standard error of the row estimate"},
        {"best", "1 on the box attaining the max over the schedule"},
        {"lambda", "log E[exp(beta w)]"},
        {"h_c", "critical point estimate"},
        {"lo", "bracket lower end"},
        {"hi", "bracket upper end"},
        {"evaluations", "indicator evaluations"},
        {"F_finite", "(1/n) log Z_{n,h} at n = box_cap, a lower bound on F"},
        {"box_cap", "box of the finite-size cross-check"},
        {"exponent", "fitted slope of log F against log h"},
        {"r2", "coefficient of determination of the fit"},
        {"gap", "lambda(2 beta) - 2 lambda(beta)"},
        {"m2", "second moment of the free partition function at h = 0"},
        {"cs_full", "Cauchy-Schwarz bound E[exp(1.5 gap (p1+p2))]"},
        {"cs_full_se", "standard error of cs_full"},
        {"cs_single", "E[exp(3 gap p1)]"},
        {"cs_single_se", "standard error of cs_single"},
        {"dominated_frac", "fraction of pairs whose bound dominates the exact pair weight"},
        {"C", "second moment threshold"},
        {"n_beta", "largest box with second moment <= C (0 if none)"},
        {"unbounded", "1 if no box in the schedule exceeded C"},
        {"eta", "fractional exponent"},
        {"A", "mean of Z^eta"},
        {"jensen", "homogeneous Z^eta, an upper bound on A"},
        {"k", "block size"},
        {"table", "source of the A_i table"},
        {"c_const", "prefactor of the block sums"},
        {"rho1", "first block sum"},
        {"rho2", "second block sum"},
        {"rho3", "third block sum"},
        {"sum", "rho1 + rho2 + rho3"},
        {"triggered", "1 if sum <= 1"},
        {"radius", "explicit summation radius"},
        {"len", "chain length"},
        {"weight", "chain weight from the exact recursion"},
        {"xi", "xi_len (gaussian)"},
        {"mc", "Monte Carlo chain weight"},
        {"mc_se", "standard error of mc"},
        {"counter", "bivariate, first or second projection intersection"},
        {"mean", "mean intersection count"},
        {"variance", "sample variance of the count"},
        {"geometric_q", "geometric-law fit mean/(1+mean)"},
        {"violations", "pairs breaking the count bound"},
        {"kind", "linear or quadratic tilt"},
        {"delta", "tilt size"},
        {"frac_minus_one", "Frac - 1"},
        {"leading", "leading Taylor term"},
        {"residual", "Frac - 1 - leading"},
        {"log_tilted", "log of the tilted annealed partition function"},
        {"log_untilted", "log of the homogeneous partition function"},
        {"qbar", "mean over strands of prod cosh(delta sigma_i)"},
        {"ell", "diagonal width parameter"},
        {"half_width", "band half width floor(2 ell)"},
        {"max_row", "largest band row size"},
        {"max_abs_sigma", "largest |sigma_i| seen"},
        {"sigma_within_2ell", "1 if max_abs_sigma <= 2 ell"},
        {"u", "negative pinning magnitude"},
        {"lhs", "Z_{n,-u}"},
        {"t1", "K(|n|)/u^2"},
        {"t2", "P(n in tau) exp(-c2 u |n|^gamma)"},
        {"c_fit", "smallest constant making the bound hold on the diagonal grid"},
        {"rhs", "c_fit t1 + t2"},
        {"holds", "1 if lhs <= rhs"},
        {"t", "offset above h_c"},
        {"n_best", "box attaining the max"},
        {"local_exponent", "log-log slope of F against t"},
        {"exploratory", "always 1: finite-size curve only"},
        {"case", "verification case"},
        {"ok", "1 if within tolerance"},
        {"error", "worst deviation"},
        {"tolerance", "allowed deviation"},
    };
    return d;
}

bool numeric(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return *end == '\0';
}

std::string hex(std::uint64_t v) {
    char b[20];
    std::snprintf(b, sizeof b, "%016llx", static_cast<unsigned long long>(v));
    return b;
}

}  // namespace

std::string to_csv(const Table& t) {
    std::ostringstream o;
    for (std::size_t i = 0; i < t.columns.size(); ++i) o << (i ? "," : "") << t.columns[i];
    o << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << r[i];
        o << "\n";
    }
    return o.str();
}

void write_outputs(const Config& c, const Table& t, const std::string& dir, double wall_seconds, int workers) {
    fs::create_directories(dir);
    const fs::path base = fs::path(dir) / c.experiment;
    {
        std::ofstream f(base.string() + ".csv", std::ios::binary);
        f << to_csv(t);
        if (!f) throw Error("cannot write " + base.string() + ".csv");
    }
    {
        // numeric columns only, whitespace separated
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            bool all = !t.rows.empty();
            for (const auto& r : t.rows) all = all && numeric(r[i]);
            if (all) keep.push_back(i);
        }
        std::ofstream f(base.string() + ".dat", std::ios::binary);
        f << "#";
        for (auto i : keep) f << " " << t.columns[i];
        f << "\n";
        for (const auto& r : t.rows) {
            for (std::size_t k = 0; k < keep.size(); ++k) f << (k ? " " : "") << r[keep[k]];
            f << "\n";
        }
    }
    {
        json s;
        s["experiment"] = c.experiment;
        s["config"] = c.canonical;
        s["config_hash"] = hex(fnv1a(c.canonical.dump()));
        s["master_seed"] = c.master_seed;
        s["version"] = kVersion;
        s["compiler"] = __VERSION__;
#ifdef _OPENMP
        s["openmp"] = _OPENMP;
#endif
        s["wall_time_s"] = wall_seconds;
        s["workers"] = workers;
        s["rows"] = t.rows.size();
        s["ok"] = t.ok;
        s["summary"] = t.summary;
        s["csv"] = c.experiment + ".csv";
        std::ofstream f(base.string() + ".json", std::ios::binary);
        f << s.dump(2) << "\n";
    }
    {
        const fs::path mp = fs::path(dir) / "MANIFEST.json";
        json m = json::object();
        if (fs::exists(mp)) {
            std::ifstream in(mp);
            try {
                m = json::parse(in);
            } catch (const json::parse_error&) {
                m = json::object();
            }
        }
        json cols = json::array();
        for (const auto& col : t.columns) {
            auto it = column_docs().find(col);
            cols.push_back({{"name", col}, {"doc", it == column_docs().end() ? "" : it->second}});
        }
        m[c.experiment] = {{"csv", c.experiment + ".csv"},
                           {"sidecar", c.experiment + ".json"},
                           {"data", c.experiment + ".dat"},
                           {"columns", cols}};
        std::ofstream f(mp, std::ios::binary);
        f << m.dump(2) << "\n";
    }
}

}  // namespace gpslab::cli
