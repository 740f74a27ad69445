#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gpslab/cli.hpp"

namespace gpslab::cli {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

struct ParamSpec {
    std::string name;
    std::string type;  // number, int, numbers, ints, bool, or a|b|c for an enum
    json dflt;
    std::string doc;
};

json dyadic(int k0, int k1) {
    json a = json::array();
    for (int k = k0; k <= k1; ++k) a.push_back(std::ldexp(1.0, -k));
    return a;
}

json geometric(double lo, double hi, int n) {
    json a = json::array();
    for (int i = 0; i < n; ++i) a.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return a;
}

const std::map<std::string, std::vector<ParamSpec>>& param_table() {
    static const std::map<std::string, std::vector<ParamSpec>> t = {
        {"free-energy-scan",
         {{"betas", "numbers", {0.0, 0.3}, "disorder strengths"},
          {"hs", "numbers", {0.0, 0.1}, "pinning parameters"},
          {"boxes", "ints", {16, 32, 64}, "square box sizes n"},
          {"samples", "int", 100, "disorder samples per point"},
          {"mode", "constrained|free", "constrained", "endpoint convention"}}},
        {"critical-point",
         {{"betas", "numbers", {0.0, 0.3}, "disorder strengths"},
          {"boxes", "ints", {16, 32, 64}, "box schedule"},
          {"samples", "int", 64, "disorder samples per box"},
          {"n_se", "number", 3.0, "indicator threshold in standard errors"},
          {"boundary_coef", "number", 0.0, "extra threshold coef/n"},
          {"tol", "number", 1e-3, "bracket width"},
          {"mode", "free|constrained", "free", "endpoint convention of the indicator"}}},
        {"exponent-fit",
         {{"hs", "numbers", geometric(1e-3, 1e-1, 9), "geometric h grid"},
          {"box_cap", "int", 512, "box of the finite-size cross-check (0 skips it)"}}},
        {"second-moment-scan",
         {{"betas", "numbers", {0.1}, "disorder strengths"},
          {"boxes", "ints", {16, 32, 64, 128}, "square box sizes n"},
          {"samples", "int", 10000, "trajectory pairs per box"}}},
        {"n-beta",
         {{"betas", "numbers", {0.1}, "disorder strengths"},
          {"C", "numbers", {2.0}, "second moment thresholds"},
          {"boxes", "ints", {16, 32, 64, 128}, "box schedule"},
          {"samples", "int", 10000, "trajectory pairs per box"}}},
        {"fractional-moments",
         {{"betas", "numbers", {0.3}, "disorder strengths"},
          {"hs", "numbers", {0.0}, "pinning parameters"},
          {"boxes", "ints", {8, 16, 32}, "square box sizes n"},
          {"samples", "int", 200, "disorder samples"},
          {"eta", "number", 0.5, "fractional exponent in (0,1)"}}},
        {"coarse-grain",
         {{"betas", "numbers", {0.3}, "disorder strengths"},
          {"hs", "numbers", {0.0}, "pinning parameters"},
          {"k", "int", 16, "block size"},
          {"eta", "number", 0.9, "fractional exponent in (0,1)"},
          {"samples", "int", 200, "disorder samples for the mc table"},
          {"radius", "int", 0, "explicit summation radius (0 = automatic)"},
          {"table", "jensen|mc", "jensen", "source of A_i"},
          {"c_const", "number", 0.0, "prefactor (0 = e^{λ(ηβ)-ηλ(β)+ηh})"}}},
        {"chain-weights",
         {{"betas", "numbers", {0.2, 0.4}, "disorder strengths"},
          {"max_len", "int", 6, "longest chain"},
          {"samples", "int", 100000, "Monte Carlo samples (0 skips)"},
          {"proposal_sd", "number", 2.0, "gaussian proposal width in units of sigma"}}},
        {"intersections",
         {{"boxes", "ints", {16, 32, 64}, "square box sizes n"},
          {"samples", "int", 10000, "trajectory pairs per box"}}},
        {"tilt-checks",
         {{"check", "taylor|annealed|diagonal", "taylor", "which tilt quantity"},
          {"deltas", "numbers", dyadic(4, 9), "tilt sizes"},
          {"betas", "numbers", dyadic(4, 9), "disorder strengths"},
          {"hs", "numbers", {0.0}, "pinning parameters (annealed)"},
          {"boxes", "ints", {8}, "square box sizes n (annealed, diagonal)"},
          {"samples", "int", 1000, "strand samples (diagonal)"},
          {"eps", "number", 0.0, "exponent slack in the diagonal width"},
          {"c_wide", "number", 2.0, "width constant for alpha > 2"}}},
        {"zhom-check",
         {{"us", "numbers", {0.02, 0.05, 0.1}, "negative pinning magnitudes"},
          {"boxes", "ints", {64, 128}, "square box sizes n"},
          {"alpha_minus", "number", 0.0, "exponent below alpha (0 = 0.9 alpha)"},
          {"c2", "number", 1.0, "constant in the stretched exponential"}}},
        {"smoothing-curve",
         {{"beta", "number", 0.3, "disorder strength"},
          {"ts", "numbers", {1.0, 0.5, 0.25, 0.125, 0.0625}, "offsets above the critical point"},
          {"boxes", "ints", {16, 32, 64}, "box schedule"},
          {"samples", "int", 64, "disorder samples per box"}}},
        {"oracle-verify", {}},
    };
    return t;
}

bool is_int(const json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

// empty string when v matches type
std::string type_error(const json& v, const std::string& type) {
    if (type == "number") return v.is_number() ? "" : "expected a number";
    if (type == "int") return is_int(v) && v.get<long long>() >= 0 ? "" : "expected a nonnegative integer";
    if (type == "bool") return v.is_boolean() ? "" : "expected true or false";
    if (type == "numbers" || type == "ints") {
        if (!v.is_array() || v.empty()) return "expected a nonempty array";
        for (const auto& x : v) {
            if (type == "numbers" && !x.is_number()) return "expected an array of numbers";
            if (type == "ints" && (!is_int(x) || x.get<long long>() < 1)) return "expected an array of positive integers";
        }
        return "";
    }
    // enum
    if (!v.is_string()) return "expected one of " + type;
    std::stringstream ss(type);
    std::string opt;
    while (std::getline(ss, opt, '|'))
        if (v.get<std::string>() == opt) return "";
    return "expected one of " + type;
}

void check_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where,
                std::vector<std::string>& errs) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            errs.push_back(where + it.key() + ": unknown key");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> f) : Error("invalid config: " + join(f, "; ")), fields(std::move(f)) {}

const std::vector<std::string>& experiments() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : param_table()) n.push_back(k);
        return n;
    }();
    return names;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Config parse_config(const json& j) {
    std::vector<std::string> errs;
    Config c;
    if (!j.is_object()) throw ConfigError({"<root>: expected an object"});
    check_keys(j, {"experiment", "renewal", "disorder", "params", "master_seed", "output"}, "", errs);

    const auto& table = param_table();
    if (!j.contains("experiment") || !j["experiment"].is_string()) {
        errs.push_back("experiment: required string");
    } else {
        c.experiment = j["experiment"].get<std::string>();
        if (!table.count(c.experiment))
            errs.push_back("experiment: unknown experiment '" + c.experiment + "' (one of " + join(experiments(), ", ") +
                           ")");
    }

    if (!j.contains("master_seed")) {
        errs.push_back("master_seed: required");
    } else if (!is_int(j["master_seed"]) || (j["master_seed"].is_number_integer() && j["master_seed"].get<long long>() < 0)) {
        errs.push_back("master_seed: expected a nonnegative 64-bit integer");
    } else {
        c.master_seed = j["master_seed"].get<std::uint64_t>();
    }

    // renewal
    json ren = j.value("renewal", json::object());
    if (!ren.is_object()) {
        errs.push_back("renewal: expected an object");
        ren = json::object();
    }
    check_keys(ren, {"alpha", "L", "horizon", "tail_tol"}, "renewal.", errs);
    if (!ren.contains("alpha") || !ren["alpha"].is_number())
        errs.push_back("renewal.alpha: required number");
    else
        c.alpha = ren["alpha"].get<double>();
    if (ren.contains("horizon")) {
        if (!is_int(ren["horizon"]) || ren["horizon"].get<long long>() < 0)
            errs.push_back("renewal.horizon: expected a nonnegative integer (0 = automatic)");
        else
            c.horizon = ren["horizon"].get<long>();
    }
    if (ren.contains("tail_tol")) {
        if (!ren["tail_tol"].is_number() || !(ren["tail_tol"].get<double>() > 0))
            errs.push_back("renewal.tail_tol: expected a positive number");
        else
            c.tail_tol = ren["tail_tol"].get<double>();
    }
    json Lj = ren.value("L", json{{"kind", "constant"}});
    if (!Lj.is_object() || !Lj.contains("kind") || !Lj["kind"].is_string()) {
        errs.push_back("renewal.L: expected an object with a string 'kind'");
        Lj = json{{"kind", "constant"}};
    }
    const std::string lk = Lj["kind"].get<std::string>();
    if (lk == "constant") {
        check_keys(Lj, {"kind"}, "renewal.L.", errs);
        c.L = SlowVary::constant();
    } else if (lk == "log_power") {
        check_keys(Lj, {"kind", "kappa"}, "renewal.L.", errs);
        if (!Lj.contains("kappa") || !Lj["kappa"].is_number())
            errs.push_back("renewal.L.kappa: required number");
        else
            c.L = SlowVary::log_power(Lj["kappa"].get<double>());
    } else if (lk == "table") {
        check_keys(Lj, {"kind", "values"}, "renewal.L.", errs);
        const std::string e = Lj.contains("values") ? type_error(Lj["values"], "numbers") : "required";
        if (!e.empty()) {
            errs.push_back("renewal.L.values: " + e);
        } else {
            auto v = Lj["values"].get<std::vector<double>>();
            if (std::any_of(v.begin(), v.end(), [](double x) { return !(x > 0); }))
                errs.push_back("renewal.L.values: entries must be positive");
            else
                c.L = SlowVary::table(v);
        }
    } else {
        errs.push_back("renewal.L.kind: expected constant|log_power|table");
    }

    // disorder
    json dj = j.value("disorder", json{{"law", "gaussian"}, {"sigma", 1.0}});
    if (!dj.is_object() || !dj.contains("law") || !dj["law"].is_string()) {
        errs.push_back("disorder: expected an object with a string 'law'");
    } else {
        const std::string law = dj["law"].get<std::string>();
        try {
            if (law == "gaussian") {
                check_keys(dj, {"law", "sigma"}, "disorder.", errs);
                const double s = dj.value("sigma", 1.0);
                if (!(s > 0)) errs.push_back("disorder.sigma: expected a positive number");
                else c.slaw = StrandLaw::gaussian(s);
            } else if (law == "rademacher") {
                check_keys(dj, {"law", "x"}, "disorder.", errs);
                const double x = dj.value("x", 1.0);
                if (!(x > 0)) errs.push_back("disorder.x: expected a positive number");
                else c.slaw = StrandLaw::rademacher(x);
            } else if (law == "discrete") {
                check_keys(dj, {"law", "values", "probs"}, "disorder.", errs);
                const std::string ev = dj.contains("values") ? type_error(dj["values"], "numbers") : "required";
                const std::string ep = dj.contains("probs") ? type_error(dj["probs"], "numbers") : "required";
                if (!ev.empty()) errs.push_back("disorder.values: " + ev);
                if (!ep.empty()) errs.push_back("disorder.probs: " + ep);
                if (ev.empty() && ep.empty())
                    c.slaw = StrandLaw::discrete(dj["values"].get<std::vector<double>>(),
                                                 dj["probs"].get<std::vector<double>>());
            } else {
                errs.push_back("disorder.law: expected gaussian|rademacher|discrete");
            }
        } catch (const nlohmann::json::exception&) {
            errs.push_back("disorder: wrong field type");
        } catch (const Error& e) {
            errs.push_back(std::string("disorder: ") + e.what());
        }
    }

    // params
    json pj = j.value("params", json::object());
    if (!pj.is_object()) {
        errs.push_back("params: expected an object");
        pj = json::object();
    }
    c.params = json::object();
    if (table.count(c.experiment)) {
        const auto& specs = table.at(c.experiment);
        std::vector<std::string> names;
        for (const auto& s : specs) names.push_back(s.name);
        check_keys(pj, names, "params.", errs);
        for (const auto& s : specs) {
            if (pj.contains(s.name)) {
                const std::string e = type_error(pj[s.name], s.type);
                if (!e.empty()) errs.push_back("params." + s.name + ": " + e);
                else c.params[s.name] = pj[s.name];
            } else {
                c.params[s.name] = s.dflt;
            }
        }
    }

    // output
    json oj = j.value("output", json::object());
    if (!oj.is_object()) {
        errs.push_back("output: expected an object");
        oj = json::object();
    }
    check_keys(oj, {"path", "format"}, "output.", errs);
    if (oj.contains("path")) {
        if (!oj["path"].is_string()) errs.push_back("output.path: expected a string");
        else c.out_path = oj["path"].get<std::string>();
    }
    if (oj.contains("format")) {
        if (!oj["format"].is_string() || oj["format"].get<std::string>() != "csv")
            errs.push_back("output.format: only \"csv\" is supported");
    }

    if (!errs.empty()) throw ConfigError(errs);

    c.canonical = json{{"experiment", c.experiment},
                       {"renewal", {{"alpha", c.alpha}, {"L", Lj}, {"horizon", c.horizon}, {"tail_tol", c.tail_tol}}},
                       {"disorder", dj},
                       {"params", c.params},
                       {"master_seed", c.master_seed}};
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"<file>: cannot open " + path});
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("<file>: ") + e.what()});
    }
    return parse_config(j);
}

json schema() {
    json s;
    s["required"] = {"experiment", "master_seed", "renewal.alpha"};
    s["renewal"] = {{"alpha", "number > 0"},
                    {"L", {{"kind", "constant|log_power|table"}, {"kappa", "number (log_power)"},
                           {"values", "positive numbers L(2),L(3),... (table)"}}},
                    {"horizon", "int >= 0, 0 = automatic"},
                    {"tail_tol", "number > 0, default 1e-6"}};
    s["disorder"] = {{"law", "gaussian|rademacher|discrete"}, {"sigma", "gaussian, default 1"},
                     {"x", "rademacher, default 1"}, {"values", "discrete support (<= 8 points)"},
                     {"probs", "discrete probabilities, summing to 1"}};
    s["master_seed"] = "64-bit unsigned integer";
    s["output"] = {{"path", "directory, default results"}, {"format", "csv"}};
    json ex = json::object();
    for (const auto& [name, specs] : param_table()) {
        json p = json::object();
        for (const auto& sp : specs) p[sp.name] = {{"type", sp.type}, {"default", sp.dflt}, {"doc", sp.doc}};
        ex[name] = p;
    }
    s["experiments"] = ex;
    return s;
}

}  // namespace gpslab::cli
