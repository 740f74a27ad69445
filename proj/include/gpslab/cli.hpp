#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpslab/disorder.hpp"
#include "gpslab/errors.hpp"
#include "gpslab/renewal.hpp"

namespace gpslab::cli {

inline constexpr const char* kVersion = "1.0.0";

// invalid config; one message per offending field
struct ConfigError : Error {
    std::vector<std::string> fields;
    explicit ConfigError(std::vector<std::string> f);
};

struct Config {
    std::string experiment;
    double alpha = 1.5;
    SlowVary L;
    long horizon = 0;
    double tail_tol = 1e-6;
    StrandLaw slaw = StrandLaw::gaussian();
    nlohmann::json params;  // every parameter of the experiment, defaults filled in
    std::uint64_t master_seed = 0;
    std::string out_path = "results";
    std::string format = "csv";
    nlohmann::json canonical;  // normalized config, hashed into the sidecar
};

const std::vector<std::string>& experiments();
Config parse_config(const nlohmann::json& j);
Config load_config(const std::string& path);
nlohmann::json schema();

std::uint64_t fnv1a(const std::string& s);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json summary = nlohmann::json::object();
    bool ok = true;  // false when a self-check inside the experiment failed
};

// builds the laws and checks every parameter against its numeric domain (throws DomainError)
void precheck(const Config& c);
Table run_experiment(const Config& c);

struct VerifyCase {
    std::string name;
    bool ok = false;
    double error = 0.0;      // worst deviation seen
    double tolerance = 0.0;
};
std::vector<VerifyCase> verify_suite();

// writes <exp>.csv, <exp>.json, <exp>.dat and updates MANIFEST.json in dir
void write_outputs(const Config& c, const Table& t, const std::string& dir, double wall_seconds, int workers);
std::string to_csv(const Table& t);

int main(int argc, char** argv);

}  // namespace gpslab::cli
