#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "gpslab/cli.hpp"
#include "gpslab/parallel.hpp"

namespace gpslab::cli {

namespace {

int env_workers() {
    const char* e = std::getenv("GPSLAB_WORKERS");
    if (!e || !*e) return 0;
    char* end = nullptr;
    const long v = std::strtol(e, &end, 10);
    return (*end == '\0' && v > 0) ? static_cast<int>(v) : 0;
}

}  // namespace

int main(int argc, char** argv) {
    ::CLI::App app{"gpslab: two-strand pinning model laboratory"};
    app.require_subcommand(1);
    std::string cfg_path, out_dir;
    int n_workers = 0;
    auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
    run->add_option("config", cfg_path, "config file")->required();
    run->add_option("--workers", n_workers, "worker threads (default: GPSLAB_WORKERS, then all cores)")
        ->check(::CLI::NonNegativeNumber);
    run->add_option("--out", out_dir, "output directory (overrides output.path)");
    auto* verify = app.add_subcommand("verify", "run the oracle verification suite");
    auto* sch = app.add_subcommand("schema", "print the config schema");

    try {
        app.parse(argc, argv);
    } catch (const ::CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sch->parsed()) {
            std::cout << schema().dump(2) << "\n";
            return 0;
        }
        if (verify->parsed()) {
            bool ok = true;
            for (const auto& v : verify_suite()) {
                std::cout << (v.ok ? "ok   " : "FAIL ") << v.name << "  err=" << v.error << " tol=" << v.tolerance
                          << "\n";
                ok = ok && v.ok;
            }
            return ok ? 0 : 1;
        }
        const Config c = load_config(cfg_path);
        const int w = n_workers > 0 ? n_workers : env_workers();
        set_workers(w);
        const auto t0 = std::chrono::steady_clock::now();
        const Table t = run_experiment(c);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::string dir = out_dir.empty() ? c.out_path : out_dir;
        write_outputs(c, t, dir, wall, workers());
        std::cout << c.experiment << ": " << t.rows.size() << " rows -> " << dir << "/" << c.experiment << ".csv ("
                  << wall << " s)\n";
        return t.ok ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& f : e.fields) std::cerr << "  " << f << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: parameter '" << e.param << "': " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace gpslab::cli
