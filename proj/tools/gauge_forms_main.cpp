// gauge-forms: command-line front end over the scenario registry.
//
//   gauge-forms run <scenario> [--param value]... [--out DIR] [--seed N] [--config FILE]
//   gauge-forms verify-all [--seed N] [--out DIR]
//   gauge-forms list
//
// Exit codes: 0 every check passed, 1 at least one check failed, 2 the
// request itself was bad (unknown scenario, malformed parameter, unreadable
// config). Reports land in <out>/<scenario>/report.json with CSV series
// alongside; both are deterministic for a fixed (config, seed).

#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaugeforms/scenarios.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

// Leftover tokens after CLI11 eats the named flags: every pair must look
// like "--key value" and becomes a scenario parameter.
void absorb_extras(gf::ScenarioConfig& cfg, const std::vector<std::string>& extras) {
    for (size_t i = 0; i < extras.size(); i += 2) {
        const std::string& key = extras[i];
        if (key.size() < 3 || key.rfind("--", 0) != 0)
            throw gf::gf_error("expected --name value pairs, got '" + key + "'");
        if (i + 1 >= extras.size()) throw gf::gf_error("parameter '" + key + "' is missing its value");
        cfg.params[key.substr(2)] = extras[i + 1];
    }
}

// Optional JSON config file. Recognized keys: scenario, out, seed, params
// (string or number values). Command-line flags win over file entries.
void load_config_file(gf::ScenarioConfig& cfg, const std::string& path, bool keep_out,
                      bool keep_seed) {
    std::ifstream in(path);
    if (!in) throw gf::gf_error("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw gf::gf_error("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw gf::gf_error("config file '" + path + "' must hold a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key != "scenario" && key != "out" && key != "seed" && key != "params")
            throw gf::gf_error("config file: unrecognized key '" + key + "'");
    }
    if (j.contains("scenario") && cfg.name.empty()) cfg.name = j["scenario"].get<std::string>();
    if (j.contains("out") && !keep_out) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("seed") && !keep_seed) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("params")) {
        for (const auto& [key, val] : j["params"].items()) {
            if (cfg.params.count(key)) continue;  // flag already set it
            if (val.is_string())
                cfg.params[key] = val.get<std::string>();
            else
                cfg.params[key] = nlohmann::json(val).dump();
        }
    }
}

void print_report(const gf::Report& rep, double seconds) {
    for (const auto& c : rep.checks) {
        std::cout << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << ": measured "
                  << std::setprecision(6) << std::scientific << c.measured;
        if (c.tolerance > 0.0) std::cout << " (expected " << c.expected << " +- " << c.tolerance << ")";
        std::cout << std::defaultfloat << "\n";
    }
    std::cout << (rep.all_pass() ? "PASS" : "FAIL") << " " << rep.scenario << " ("
              << std::setprecision(2) << std::fixed << seconds << " s)" << std::defaultfloat << "\n";
}

int run_one(gf::ScenarioConfig cfg) {
    auto t0 = std::chrono::steady_clock::now();
    gf::Report rep = gf::run_scenario(cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    print_report(rep, secs);
    return rep.all_pass() ? kExitPass : kExitCheckFailure;
}

int run_all(const gf::ScenarioConfig& base) {
    bool all_ok = true;
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& name : gf::scenario_names()) {
        gf::ScenarioConfig cfg = base;
        cfg.name = name;
        auto s0 = std::chrono::steady_clock::now();
        gf::Report rep = gf::run_scenario(cfg);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count();
        print_report(rep, secs);
        all_ok = all_ok && rep.all_pass();
    }
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (all_ok ? "PASS" : "FAIL") << " verify-all, " << gf::scenario_names().size()
              << " scenarios (" << std::setprecision(2) << std::fixed << total << " s)"
              << std::defaultfloat << "\n";
    return all_ok ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification scenarios for gauge fields and curved-space geometry"};
    app.require_subcommand(1);

    gf::ScenarioConfig cfg;
    std::string config_file;

    CLI::App* run = app.add_subcommand("run", "run one scenario");
    run->add_option("scenario", cfg.name, "scenario name (see 'list')");
    run->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    run->add_option("--seed", cfg.seed, "seed for randomized checks")->capture_default_str();
    run->add_option("--config", config_file, "JSON config file; flags override its entries");
    run->allow_extras();

    CLI::App* all = app.add_subcommand("verify-all", "run every scenario with defaults");
    all->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    all->add_option("--seed", cfg.seed, "seed for randomized checks")->capture_default_str();

    CLI::App* list = app.add_subcommand("list", "print the scenario names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitConfigError;
    }

    try {
        if (list->parsed()) {
            for (const auto& name : gf::scenario_names()) std::cout << name << "\n";
            return kExitPass;
        }
        if (all->parsed()) return run_all(cfg);
        absorb_extras(cfg, run->remaining());
        if (!config_file.empty())
            load_config_file(cfg, config_file, run->count("--out") > 0, run->count("--seed") > 0);
        if (cfg.name.empty()) throw gf::gf_error("run: no scenario named (argument or config file)");
        return run_one(cfg);
    } catch (const std::exception& e) {
        std::cerr << "gauge-forms: " << e.what() << "\n";
        return kExitConfigError;
    }
}
