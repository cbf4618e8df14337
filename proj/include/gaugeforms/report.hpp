#pragma once

// Check records and JSON report emission for the scenario runner. Reports
// are the machine-readable face of the library: fixed key order, no
// timestamps and no timing data inside the file, so a rerun under the
// same configuration and seed produces byte-identical output.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaugeforms/chart.hpp"

namespace gf {

struct CheckRecord {
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Report {
    std::string scenario;
    std::vector<CheckRecord> checks;
    double wall_seconds = 0.0;  // console-only; never serialized

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    // |measured - expected| <= tolerance, recorded either way.
    void check_near(const std::string& name, double measured, double expected, double tolerance) {
        CheckRecord r;
        r.name = name;
        r.measured = measured;
        r.expected = expected;
        r.tolerance = tolerance;
        r.pass = std::abs(measured - expected) <= tolerance;
        checks.push_back(std::move(r));
    }

    // One-sided bound: measured <= tolerance (expected bound stored for
    // display as the tolerance itself).
    void check_below(const std::string& name, double measured, double bound) {
        CheckRecord r;
        r.name = name;
        r.measured = measured;
        r.expected = 0.0;
        r.tolerance = bound;
        r.pass = measured <= bound;
        checks.push_back(std::move(r));
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["scenario"] = scenario;
        j["pass"] = all_pass();
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json e;
            e["name"] = c.name;
            e["measured"] = c.measured;
            e["expected"] = c.expected;
            e["tolerance"] = c.tolerance;
            e["pass"] = c.pass;
            arr.push_back(std::move(e));
        }
        j["checks"] = std::move(arr);
        return j;
    }

    void write_json(const std::filesystem::path& path) const {
        std::ofstream out(path);
        if (!out) throw gf_error("report: cannot open " + path.string());
        out << to_json().dump(2) << "\n";
    }
};

// Column-oriented CSV writer for scenario data series.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
        if (!out_) throw gf_error("csv: cannot open " + path.string());
        out_ << header << "\n";
        out_ << std::setprecision(17);
    }

    template <typename... Ts>
    void row(Ts... vals) {
        bool first = true;
        ((out_ << (first ? "" : ",") << vals, first = false), ...);
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

}  // namespace gf
