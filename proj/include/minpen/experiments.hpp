#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minpen/csv.hpp"

namespace minpen {

// Invalid or inconsistent configuration input. The CLI maps this to exit
// code 2; tolerance failures in a valid run map to exit code 1 instead.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
};

struct CheckLine {
    std::string name;
    double value;
    double threshold;
    bool passed;
};

struct ExperimentOutput {
    std::string kind;
    std::vector<CsvTable> tables;  // checks.csv is always the last entry
    std::vector<CheckLine> checks;

    bool all_passed() const {
        for (const CheckLine& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Parse, merge with a preset when one is named, run, and collect every table
// in memory. Nothing touches the filesystem here, so a config error can never
// leave partial outputs behind.
ExperimentOutput run_config_text(const std::string& text,
                                 const RunOverrides& overrides = {});
ExperimentOutput run_config_file(const std::string& path,
                                 const RunOverrides& overrides = {});

// Write every table into `directory` (created if missing).
void write_tables(const ExperimentOutput& output, const std::string& directory);

// Human-readable list of built-in presets; user config files are appended
// with a validity verdict each.
std::string describe_presets(const std::vector<std::string>& user_files = {});

}  // namespace minpen
