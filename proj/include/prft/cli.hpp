#pragma once

#include "prft/flow.hpp"
#include "prft/models.hpp"
#include "prft/sensing.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace prft::cli {

// -----------------------------------------------------------------------------
// Configuration documents
// -----------------------------------------------------------------------------

struct ConfigEntry {
    std::string value;
    int line = 0;
};

/// Flat `key = value` document; `#` starts a comment.
struct ConfigDocument {
    std::map<std::string, ConfigEntry> entries;
};

/// Throws ConfigError on syntax errors and duplicate keys.
ConfigDocument parse_config(std::istream& in);
ConfigDocument parse_config_file(const std::string& path);

struct Diagnostic {
    enum class Level { Error, Warning };
    Level level = Level::Error;
    int line = 0;
    std::string message;

    std::string format() const;
};

struct ScanSpec {
    std::string param;       // eps, gamma, rho_A, omega, omega_s, omega_c, z_max
    double min = 0.0, max = 0.0;
    int points = 0;
    bool log = false;

    std::vector<double> grid() const;
};

struct RunConfig {
    std::optional<Model> model;
    double n_plus0 = 0.0;
    FlowOptions flow;
    std::vector<std::string> outputs;         // trajectory, statistics, fisher, aptitudes
    std::optional<ScanSpec> scan;
    std::vector<std::string> fisher_targets;
    double fisher_delta = 1e-4;
    bool lab_direct = false;                  // direct lab integration instead of mapping
    bool weak_dissipation_benchmark = false;
    std::vector<std::pair<std::string, double>> resolved;   // internal units, for the manifest

    bool wants(const std::string& output) const;
};

struct LoadResult {
    std::optional<RunConfig> config;
    std::vector<Diagnostic> diagnostics;

    bool ok() const;
};

/// Schema and physical-sanity checks; never throws on invalid content.
LoadResult load_config(const ConfigDocument& doc);

std::vector<Diagnostic> validate(const ConfigDocument& doc);

// -----------------------------------------------------------------------------
// Running
// -----------------------------------------------------------------------------

struct RunOptions {
    int jobs = 0;                 // 0: hardware concurrency
    std::string out_dir = ".";
    std::string config_path;      // recorded in the manifest
};

/// Executes every requested output and writes CSVs plus manifest.json.
/// Returns 0 on success and 3 if more than half of the scan points failed.
int run(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);

/// Full-precision CSV field.
std::string csv_number(double v);

std::string version();

} // namespace prft::cli
