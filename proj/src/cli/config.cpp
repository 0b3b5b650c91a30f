#include "prft/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace prft::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

enum class Dim { Frequency, Density, Area, Time, Length, Power, ScanValue };

struct PhysicalKey {
    std::string_view base;
    Dim dim;
};

constexpr std::array<PhysicalKey, 21> kPhysicalKeys{{
    {"detuning", Dim::Frequency}, {"gamma", Dim::Frequency},   {"omega", Dim::Frequency},
    {"eps_a", Dim::Frequency},    {"eps_b", Dim::Frequency},   {"eps_c", Dim::Frequency},
    {"eps_d", Dim::Frequency},    {"omega_p", Dim::Frequency}, {"omega_c", Dim::Frequency},
    {"omega_s", Dim::Frequency},  {"gamma_b", Dim::Frequency}, {"gamma_c", Dim::Frequency},
    {"gamma_d", Dim::Frequency},  {"density", Dim::Density},   {"area", Dim::Area},
    {"t_M", Dim::Time},           {"z_max", Dim::Length},      {"wavelength", Dim::Length},
    {"power", Dim::Power},        {"scan_min", Dim::ScanValue}, {"scan_max", Dim::ScanValue},
}};

struct UnitSuffix {
    std::string_view suffix;
    std::string_view unit;   // tag understood by convert_units
    Dim dim;
    int power = 1;           // area units are squared lengths
};

constexpr std::array<UnitSuffix, 12> kSuffixes{{
    {"MHz", "MHz", Dim::Frequency},   {"rads", "rad/s", Dim::Frequency}, {"m3", "m^-3", Dim::Density},
    {"cm3", "cm^-3", Dim::Density},   {"m", "m", Dim::Length},          {"cm", "cm", Dim::Length},
    {"nm", "nm", Dim::Length},        {"m2", "m", Dim::Area, 2},        {"cm2", "cm", Dim::Area, 2},
    {"s", "s", Dim::Time},            {"mW", "mW", Dim::Power},         {"W", "W", Dim::Power},
}};

const std::set<std::string> kPlainKeys{"model",         "strategy",   "n_plus",     "n_ref",
                                       "steps",         "outputs",    "scan_param", "scan_points",
                                       "scan_grid",     "fisher_param", "fisher_delta", "lab_frame",
                                       "benchmark",     "name"};

const std::set<std::string> kOutputs{"trajectory", "statistics", "fisher", "aptitudes"};

Dim scan_dim(const std::string& param) {
    if (param == "rho_A") return Dim::Density;
    if (param == "z_max") return Dim::Length;
    return Dim::Frequency;
}

struct Quantity {
    double si = 0.0;
    Dim dim = Dim::Frequency;
    int line = 0;
    std::string key;
};

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && std::isfinite(out);
}

class Loader {
public:
    explicit Loader(const ConfigDocument& doc) : doc_(doc) {}

    LoadResult load();

private:
    void error(int line, std::string msg) { diags_.push_back({Diagnostic::Level::Error, line, std::move(msg)}); }
    void warning(int line, std::string msg) { diags_.push_back({Diagnostic::Level::Warning, line, std::move(msg)}); }

    void classify();
    std::optional<double> quantity(const std::string& base, bool required, const char* hint);
    std::optional<std::string> plain(const std::string& key) const;
    int line_of(const std::string& key) const;
    std::optional<double> plain_number(const std::string& key);

    const ConfigDocument& doc_;
    std::vector<Diagnostic> diags_;
    std::map<std::string, Quantity> quantities_;
    std::vector<std::pair<std::string, double>> resolved_;
};

void Loader::classify() {
    for (const auto& [key, entry] : doc_.entries) {
        if (kPlainKeys.count(key)) continue;
        bool matched = false;
        for (const auto& pk : kPhysicalKeys) {
            const std::string prefix = std::string(pk.base) + "_";
            if (key.rfind(prefix, 0) != 0) continue;
            const std::string suffix = key.substr(prefix.size());
            const auto it = std::find_if(kSuffixes.begin(), kSuffixes.end(),
                                         [&](const UnitSuffix& u) { return u.suffix == suffix; });
            if (it == kSuffixes.end()) continue;
            matched = true;
            if (pk.dim != Dim::ScanValue && it->dim != pk.dim) {
                error(entry.line, fmt::format("unit suffix '{}' does not fit key '{}'", suffix, pk.base));
                break;
            }
            double v = 0.0;
            if (!parse_double(entry.value, v)) {
                error(entry.line, fmt::format("'{}' is not a number", entry.value));
                break;
            }
            double si = convert_units(v, it->unit);
            if (it->power == 2) si *= convert_units(1.0, it->unit);
            if (quantities_.count(std::string(pk.base))) {
                error(entry.line, fmt::format("'{}' is given more than once with different units", pk.base));
                break;
            }
            quantities_[std::string(pk.base)] = Quantity{si, it->dim, entry.line, key};
            break;
        }
        if (!matched) error(entry.line, fmt::format("unknown key '{}'", key));
    }
}

std::optional<double> Loader::quantity(const std::string& base, bool required, const char* hint) {
    const auto it = quantities_.find(base);
    if (it == quantities_.end()) {
        if (required) error(0, fmt::format("missing key '{}_<unit>' ({})", base, hint));
        return std::nullopt;
    }
    resolved_.emplace_back(base, it->second.si);
    return it->second.si;
}

std::optional<std::string> Loader::plain(const std::string& key) const {
    const auto it = doc_.entries.find(key);
    if (it == doc_.entries.end()) return std::nullopt;
    return it->second.value;
}

int Loader::line_of(const std::string& key) const {
    const auto it = doc_.entries.find(key);
    if (it != doc_.entries.end()) return it->second.line;
    const auto q = quantities_.find(key);
    return q == quantities_.end() ? 0 : q->second.line;
}

std::optional<double> Loader::plain_number(const std::string& key) {
    const auto s = plain(key);
    if (!s) return std::nullopt;
    double v = 0.0;
    if (!parse_double(*s, v)) {
        error(line_of(key), fmt::format("'{}' is not a number", *s));
        return std::nullopt;
    }
    return v;
}

LoadResult Loader::load() {
    classify();
    RunConfig cfg;

    const std::string model = plain("model").value_or("");
    if (model != "two_level" && model != "four_level")
        error(line_of("model"), "model must be 'two_level' or 'four_level'");
    const bool four = model == "four_level";

    Strategy strategy = Strategy::CharPoly;
    if (const auto s = plain("strategy")) {
        try {
            strategy = strategy_from_string(*s);
        } catch (const ConfigError& e) {
            error(line_of("strategy"), e.what());
        }
    }
    if (four && strategy == Strategy::Analytic)
        error(line_of("strategy"), "the analytic strategy is only available for the two-level model");

    Ensemble ens;
    ens.density = quantity("density", true, "atom density").value_or(0.0);
    ens.area = quantity("area", true, "beam cross-section").value_or(0.0);
    ens.t_m = quantity("t_M", true, "measurement time").value_or(0.0);
    ens.z_max = quantity("z_max", true, "propagation length").value_or(0.0);
    for (const char* k : {"density", "area", "t_M", "z_max"})
        if (quantities_.count(k) && !(quantities_[k].si > 0)) error(line_of(k), fmt::format("{} must be positive", k));

    // Photon number: explicit, or from the laser power over the measurement time.
    double n_plus = 0.0;
    if (const auto n = plain_number("n_plus")) {
        n_plus = *n;
    } else if (quantities_.count("power") && quantities_.count("wavelength")) {
        const double power = *quantity("power", true, "");
        const double wavelength = *quantity("wavelength", true, "");
        if (power > 0 && wavelength > 0 && ens.t_m > 0) n_plus = photon_budget(power, wavelength, ens.t_m);
    } else {
        error(0, "missing photon number: give n_plus, or power_<unit> together with wavelength_<unit>");
    }
    if (!(n_plus > 0)) error(line_of("n_plus"), "the photon number must be positive");
    const double n_ref = plain_number("n_ref").value_or(n_plus);
    cfg.n_plus0 = n_plus;
    resolved_.emplace_back("n_plus", n_plus);
    resolved_.emplace_back("n_ref", n_ref);

    auto nonneg = [&](const char* key, double v) {
        if (v < 0) error(line_of(key), fmt::format("{} must be non-negative", key));
    };

    double omega_ref = 0.0, gamma = 0.0;
    if (model == "two_level") {
        TwoLevelParams p;
        p.detuning = quantity("detuning", true, "laser detuning").value_or(0.0);
        p.gamma = gamma = quantity("gamma", true, "dissipation rate").value_or(0.0);
        p.omega_ref = omega_ref = quantity("omega", true, "Rabi frequency at n_ref").value_or(0.0);
        nonneg("gamma", p.gamma);
        nonneg("omega", p.omega_ref);
        p.n_ref = n_ref;
        p.ensemble = ens;
        try {
            cfg.model = Model::two_level(p, strategy);
        } catch (const std::exception& e) {
            if (diags_.empty()) error(0, e.what());
        }
    } else if (four) {
        FourLevelParams p;
        p.eps_a = quantity("eps_a", false, "").value_or(0.0);
        p.eps_b = quantity("eps_b", false, "").value_or(p.eps_a);
        p.eps_c = quantity("eps_c", false, "").value_or(p.eps_b);
        p.eps_d = quantity("eps_d", false, "").value_or(p.eps_c);
        p.omega_p_ref = omega_ref = quantity("omega_p", true, "probe Rabi frequency").value_or(0.0);
        p.omega_c = quantity("omega_c", true, "coupling Rabi frequency").value_or(0.0);
        p.omega_s = quantity("omega_s", true, "signal Rabi frequency").value_or(0.0);
        p.gamma_b = gamma = quantity("gamma_b", true, "decay rate of b").value_or(0.0);
        p.gamma_c = quantity("gamma_c", true, "decay rate of c").value_or(0.0);
        p.gamma_d = quantity("gamma_d", true, "decay rate of d").value_or(0.0);
        for (const char* k : {"omega_p", "omega_c", "omega_s", "gamma_b", "gamma_c", "gamma_d"})
            if (quantities_.count(k)) nonneg(k, quantities_[k].si);
        p.n_ref = n_ref;
        p.ensemble = ens;
        try {
            cfg.model = Model::four_level(p, strategy);
        } catch (const std::exception& e) {
            if (diags_.empty()) error(0, e.what());
        }
    }

    // Integration settings.
    if (const auto steps = plain_number("steps")) {
        if (*steps < 10 || std::floor(*steps) != *steps) error(line_of("steps"), "steps must be an integer >= 10");
        else cfg.flow.steps = static_cast<int>(*steps);
    }
    if (const auto lf = plain("lab_frame")) {
        if (*lf == "direct") cfg.lab_direct = true;
        else if (*lf != "mapped") error(line_of("lab_frame"), "lab_frame must be 'mapped' or 'direct'");
    }

    // Outputs.
    if (const auto out = plain("outputs")) {
        cfg.outputs = split_list(*out);
        for (const auto& o : cfg.outputs)
            if (!kOutputs.count(o)) error(line_of("outputs"), fmt::format("unknown output '{}'", o));
    }
    if (const auto b = plain("benchmark")) {
        if (*b == "weak_dissipation") cfg.weak_dissipation_benchmark = true;
        else error(line_of("benchmark"), fmt::format("unknown benchmark '{}'", *b));
        if (four) error(line_of("benchmark"), "the weak-dissipation benchmark applies to the two-level model");
        if (gamma > 0.1 * omega_ref)
            warning(line_of("benchmark"), "gamma exceeds 0.1 Omega; the weak-dissipation closed forms are outside their regime");
    }
    if (cfg.outputs.empty() && !cfg.weak_dissipation_benchmark) error(0, "no outputs requested");

    // Scan.
    const bool has_scan = plain("scan_param") || quantities_.count("scan_min") || quantities_.count("scan_max") ||
                          plain("scan_points");
    if (has_scan) {
        ScanSpec sc;
        sc.param = plain("scan_param").value_or("");
        if (sc.param.empty()) error(line_of("scan_points"), "scan_param is required for a scan");
        if (cfg.model && !sc.param.empty()) {
            try {
                cfg.model->parameter(sc.param);
            } catch (const ConfigError& e) {
                error(line_of("scan_param"), e.what());
            }
        }
        for (const char* k : {"scan_min", "scan_max"}) {
            if (!quantities_.count(k)) {
                error(0, fmt::format("missing key '{}_<unit>'", k));
                continue;
            }
            if (!sc.param.empty() && quantities_[k].dim != scan_dim(sc.param))
                error(line_of(k), fmt::format("unit of '{}' does not match scan_param '{}'", quantities_[k].key, sc.param));
        }
        sc.min = quantity("scan_min", false, "").value_or(0.0);
        sc.max = quantity("scan_max", false, "").value_or(0.0);
        const double pts = plain_number("scan_points").value_or(0.0);
        if (pts < 2 || std::floor(pts) != pts) error(line_of("scan_points"), "scan_points must be an integer >= 2");
        sc.points = static_cast<int>(pts);
        const std::string grid = plain("scan_grid").value_or("linear");
        if (grid != "linear" && grid != "log") error(line_of("scan_grid"), "scan_grid must be 'linear' or 'log'");
        sc.log = grid == "log";
        if (!(sc.min < sc.max)) error(line_of("scan_max"), "scan_min must be smaller than scan_max");
        if (sc.log && !(sc.min > 0)) error(line_of("scan_min"), "a log grid needs scan_min > 0");
        cfg.scan = sc;
    }
    const bool needs_scan = cfg.wants("statistics") || cfg.wants("fisher") || cfg.wants("aptitudes") ||
                            cfg.weak_dissipation_benchmark;
    if (needs_scan && !cfg.scan) error(0, "statistics, fisher, aptitudes and benchmark outputs need a scan");

    if (const auto f = plain("fisher_param")) {
        cfg.fisher_targets = split_list(*f);
        for (const auto& t : cfg.fisher_targets) {
            if (t != "rho_A" && t != "eps" && t != "omega_s" && t != "gamma")
                error(line_of("fisher_param"), fmt::format("fisher_param '{}' is not one of rho_A, eps, omega_s, gamma", t));
            else if (t == "omega_s" && !four)
                error(line_of("fisher_param"), "omega_s is only defined for the four-level model");
        }
    }
    if (cfg.wants("fisher") && cfg.fisher_targets.empty()) error(line_of("outputs"), "the fisher output needs fisher_param");
    if (const auto d = plain_number("fisher_delta")) {
        if (!(*d > 0) || *d > 0.1) error(line_of("fisher_delta"), "fisher_delta must lie in (0, 0.1]");
        else cfg.fisher_delta = *d;
    }

    LoadResult r;
    r.diagnostics = std::move(diags_);
    std::stable_sort(r.diagnostics.begin(), r.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    cfg.resolved = std::move(resolved_);
    if (r.ok()) r.config = std::move(cfg);
    return r;
}

} // namespace

// -----------------------------------------------------------------------------
// Public API
// -----------------------------------------------------------------------------

ConfigDocument parse_config(std::istream& in) {
    ConfigDocument doc;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected 'key = value'", line), line);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", line), line);
        if (value.empty()) throw ConfigError(fmt::format("line {}: empty value for '{}'", line, key), line);
        if (doc.entries.count(key))
            throw ConfigError(fmt::format("line {}: duplicate key '{}'", line, key), line);
        doc.entries[key] = ConfigEntry{value, line};
    }
    return doc;
}

ConfigDocument parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path));
    return parse_config(in);
}

std::string Diagnostic::format() const {
    const char* tag = level == Level::Error ? "error" : "warning";
    if (line > 0) return fmt::format("line {}: {}: {}", line, tag, message);
    return fmt::format("{}: {}", tag, message);
}

std::vector<double> ScanSpec::grid() const {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        g[i] = log ? min * std::pow(max / min, t) : min + t * (max - min);
    }
    return g;
}

bool RunConfig::wants(const std::string& output) const {
    return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

bool LoadResult::ok() const {
    return std::none_of(diagnostics.begin(), diagnostics.end(),
                        [](const Diagnostic& d) { return d.level == Diagnostic::Level::Error; });
}

LoadResult load_config(const ConfigDocument& doc) { return Loader(doc).load(); }

std::vector<Diagnostic> validate(const ConfigDocument& doc) { return load_config(doc).diagnostics; }

} // namespace prft::cli
