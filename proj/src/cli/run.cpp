#include "prft/cli.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

#ifndef PRFT_VERSION
#define PRFT_VERSION "unknown"
#endif

namespace prft::cli {

std::string version() { return PRFT_VERSION; }

std::string csv_number(double v) { return fmt::format("{:.17g}", v); }

namespace {

namespace fs = std::filesystem;

std::string csv_text(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else if (c == '\n') out += ' ';
        else out += c;
    }
    return out + "\"";
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
        row_text(header);
    }

    void row(const std::vector<double>& values, const std::string& error) {
        std::string line;
        for (double v : values) {
            line += csv_number(v);
            line += ',';
        }
        line += csv_text(error);
        out_ << line << '\n';
    }

    void row(const std::vector<double>& values) {
        std::string line;
        for (size_t i = 0; i < values.size(); ++i) {
            if (i) line += ',';
            line += csv_number(values[i]);
        }
        out_ << line << '\n';
    }

private:
    void row_text(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

    std::ofstream out_;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct OutputRecord {
    std::string file;
    int points = 0;
    int failed = 0;
};

void write_trajectories(const RunConfig& cfg, const fs::path& dir, std::vector<OutputRecord>& records) {
    const Model& m = *cfg.model;
    const RotatedTrajectory rot = integrate_rotated(m, cfg.n_plus0, cfg.flow);
    {
        CsvWriter w(dir / "trajectory_rotated.csv", {"z_m", "theta_rad", "n_plus", "var_plus", "var_minus", "cov_pm"});
        for (size_t i = 0; i < rot.z.size(); ++i) {
            const auto st = plus_minus_stats_rotated(rot.theta[i], rot.n_plus[i], rot.cov[i]);
            w.row({rot.z[i], rot.theta[i], rot.n_plus[i], st.var_plus, st.var_minus, st.cov_pm});
        }
        records.push_back({"trajectory_rotated.csv", static_cast<int>(rot.z.size()), 0});
    }
    CsvWriter w(dir / "trajectory_lab.csv", {"z_m", "n1", "n2", "s11", "s22", "s12"});
    if (cfg.lab_direct) {
        const auto init = initial_coherent_state(cfg.n_plus0, Vec2(0.5, 0.5), Model::rotated_phases());
        const LabTrajectory lab = integrate_lab(m, init, cfg.flow);
        for (size_t i = 0; i < lab.z.size(); ++i) {
            const auto& s = lab.states[i];
            w.row({lab.z[i], s.means[0], s.means[1], s.cov(0, 0), s.cov(1, 1), s.cov(0, 1)});
        }
    } else {
        for (size_t i = 0; i < rot.z.size(); ++i) {
            const auto s = frame_to_lab(rot.theta[i], rot.n_plus[i], rot.cov[i]);
            w.row({rot.z[i], s.means[0], s.means[1], s.cov(0, 0), s.cov(1, 1), s.cov(0, 1)});
        }
    }
    records.push_back({"trajectory_lab.csv", static_cast<int>(rot.z.size()), 0});
}

// Evaluates f(model at grid point) for every grid point on the worker pool.
template <class Row>
std::vector<std::pair<Row, std::string>> scan_rows(const RunConfig& cfg, int jobs,
                                                   const std::function<Row(const Model&)>& f) {
    const auto grid = cfg.scan->grid();
    std::vector<std::pair<Row, std::string>> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), jobs, [&](int i) {
        try {
            rows[i].first = f(cfg.model->with_parameter(cfg.scan->param, grid[i]));
        } catch (const std::exception& e) {
            rows[i].second = e.what();
        }
    });
    return rows;
}

template <class Row>
OutputRecord write_scan(const fs::path& path, const std::vector<std::string>& header, const std::vector<double>& grid,
                        const std::vector<std::pair<Row, std::string>>& rows,
                        const std::function<std::vector<double>(const Row&)>& cells, size_t width) {
    CsvWriter w(path, header);
    OutputRecord rec{path.filename().string(), static_cast<int>(grid.size()), 0};
    for (size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> v{grid[i]};
        if (rows[i].second.empty()) {
            const auto c = cells(rows[i].first);
            v.insert(v.end(), c.begin(), c.end());
        } else {
            v.resize(width, kNaN);
            ++rec.failed;
        }
        w.row(v, rows[i].second);
    }
    return rec;
}

void write_statistics(const RunConfig& cfg, int jobs, const fs::path& dir, std::vector<OutputRecord>& records) {
    using Row = MeasurementStatistics;
    const auto rows = scan_rows<Row>(cfg, jobs, [&](const Model& m) {
        const RotatedTrajectory t = integrate_rotated(m, cfg.n_plus0, cfg.flow);
        return plus_minus_stats_rotated(t.theta.back(), t.n_plus.back(), t.cov.back());
    });
    records.push_back(write_scan<Row>(
        dir / "statistics.csv",
        {"x_value", "mean_nplus", "mean_theta_rad", "var_nplus", "var_nminus", "cov_pm", "error"}, cfg.scan->grid(),
        rows, [](const Row& r) { return std::vector<double>{r.n_plus, r.theta, r.var_plus, r.var_minus, r.cov_pm}; },
        6));
}

void write_fisher(const RunConfig& cfg, int jobs, const fs::path& dir, std::vector<OutputRecord>& records) {
    for (const auto& target : cfg.fisher_targets) {
        FisherScanSettings s;
        s.target = target;
        s.rel_delta = cfg.fisher_delta;
        s.flow = cfg.flow;
        s.n_plus0 = cfg.n_plus0;
        using Row = FisherPoint;
        const auto rows = scan_rows<Row>(cfg, jobs, [&](const Model& m) { return fisher_point(m, s); });
        records.push_back(write_scan<Row>(
            dir / fmt::format("fisher_{}.csv", target),
            {"x_value", "fisher_prft", "fisher_shotnoise", "mean_nplus", "mean_theta_rad", "var_nplus", "var_nminus",
             "error"},
            cfg.scan->grid(), rows,
            [](const Row& r) {
                return std::vector<double>{r.prft.value, r.shot_noise, r.n_plus, r.theta, r.var_plus, r.var_minus};
            },
            7));
    }
}

void write_aptitudes(const RunConfig& cfg, int jobs, const fs::path& dir, std::vector<OutputRecord>& records) {
    using Row = CumulantAptitudes;
    const auto rows = scan_rows<Row>(cfg, jobs, [&](const Model& m) {
        const Vec2 means(0.5 * cfg.n_plus0, 0.5 * cfg.n_plus0);
        return m.aptitudes(m.rabi(means), Model::rotated_phases()).aptitudes;
    });
    records.push_back(write_scan<Row>(
        dir / "aptitudes.csv", {"x_value", "kappa_p", "kappa_m", "kappa_pp", "kappa_mm", "kappa_pm", "error"},
        cfg.scan->grid(), rows, [](const Row& k) { return std::vector<double>{k.kp, k.km, k.kpp, k.kmm, k.kpm}; }, 6));
}

struct BenchmarkRow {
    double phase_numeric = 0, phase_closed = 0;
    double rho_numeric = 0, rho_closed = 0;
    double eps_numeric = 0, eps_closed = 0;
};

void write_benchmark(const RunConfig& cfg, int jobs, const fs::path& dir, std::vector<OutputRecord>& records) {
    const auto rows = scan_rows<BenchmarkRow>(cfg, jobs, [&](const Model& m) {
        FisherScanSettings s;
        s.rel_delta = cfg.fisher_delta;
        s.flow = cfg.flow;
        s.n_plus0 = cfg.n_plus0;
        BenchmarkRow r;
        s.target = "rho_A";
        const FisherPoint rho = fisher_point(m, s);
        s.target = "eps";
        const FisherPoint eps = fisher_point(m, s);
        const WeakDissipation w = weak_dissipation_benchmarks(m.two_level_params(), cfg.n_plus0);
        r.phase_numeric = phase_from_rotation(rho.theta);
        r.phase_closed = w.phase;
        r.rho_numeric = rho.prft.value;
        r.rho_closed = w.fisher_rho;
        r.eps_numeric = eps.prft.value;
        r.eps_closed = w.fisher_eps;
        return r;
    });
    records.push_back(write_scan<BenchmarkRow>(
        dir / "benchmark.csv",
        {"x_value", "phase_numeric", "phase_closed_form", "fisher_rho_numeric", "fisher_rho_closed_form",
         "fisher_eps_numeric", "fisher_eps_closed_form", "error"},
        cfg.scan->grid(), rows,
        [](const BenchmarkRow& r) {
            return std::vector<double>{r.phase_numeric, r.phase_closed, r.rho_numeric,
                                       r.rho_closed,    r.eps_numeric,  r.eps_closed};
        },
        7));
}

void write_manifest(const RunConfig& cfg, const RunOptions& opt, const fs::path& dir,
                    const std::vector<OutputRecord>& records) {
    nlohmann::json j;
    j["version"] = version();
    j["config"] = opt.config_path;
    const Model& m = *cfg.model;
    j["model"] = m.kind() == ModelKind::TwoLevel ? "two_level" : "four_level";
    j["strategy"] = to_string(m.strategy());
    nlohmann::json resolved = nlohmann::json::object();
    for (const auto& [k, v] : cfg.resolved) resolved[k] = v;
    resolved["coupling_rad_s"] = m.coupling();
    resolved["ensemble_prefactor_per_m"] = m.ensemble().prefactor();
    j["resolved_si"] = resolved;
    j["numeric"] = {
        {"steps", cfg.flow.steps},
        {"stencil_h_rad", m.stencil.step(m.strategy())},
        {"stencil_richardson_tol", m.stencil.richardson_tol},
        {"fisher_rel_delta", cfg.fisher_delta},
        {"phase_space_rel_step", 1e-3},
        {"propagation", "dt = 0.01 / max rate, burn-in 40 / min decay, window 10 / min decay"},
    };
    if (cfg.scan) {
        j["scan"] = {{"param", cfg.scan->param},
                     {"min", cfg.scan->min},
                     {"max", cfg.scan->max},
                     {"points", cfg.scan->points},
                     {"grid", cfg.scan->log ? "log" : "linear"}};
    }
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& r : records) outs.push_back({{"file", r.file}, {"points", r.points}, {"failed", r.failed}});
    j["outputs"] = outs;
    std::ofstream out(dir / "manifest.json");
    out << j.dump(2) << '\n';
}

} // namespace

int run(const RunConfig& cfg, const RunOptions& opt, std::ostream& log) {
    if (!cfg.model) throw ConfigError("run: configuration has no model");
    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    std::vector<OutputRecord> records;

    if (cfg.wants("trajectory")) {
        write_trajectories(cfg, dir, records);
        log << "wrote trajectory_rotated.csv, trajectory_lab.csv\n";
    }
    if (cfg.wants("statistics")) write_statistics(cfg, opt.jobs, dir, records);
    if (cfg.wants("fisher")) write_fisher(cfg, opt.jobs, dir, records);
    if (cfg.wants("aptitudes")) write_aptitudes(cfg, opt.jobs, dir, records);
    if (cfg.weak_dissipation_benchmark) write_benchmark(cfg, opt.jobs, dir, records);
    write_manifest(cfg, opt, dir, records);

    int points = 0, failed = 0;
    for (const auto& r : records) {
        if (r.file.rfind("trajectory", 0) == 0) continue;
        points += r.points;
        failed += r.failed;
        log << fmt::format("wrote {} ({} points, {} failed)\n", r.file, r.points, r.failed);
    }
    if (points > 0 && 2 * failed > points) {
        log << fmt::format("{} of {} scan points failed\n", failed, points);
        return 3;
    }
    return 0;
}

} // namespace prft::cli
