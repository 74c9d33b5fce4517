#include "esf/experiments.hpp"

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace esf {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

// Write-then-rename so partially written files never land under the final name.
class AtomicFile {
public:
    explicit AtomicFile(const fs::path& path)
        : final_(path), tmp_(path.string() + ".tmp"), out_(tmp_, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open " + tmp_.string());
    }
    std::ostream& stream() { return out_; }
    void commit() {
        out_.close();
        if (!out_) throw std::runtime_error("write failed for " + tmp_.string());
        fs::rename(tmp_, final_);
    }

private:
    fs::path final_;
    fs::path tmp_;
    std::ofstream out_;
};

void write_spec_header(std::ostream& os, const ProblemSpec& spec) {
    os << "# domain=" << domain_label(spec.domain) << "\n";
    if (const auto* rect = std::get_if<RectangleDomain>(&spec.domain)) {
        os << "# width=" << format_double(rect->width) << "\n";
        os << "# height=" << format_double(rect->height) << "\n";
        os << "# n=2\n";
    } else {
        os << "# n=" << std::get<BallDomain>(spec.domain).dim << "\n";
    }
    os << "# p=" << format_double(spec.p) << "\n";
    os << "# resolution=" << spec.resolution << "\n";
    os << "# seed=" << spec.seed << "\n";
}

std::string out_directory(const RunConfig& config) {
    if (!config.out_dir.empty()) return config.out_dir;
    if (const char* env = std::getenv("EXTREMAL_OUT_DIR"); env && *env) return env;
    return ".";
}

int usage_error(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return 2;
}

}  // namespace

void write_solution_csv(const fs::path& path, const Discretization& disc,
                        const SolveReport& report) {
    AtomicFile file(path);
    std::ostream& os = file.stream();
    write_spec_header(os, report.spec);
    os << "# Cp=" << format_double(report.cp) << "\n";
    os << "# Lambda=" << format_double(report.lambda) << "\n";
    os << "# sup_factor=" << format_double(report.sup_factor) << "\n";
    os << "# converged=" << (report.converged ? "true" : "false") << "\n";
    os << "# iterations=" << report.iterations << "\n";
    os << "# stop_reason=" << report.stop_reason << "\n";
    if (!disc.radial()) {
        const QuadMesh& mesh = disc.quad_mesh();
        os << "x,y,u\n";
        for (int i = 0; i < mesh.n_nodes(); ++i)
            os << format_double(mesh.node_coords[i].x()) << ","
               << format_double(mesh.node_coords[i].y()) << ","
               << format_double(report.u[i]) << "\n";
    } else {
        const RadialMesh& mesh = disc.radial_mesh();
        os << "r,u\n";
        for (int i = 0; i < mesh.n_nodes(); ++i)
            os << format_double(mesh.node_coords[i]) << "," << format_double(report.u[i])
               << "\n";
    }
    file.commit();
}

void write_report_csv(const fs::path& path, const SolveReport& report) {
    AtomicFile file(path);
    std::ostream& os = file.stream();
    write_spec_header(os, report.spec);
    os << "# Cp=" << format_double(report.cp) << "\n";
    os << "# Lambda=" << format_double(report.lambda) << "\n";
    os << "# converged=" << (report.converged ? "true" : "false") << "\n";
    os << "# iterations=" << report.iterations << "\n";
    os << "# halvings=" << report.halvings_total << "\n";
    os << "# stop_reason=" << report.stop_reason << "\n";
    os << "# final_descent_norm=" << format_double(report.final_descent_norm) << "\n";
    os << "# residual_mean=" << format_double(report.residuals.mean_abs) << "\n";
    os << "# residual_max=" << format_double(report.residuals.max_abs) << "\n";
    os << "# residual_count=" << report.residuals.count << "\n";
    os << "iter,energy\n";
    for (size_t i = 0; i < report.energy_history.size(); ++i)
        os << i << "," << format_double(report.energy_history[i]) << "\n";
    file.commit();
}

void write_residuals_csv(const fs::path& path, const ResidualReport& report) {
    AtomicFile file(path);
    std::ostream& os = file.stream();
    os << "# count=" << report.count << "\n";
    os << "# mean_abs=" << format_double(report.mean_abs) << "\n";
    os << "# max_abs=" << format_double(report.max_abs) << "\n";
    os << "seed,WT,WT_normalized\n";
    for (int i = 0; i < report.count; ++i)
        os << report.seed + static_cast<std::uint64_t>(i) << ","
           << format_double(report.values[i]) << "," << format_double(report.normalized[i])
           << "\n";
    file.commit();
}

void write_distributions_csv(const fs::path& path,
                             const std::vector<DistributionCurve>& curves) {
    AtomicFile file(path);
    std::ostream& os = file.stream();
    if (!curves.empty()) {
        os << "# domain=" << curves.front().domain << "\n";
        os << "# measure=" << format_double(curves.front().domain_measure) << "\n";
    }
    os << "p,t,mu\n";
    for (const auto& curve : curves)
        for (size_t k = 0; k < curve.t_grid.size(); ++k)
            os << format_double(curve.p) << "," << format_double(curve.t_grid[k]) << ","
               << format_double(curve.mu[k]) << "\n";
    file.commit();
}

void write_monotonicity_csv(const fs::path& path, const MonotonicityReport& report) {
    AtomicFile file(path);
    std::ostream& os = file.stream();
    os << "# floor=" << format_double(report.floor) << "\n";
    os << "# tested=" << report.tested << "\n";
    os << "# violations=" << report.violations << "\n";
    os << "# verdict=" << report.verdict() << "\n";
    os << "p_low,p_high,t,mu_low_minus_mu_high,ok\n";
    for (const auto& row : report.rows)
        os << format_double(row.p_low) << "," << format_double(row.p_high) << ","
           << format_double(row.t) << "," << format_double(row.diff) << ","
           << (row.ok ? "true" : "false") << "\n";
    file.commit();
}

LoadedSolution read_solution_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::map<std::string, std::string> keys;
    std::vector<double> values;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(2, eq - 2);
                keys[key] = line.substr(eq + 1);
            }
            continue;
        }
        if (!header_seen) {  // column header row
            header_seen = true;
            continue;
        }
        auto last_comma = line.rfind(',');
        if (last_comma == std::string::npos)
            throw std::runtime_error("malformed row in " + path.string());
        values.push_back(std::stod(line.substr(last_comma + 1)));
    }

    auto need = [&](const std::string& key) -> const std::string& {
        auto it = keys.find(key);
        if (it == keys.end())
            throw std::runtime_error("missing '" + key + "' header in " + path.string());
        return it->second;
    };

    LoadedSolution loaded;
    ProblemSpec spec;
    const std::string domain = need("domain");
    if (domain == "square" || domain == "rectangle")
        spec.domain = RectangleDomain{std::stod(need("width")), std::stod(need("height"))};
    else if (domain.rfind("ball", 0) == 0)
        spec.domain = BallDomain{std::stoi(need("n"))};
    else
        throw std::runtime_error("unknown domain '" + domain + "' in " + path.string());
    spec.p = std::stod(need("p"));
    spec.resolution = std::stoi(need("resolution"));
    spec.seed = std::stoull(need("seed"));
    loaded.spec = spec;
    loaded.lambda = std::stod(need("Lambda"));
    loaded.cp = std::stod(need("Cp"));
    loaded.u = NodalField::Zero(static_cast<Eigen::Index>(values.size()));
    for (size_t i = 0; i < values.size(); ++i) loaded.u[static_cast<Eigen::Index>(i)] = values[i];
    return loaded;
}

RunConfig preset_config(const std::string& name) {
    RunConfig config;
    if (name == "square") {
        config.base.domain = RectangleDomain{1.0, 1.0};
        config.base.resolution = 32;
        config.base.p = 4.0;
        config.p_values = {2.5, 3.0, 4.0, 6.0, 8.0};
    } else if (name == "rect1x4") {
        config.base.domain = RectangleDomain{1.0, 4.0};
        config.base.resolution = 16;
        config.base.p = 4.0;
        config.p_values = {2.5, 3.0, 4.0, 6.0, 8.0};
    } else if (name == "ball4") {
        config.base.domain = BallDomain{4};
        config.base.resolution = 64;
        config.base.p = 3.0;
        config.p_values = {2.5, 3.0, 3.5, 3.8};
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return config;
}

int cmd_solve(const RunConfig& config) {
    try {
        config.base.validate();
    } catch (const std::exception& e) {
        return usage_error(e.what());
    }
    const fs::path out = out_directory(config);
    std::error_code ec;
    fs::create_directories(out, ec);

    Discretization disc = Discretization::make(config.base);
    SolveReport report;
    try {
        report = solve(config.base, disc);
    } catch (const NoConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    write_solution_csv(out / "solution.csv", disc, report);
    write_report_csv(out / "report.csv", report);
    std::cout << "domain=" << domain_label(config.base.domain)
              << " p=" << format_double(config.base.p) << " Cp=" << format_double(report.cp)
              << " Lambda=" << format_double(report.lambda)
              << " iterations=" << report.iterations
              << " converged=" << (report.converged ? "true" : "false") << "\n";
    return report.converged ? 0 : 1;
}

int cmd_sweep(const RunConfig& config) {
    if (config.p_values.size() < 2)
        return usage_error("sweep needs at least two p values");
    for (size_t i = 0; i < config.p_values.size(); ++i)
        for (size_t j = i + 1; j < config.p_values.size(); ++j)
            if (config.p_values[i] == config.p_values[j])
                return usage_error("sweep p values must be distinct");
    ProblemSpec probe = config.base;
    for (double p : config.p_values) {
        probe.p = p;
        try {
            probe.validate();
        } catch (const std::exception& e) {
            return usage_error(e.what());
        }
    }

    const fs::path out = out_directory(config);
    std::error_code ec;
    fs::create_directories(out, ec);

    Discretization disc = Discretization::make(config.base);
    const std::vector<double> grid = default_t_grid();
    std::vector<DistributionCurve> curves;
    bool all_converged = true;
    for (double p : config.p_values) {
        ProblemSpec spec = config.base;
        spec.p = p;
        SolveReport report;
        try {
            report = solve(spec, disc);
        } catch (const NoConvergenceError& e) {
            std::cout << "p=" << format_double(p) << " failed: " << e.what() << "\n";
            all_converged = false;
            continue;
        }
        std::cout << "p=" << format_double(p) << " Cp=" << format_double(report.cp)
                  << " iterations=" << report.iterations
                  << " converged=" << (report.converged ? "true" : "false") << "\n";
        if (!report.converged) {
            all_converged = false;
            continue;
        }
        curves.push_back(distribution(disc, report.u, p, grid));
    }

    write_distributions_csv(out / "distributions.csv", curves);
    if (curves.size() >= 2) {
        MonotonicityReport mono = monotonicity_report(curves);
        write_monotonicity_csv(out / "monotonicity.csv", mono);
        std::cout << "verdict: " << mono.verdict() << " (" << mono.violations
                  << " violations in " << mono.tested << " tested rows)\n";
    } else {
        std::cout << "verdict: NOT-CONSISTENT (fewer than two converged curves)\n";
        all_converged = false;
    }
    return all_converged ? 0 : 1;
}

int cmd_verify(const RunConfig& config) {
    const fs::path out = out_directory(config);
    std::error_code ec;
    fs::create_directories(out, ec);

    NodalField u;
    double lambda = 0.0;
    double p = 0.0;
    std::optional<Discretization> disc;
    if (!config.input_csv.empty()) {
        LoadedSolution loaded;
        try {
            loaded = read_solution_csv(config.input_csv);
            loaded.spec.validate();
            disc.emplace(Discretization::make(loaded.spec));
        } catch (const std::exception& e) {
            return usage_error(e.what());
        }
        if (loaded.u.size() != disc->n_nodes())
            return usage_error("solution row count does not match the mesh");
        u = loaded.u;
        lambda = loaded.lambda;
        p = loaded.spec.p;
    } else {
        try {
            config.base.validate();
        } catch (const std::exception& e) {
            return usage_error(e.what());
        }
        disc.emplace(Discretization::make(config.base));
        SolveReport report;
        try {
            report = solve(config.base, *disc);
        } catch (const NoConvergenceError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        u = report.u;
        lambda = report.lambda;
        p = config.base.p;
    }

    if (config.corrupt_square) u = u.cwiseProduct(u);

    ResidualReport residuals = residual_report(*disc, u, lambda, p,
                                               config.base.n_test_functions,
                                               config.base.seed);
    write_residuals_csv(out / "residuals.csv", residuals);
    std::cout << "residuals: mean=" << format_double(residuals.mean_abs)
              << " max=" << format_double(residuals.max_abs) << " count=" << residuals.count
              << "\n";
    return 0;
}

}  // namespace esf
