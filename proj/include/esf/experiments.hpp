#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "esf/analysis.hpp"
#include "esf/mountain_pass.hpp"

namespace esf {

struct RunConfig {
    ProblemSpec base;
    std::vector<double> p_values;  // sweep list; solve/verify use base.p
    std::string out_dir;           // empty: EXTREMAL_OUT_DIR if set, else "."
    std::string input_csv;         // verify: prior solution file
    bool corrupt_square = false;   // verify: negative control, u <- u^2
};

// square | rect1x4 | ball4. Throws std::invalid_argument on unknown names.
RunConfig preset_config(const std::string& name);

// Exit codes: 0 ok, 1 non-convergence, 2 usage/config error.
int cmd_solve(const RunConfig& config);
int cmd_sweep(const RunConfig& config);
int cmd_verify(const RunConfig& config);

// 17 significant digits, '.' separator, no locale dependence.
std::string format_double(double v);

void write_solution_csv(const std::filesystem::path& path, const Discretization& disc,
                        const SolveReport& report);
void write_report_csv(const std::filesystem::path& path, const SolveReport& report);
void write_residuals_csv(const std::filesystem::path& path, const ResidualReport& report);
void write_distributions_csv(const std::filesystem::path& path,
                             const std::vector<DistributionCurve>& curves);
void write_monotonicity_csv(const std::filesystem::path& path,
                            const MonotonicityReport& report);

struct LoadedSolution {
    ProblemSpec spec;
    NodalField u;
    double lambda = 0.0;
    double cp = 0.0;
};

// Parse a solution.csv written by write_solution_csv.
LoadedSolution read_solution_csv(const std::filesystem::path& path);

}  // namespace esf
