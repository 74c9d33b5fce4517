#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "esf/experiments.hpp"

namespace {

struct Flags {
    std::string preset;
    std::string domain = "rect";
    double width = 1.0;
    double height = 1.0;
    int dim = 2;
    double p = 4.0;
    std::vector<double> p_list;
    int resolution = 32;
    double descent_tol = 1e-6;
    double solver_tol = 1e-10;
    int max_iters = 500;
    int max_halvings = 30;
    std::uint64_t seed = 1;
    int tests = 20;
    std::string out;
    std::string input;
    bool corrupt_square = false;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
    cmd->set_config("--config");
    cmd->add_option("--preset", f.preset, "Named configuration: square, rect1x4, ball4")
        ->check(CLI::IsMember({"square", "rect1x4", "ball4"}));
    cmd->add_option("--domain", f.domain, "Domain kind: rect or ball")
        ->check(CLI::IsMember({"rect", "ball"}));
    cmd->add_option("--width", f.width, "Rectangle width");
    cmd->add_option("--height", f.height, "Rectangle height");
    cmd->add_option("--dim", f.dim, "Ball dimension n >= 2");
    cmd->add_option("--p", f.p, "Exponent of the constrained norm");
    cmd->add_option("--resolution", f.resolution,
                    "Elements along the first side (rect) or the radius (ball)");
    cmd->add_option("--descent-tol", f.descent_tol, "Descent stopping tolerance");
    cmd->add_option("--solver-tol", f.solver_tol, "Linear solver tolerance");
    cmd->add_option("--max-iters", f.max_iters, "Iteration cap");
    cmd->add_option("--max-halvings", f.max_halvings, "Line search halving cap");
    cmd->add_option("--seed", f.seed, "Base seed for the residual test functions");
    cmd->add_option("--tests", f.tests, "Number of residual test functions");
    cmd->add_option("--out", f.out, "Output directory (default: EXTREMAL_OUT_DIR or .)");
}

esf::RunConfig build_config(const CLI::App* cmd, const Flags& f) {
    auto given = [cmd](const std::string& name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };

    esf::RunConfig config;
    if (!f.preset.empty()) config = esf::preset_config(f.preset);

    if (given("--domain")) {
        if (f.domain == "rect")
            config.base.domain = esf::RectangleDomain{f.width, f.height};
        else
            config.base.domain = esf::BallDomain{f.dim};
    }
    if (given("--width") || given("--height")) {
        auto* rect = std::get_if<esf::RectangleDomain>(&config.base.domain);
        if (!rect)
            throw CLI::ValidationError("--width/--height apply to rectangle domains only");
        if (given("--width")) rect->width = f.width;
        if (given("--height")) rect->height = f.height;
    }
    if (given("--dim")) {
        auto* ball = std::get_if<esf::BallDomain>(&config.base.domain);
        if (!ball) throw CLI::ValidationError("--dim applies to ball domains only");
        ball->dim = f.dim;
    }

    if (given("--p")) config.base.p = f.p;
    if (given("--resolution")) config.base.resolution = f.resolution;
    if (given("--descent-tol")) config.base.descent_tol = f.descent_tol;
    if (given("--solver-tol")) config.base.solver_tol = f.solver_tol;
    if (given("--max-iters")) config.base.max_iters = f.max_iters;
    if (given("--max-halvings")) config.base.max_halvings = f.max_halvings;
    if (given("--seed")) config.base.seed = f.seed;
    if (given("--tests")) config.base.n_test_functions = f.tests;
    if (given("--p-list")) config.p_values = f.p_list;
    if (given("--out")) config.out_dir = f.out;
    if (given("--input")) config.input_csv = f.input;
    config.corrupt_square = f.corrupt_square;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extremal Sobolev functions on rectangles and balls"};
    app.require_subcommand(1);

    Flags flags;
    CLI::App* solve_cmd =
        app.add_subcommand("solve", "Compute the extremal for one exponent");
    add_common_flags(solve_cmd, flags);

    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Solve a list of exponents and compare distribution functions");
    add_common_flags(sweep_cmd, flags);
    sweep_cmd->add_option("--p-list", flags.p_list, "Comma-separated exponents")
        ->delimiter(',');

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Weak-form residuals against random test functions");
    add_common_flags(verify_cmd, flags);
    verify_cmd->add_option("--input", flags.input, "Existing solution.csv to check");
    verify_cmd->add_flag("--corrupt-square", flags.corrupt_square,
                         "Negative control: square the field before checking");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve_cmd->parsed()) return esf::cmd_solve(build_config(solve_cmd, flags));
        if (sweep_cmd->parsed()) return esf::cmd_sweep(build_config(sweep_cmd, flags));
        return esf::cmd_verify(build_config(verify_cmd, flags));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
