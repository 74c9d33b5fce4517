#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "esf/problem.hpp"

namespace esf {

struct DistributionCurve {
    double p = 0.0;
    std::string domain;
    double domain_measure = 0.0;
    std::vector<double> t_grid;
    std::vector<double> mu;
};

// 0.01 .. 0.99 step 0.01.
std::vector<double> default_t_grid();

// a = max over nodes and element sample points; returns (u/a, a).
std::pair<NodalField, double> normalize_sup(const Discretization& disc, const NodalField& u);

// Superlevel measures mu(t) = |{u > t}| for a sup-normalized field.
// Planar: 8x8 sample cells per element; radial: exact superlevel radius.
DistributionCurve distribution(const Discretization& disc, const NodalField& u, double p,
                               const std::vector<double>& t_grid);

// The quotient int |grad u|^2 / (int |u|^p)^(2/p), true-measure convention.
double compute_cp(const Discretization& disc, const NodalField& u, double p);

// Lambda = C_p * (int u^p)^((2-p)/p) for a sup-normalized extremal.
double compute_lambda(const Discretization& disc, const NodalField& u, double p);

struct ConstantsReport {
    double p = 0.0;
    double cp = 0.0;
    double lambda = 0.0;
    std::optional<double> torsional_rigidity;   // p=1: 1/C_1
    std::optional<double> principal_frequency;  // p=2: C_2
};

ConstantsReport constants_report(const Discretization& disc, const NodalField& u, double p);

struct MonotonicityRow {
    double p_low = 0.0;
    double p_high = 0.0;
    double t = 0.0;
    double diff = 0.0;   // mu_low(t) - mu_high(t)
    bool tested = false; // both curves above the floor at this t
    bool ok = true;      // tested implies diff > 0
};

struct MonotonicityReport {
    std::vector<MonotonicityRow> rows;
    double floor = 0.0;  // 1e-4 * |Omega|
    int violations = 0;
    int tested = 0;
    bool consistent = false;
    std::string verdict() const { return consistent ? "CONSISTENT" : "NOT-CONSISTENT"; }
};

// Pairwise p_low < p_high comparison over the shared grid. CONSISTENT when
// every tested row has a strictly positive difference and at least one row
// was tested.
MonotonicityReport monotonicity_report(const std::vector<DistributionCurve>& curves);

}  // namespace esf
