#pragma once

#include "shiftop/chernoff.hpp"
#include "shiftop/fields.hpp"
#include "shiftop/griddata.hpp"
#include "shiftop/oracles.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace shiftop {

enum class OracleKind : std::uint8_t {
    AnalyticHeat,      // a constant nonzero, b = c = 0, u0 = exp(-x²)
    AnalyticTransport, // b constant, a = c = 0
    AnalyticGrowth,    // c constant, a = b = 0
    CrankNicolson,     // fine Crank-Nicolson run on the scenario grid
    Tree,              // exact recursive expansion at probe nodes (small n only)
    None
};

/// A full problem instance: equation data, discretization, evolution time,
/// and the ground truth to measure against.
struct Scenario {
    std::string name;
    CoefficientSet coeffs;
    ScalarField u0;
    Grid grid;
    Extension extension = Extension::ConstantHold;
    InterpScheme scheme = InterpScheme::Cubic;
    double t = 0.0;
    OracleKind oracle = OracleKind::None;
};

/// Checks the oracle-specific coefficient requirements by sampling over
/// the grid (e.g. analytic-heat needs constant a and vanishing b, c).
/// Throws std::invalid_argument naming the offending field.
void validate_scenario(const Scenario& s);

/// Ground-truth values at every grid node for the fixed-reference oracles.
/// The Crank-Nicolson reference runs `cn_reference_steps` steps on the
/// scenario grid. Not defined for Tree (n-dependent) or None.
std::vector<double> oracle_values(const Scenario& s, int cn_reference_steps = 8192);

/// Inclusive node index range [first, last] of the middle half of the
/// window — the region where errors are measured, away from the window
/// truncation.
std::pair<int, int> interior_node_range(const Grid& g);

/// Max |u - ref| over the interior node range.
double interior_sup_difference(const GridFunction& u, const std::vector<double>& ref);

struct ConvergenceRow {
    int n = 0;
    double interior_sup_error = 0.0;
    double seconds = 0.0;
};

struct ConvergenceReport {
    std::string scenario;
    std::vector<ConvergenceRow> rows; // sorted by n ascending
    double fitted_rate = 0.0;         // 0 when not fittable (see warnings)
    std::vector<std::string> warnings;
};

/// Negative least-squares slope of log(error) against log(n). Needs at
/// least two rows, all errors positive.
double fit_rate(const std::vector<std::pair<int, double>>& rows);

/// Runs the solver for each n, measuring the interior sup error against
/// the scenario oracle and the wall time per run. With the Tree oracle the
/// error is taken over a small set of interior probe nodes (the expansion
/// costs 4^n per point) and each n must fit the tree budget.
ConvergenceReport run_convergence(const Scenario& s, std::vector<int> ns);

struct BenchmarkSide {
    bool reached = false;
    long param = 0;       // composition count n, or Crank-Nicolson steps
    double error = 0.0;   // interior sup error at param
    double seconds = 0.0; // best of 3 runs at param
};

/// One Remark-style timing comparison: cheapest parameter of each method
/// reaching the target interior error against the scenario oracle.
struct BenchmarkRecord {
    std::string scenario;
    double target_error = 0.0;
    BenchmarkSide chernoff;
    BenchmarkSide crank_nicolson;
};

/// Doubling search (1, 2, 4, ..., capped at max_param, default 2^20) for
/// the smallest n of the shift solver and the smallest step count of
/// Crank-Nicolson reaching the target error. An exhausted budget is
/// reported in the record, not fatal. Needs a fixed-reference oracle (not
/// Tree, not None).
BenchmarkRecord run_benchmark(const Scenario& s, double target_error, long max_param = 1L << 20);

/// CSV: comment header with scenario name and fitted rate, then
/// "n,error,seconds" rows. Errors carry full precision; timings do not
/// take part in any determinism guarantee.
void write_csv(const ConvergenceReport& r, std::ostream& os);

/// CSV: comment header with scenario and target, then
/// "method,param,error,seconds,reached" rows.
void write_csv(const BenchmarkRecord& r, std::ostream& os);

} // namespace shiftop
