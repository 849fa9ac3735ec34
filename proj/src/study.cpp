#include "shiftop/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace shiftop {

namespace {

double elapsed_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool sampled_zero(const ScalarField& f, const Grid& g, double tol = 1e-12) {
    for (int i = 0; i < g.points; ++i)
        if (std::fabs(f(g.node(i))) > tol) return false;
    return true;
}

bool sampled_constant(const ScalarField& f, const Grid& g, double& value, double tol = 1e-12) {
    value = f(g.node(0));
    for (int i = 1; i < g.points; ++i)
        if (std::fabs(f(g.node(i)) - value) > tol * std::max(1.0, std::fabs(value))) return false;
    return true;
}

double midpoint_value(const ScalarField& f, const Grid& g) {
    return f(g.node((g.points - 1) / 2));
}

} // namespace

void validate_scenario(const Scenario& s) {
    double v = 0.0;
    switch (s.oracle) {
        case OracleKind::AnalyticHeat: {
            if (!sampled_constant(s.coeffs.a, s.grid, v) || v == 0.0)
                throw std::invalid_argument("scenario '" + s.name +
                                            "': analytic-heat needs constant nonzero a");
            if (!sampled_zero(s.coeffs.b, s.grid))
                throw std::invalid_argument("scenario '" + s.name + "': analytic-heat needs b = 0");
            if (!sampled_zero(s.coeffs.c, s.grid))
                throw std::invalid_argument("scenario '" + s.name + "': analytic-heat needs c = 0");
            for (int i = 0; i < s.grid.points; ++i) {
                const double x = s.grid.node(i);
                if (std::fabs(s.u0(x) - std::exp(-x * x)) > 1e-12)
                    throw std::invalid_argument("scenario '" + s.name +
                                                "': analytic-heat needs u0 = exp(-x^2)");
            }
            return;
        }
        case OracleKind::AnalyticTransport:
            if (!sampled_zero(s.coeffs.a, s.grid))
                throw std::invalid_argument("scenario '" + s.name +
                                            "': analytic-transport needs a = 0");
            if (!sampled_constant(s.coeffs.b, s.grid, v))
                throw std::invalid_argument("scenario '" + s.name +
                                            "': analytic-transport needs constant b");
            if (!sampled_zero(s.coeffs.c, s.grid))
                throw std::invalid_argument("scenario '" + s.name +
                                            "': analytic-transport needs c = 0");
            return;
        case OracleKind::AnalyticGrowth:
            if (!sampled_zero(s.coeffs.a, s.grid))
                throw std::invalid_argument("scenario '" + s.name + "': analytic-growth needs a = 0");
            if (!sampled_zero(s.coeffs.b, s.grid))
                throw std::invalid_argument("scenario '" + s.name + "': analytic-growth needs b = 0");
            if (!sampled_constant(s.coeffs.c, s.grid, v))
                throw std::invalid_argument("scenario '" + s.name +
                                            "': analytic-growth needs constant c");
            return;
        case OracleKind::CrankNicolson:
            return;
        case OracleKind::Tree:
            if (!s.u0.expression_backed() || !s.coeffs.a.expression_backed() ||
                !s.coeffs.b.expression_backed() || !s.coeffs.c.expression_backed())
                throw std::invalid_argument("scenario '" + s.name +
                                            "': tree oracle needs expression-backed data");
            return;
        case OracleKind::None:
            return;
    }
}

std::vector<double> oracle_values(const Scenario& s, int cn_reference_steps) {
    validate_scenario(s);
    std::vector<double> ref(static_cast<std::size_t>(s.grid.points));
    switch (s.oracle) {
        case OracleKind::AnalyticHeat: {
            const double a0 = midpoint_value(s.coeffs.a, s.grid);
            for (int i = 0; i < s.grid.points; ++i)
                ref[static_cast<std::size_t>(i)] = heat_analytic(a0 * a0, s.t, s.grid.node(i));
            return ref;
        }
        case OracleKind::AnalyticTransport: {
            const double b0 = midpoint_value(s.coeffs.b, s.grid);
            for (int i = 0; i < s.grid.points; ++i)
                ref[static_cast<std::size_t>(i)] = transport_analytic(s.u0, b0, s.t, s.grid.node(i));
            return ref;
        }
        case OracleKind::AnalyticGrowth: {
            const double c0 = midpoint_value(s.coeffs.c, s.grid);
            for (int i = 0; i < s.grid.points; ++i)
                ref[static_cast<std::size_t>(i)] = growth_analytic(s.u0, c0, s.t, s.grid.node(i));
            return ref;
        }
        case OracleKind::CrankNicolson: {
            const GridFunction u0g = sample(s.u0, s.grid, s.extension);
            return crank_nicolson(u0g, s.coeffs, s.t, cn_reference_steps).values();
        }
        case OracleKind::Tree:
            throw std::invalid_argument("oracle_values: tree oracle is n-dependent");
        case OracleKind::None:
            throw std::invalid_argument("oracle_values: scenario has no oracle");
    }
    return ref;
}

std::pair<int, int> interior_node_range(const Grid& g) {
    const int span = g.points - 1;
    const int first = (span + 3) / 4;
    const int last = 3 * span / 4;
    if (first > last)
        throw std::invalid_argument("interior_node_range: grid too coarse");
    return {first, last};
}

double interior_sup_difference(const GridFunction& u, const std::vector<double>& ref) {
    const auto [first, last] = interior_node_range(u.grid());
    double worst = 0.0;
    for (int i = first; i <= last; ++i)
        worst = std::max(worst, std::fabs(u.values()[static_cast<std::size_t>(i)] -
                                          ref[static_cast<std::size_t>(i)]));
    return worst;
}

double fit_rate(const std::vector<std::pair<int, double>>& rows) {
    if (rows.size() < 2)
        throw std::invalid_argument("fit_rate: needs at least 2 rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, err] : rows) {
        if (n < 1 || !(err > 0.0))
            throw std::invalid_argument("fit_rate: needs n >= 1 and errors > 0");
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(rows.size());
    const double denom = sxx - sx * sx / m;
    if (denom == 0.0)
        throw std::invalid_argument("fit_rate: degenerate n values");
    return -(sxy - sx * sy / m) / denom;
}

namespace {

// Tree-oracle errors are taken over a few interior probes; a full sweep
// costs 4^n per node.
std::vector<int> tree_probe_indices(const Grid& g, int count = 9) {
    const auto [first, last] = interior_node_range(g);
    const int extent = last - first;
    count = std::min(count, extent + 1);
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        idx.push_back(first + (count == 1 ? 0 : extent * k / (count - 1)));
    return idx;
}

} // namespace

ConvergenceReport run_convergence(const Scenario& s, std::vector<int> ns) {
    if (ns.empty())
        throw std::invalid_argument("run_convergence: ns must be nonempty");
    for (int n : ns)
        if (n < 1) throw std::invalid_argument("run_convergence: every n must be at least 1");
    if (s.oracle == OracleKind::None)
        throw std::invalid_argument("run_convergence: scenario '" + s.name + "' has no oracle");
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    validate_scenario(s);
    const GridFunction u0g = sample(s.u0, s.grid, s.extension);

    std::vector<double> ref;
    if (s.oracle != OracleKind::Tree)
        ref = oracle_values(s);

    ConvergenceReport report;
    report.scenario = s.name;
    ShiftStats totals;

    for (int n : ns) {
        const ChernoffParams params{s.t, n, s.scheme};
        const auto t0 = std::chrono::steady_clock::now();
        const SolveResult run = chernoff_solve(u0g, params, s.coeffs);
        const double seconds = elapsed_seconds(t0);

        double err = 0.0;
        if (s.oracle == OracleKind::Tree) {
            for (int i : tree_probe_indices(s.grid)) {
                const double exact = tree_evaluate(s.grid.node(i), s.t, n, s.coeffs, s.u0);
                err = std::max(err,
                               std::fabs(run.u.values()[static_cast<std::size_t>(i)] - exact));
            }
        } else {
            err = interior_sup_difference(run.u, ref);
        }
        totals.targets += run.shifts.targets;
        totals.exits += run.shifts.exits;
        report.rows.push_back({n, err, seconds});
    }

    if (totals.exit_fraction() > 0.01) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "boundary exits: %.2f%% of shift targets left the window",
                      100.0 * totals.exit_fraction());
        report.warnings.emplace_back(buf);
    }

    std::vector<std::pair<int, double>> fit_rows;
    for (const auto& row : report.rows)
        if (row.interior_sup_error > 0.0) fit_rows.emplace_back(row.n, row.interior_sup_error);
    if (fit_rows.size() >= 2)
        report.fitted_rate = fit_rate(fit_rows);
    else
        report.warnings.emplace_back("rate not fitted: fewer than 2 rows with positive error");

    return report;
}

namespace {

struct SearchResult {
    bool reached = false;
    long param = 0;
    double error = 0.0;
    double single_run_seconds = 0.0;
};

template <class RunFn>
SearchResult doubling_search(double target, long max_param, RunFn&& run) {
    SearchResult r;
    for (long p = 1; p <= max_param; p *= 2) {
        const auto t0 = std::chrono::steady_clock::now();
        const double err = run(p);
        r.single_run_seconds = elapsed_seconds(t0);
        r.param = p;
        r.error = err;
        if (err <= target) {
            r.reached = true;
            return r;
        }
    }
    return r;
}

template <class RunFn>
double best_of_three_seconds(RunFn&& run, long param) {
    double best = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        (void)run(param);
        best = std::min(best, elapsed_seconds(t0));
    }
    return best;
}

} // namespace

BenchmarkRecord run_benchmark(const Scenario& s, double target_error, long max_param) {
    if (s.oracle == OracleKind::None)
        throw std::invalid_argument("run_benchmark: scenario '" + s.name + "' has no oracle");
    if (s.oracle == OracleKind::Tree)
        throw std::invalid_argument("run_benchmark: needs a fixed-reference oracle, not tree");
    if (std::isnan(target_error))
        throw std::invalid_argument("run_benchmark: target must be a number or infinity");
    validate_scenario(s);

    const std::vector<double> ref = oracle_values(s);
    const GridFunction u0g = sample(s.u0, s.grid, s.extension);

    auto run_chernoff = [&](long n) {
        const ChernoffParams params{s.t, static_cast<int>(n), s.scheme};
        return interior_sup_difference(chernoff_solve(u0g, params, s.coeffs).u, ref);
    };
    auto run_cn = [&](long steps) {
        return interior_sup_difference(crank_nicolson(u0g, s.coeffs, s.t, static_cast<int>(steps)),
                                       ref);
    };

    BenchmarkRecord record;
    record.scenario = s.name;
    record.target_error = target_error;

    const SearchResult ch = doubling_search(target_error, max_param, run_chernoff);
    record.chernoff = {ch.reached, ch.param, ch.error,
                       ch.reached ? best_of_three_seconds(run_chernoff, ch.param)
                                  : ch.single_run_seconds};

    const SearchResult cn = doubling_search(target_error, max_param, run_cn);
    record.crank_nicolson = {cn.reached, cn.param, cn.error,
                             cn.reached ? best_of_three_seconds(run_cn, cn.param)
                                        : cn.single_run_seconds};

    return record;
}

void write_csv(const ConvergenceReport& r, std::ostream& os) {
    char buf[192];
    std::snprintf(buf, sizeof buf, "# scenario=%s fitted_rate=%.17g\n", r.scenario.c_str(),
                  r.fitted_rate);
    os << buf;
    for (const auto& w : r.warnings) os << "# warning: " << w << '\n';
    os << "n,error,seconds\n";
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.6g\n", row.n, row.interior_sup_error,
                      row.seconds);
        os << buf;
    }
}

void write_csv(const BenchmarkRecord& r, std::ostream& os) {
    char buf[224];
    std::snprintf(buf, sizeof buf, "# scenario=%s target_error=%.17g\n", r.scenario.c_str(),
                  r.target_error);
    os << buf;
    os << "method,param,error,seconds,reached\n";
    const auto row = [&](const char* method, const BenchmarkSide& side) {
        std::snprintf(buf, sizeof buf, "%s,%ld,%.17g,%.6g,%d\n", method, side.param, side.error,
                      side.seconds, side.reached ? 1 : 0);
        os << buf;
    };
    row("chernoff", r.chernoff);
    row("crank_nicolson", r.crank_nicolson);
}

} // namespace shiftop
