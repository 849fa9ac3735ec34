#include "shiftop/config.hpp"

#include "shiftop/chernoff.hpp"
#include "shiftop/oracles.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace shiftop {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {"a",  "b",      "c",         "u0",     "xmin",
                                               "xmax", "points", "extension", "t",      "n",
                                               "ns", "scheme", "oracle",    "out",    "target"};
    return keys;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

Config Config::load(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is)
        throw ConfigError("cannot open config file '" + file.string() + "'");
    return parse(is, file.stem().string());
}

Config Config::parse(std::istream& is, std::string name) {
    Config cfg;
    cfg.name_ = std::move(name);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": missing key before '='");
        if (!known_keys().count(key))
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (cfg.entries_.count(key))
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        if (value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty value for key '" + key +
                              "'");
        cfg.entries_[key] = {value, line_no};
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

const Config::Entry& Config::require(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError("missing required key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key) const { return require(key).value; }

double Config::get_number(const std::string& key) const {
    const std::string& v = require(key).value;
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || std::isnan(out))
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    return out;
}

int Config::get_int(const std::string& key) const {
    const std::string& v = require(key).value;
    int out = 0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    return out;
}

std::vector<int> Config::get_int_list(const std::string& key) const {
    const std::string& v = require(key).value;
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        const auto comma = v.find(',', pos);
        const std::string item =
            trim(v.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        int value = 0;
        const char* first = item.data();
        const char* last = item.data() + item.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (item.empty() || ec != std::errc() || ptr != last)
            throw ConfigError("key '" + key + "': expected a comma list of integers, got '" + v +
                              "'");
        out.push_back(value);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty())
        throw ConfigError("key '" + key + "': expected a nonempty list");
    return out;
}

ScalarField Config::get_field(const std::string& key) const {
    const std::string& v = require(key).value;
    try {
        return ScalarField::from_expression(v);
    } catch (const ParseError& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

Extension Config::get_extension(const std::string& key, Extension fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = require(key).value;
    if (v == "constant-hold") return Extension::ConstantHold;
    if (v == "periodic") return Extension::Periodic;
    if (v == "zero") return Extension::Zero;
    throw ConfigError("key '" + key + "': expected constant-hold, periodic, or zero, got '" + v +
                      "'");
}

InterpScheme Config::get_scheme(const std::string& key, InterpScheme fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = require(key).value;
    if (v == "linear") return InterpScheme::Linear;
    if (v == "cubic") return InterpScheme::Cubic;
    throw ConfigError("key '" + key + "': expected linear or cubic, got '" + v + "'");
}

OracleKind Config::get_oracle(const std::string& key) const {
    const std::string& v = require(key).value;
    if (v == "analytic-heat") return OracleKind::AnalyticHeat;
    if (v == "analytic-transport") return OracleKind::AnalyticTransport;
    if (v == "analytic-growth") return OracleKind::AnalyticGrowth;
    if (v == "crank-nicolson") return OracleKind::CrankNicolson;
    if (v == "tree") return OracleKind::Tree;
    if (v == "none") return OracleKind::None;
    throw ConfigError("key '" + key + "': unknown oracle '" + v + "'");
}

Scenario scenario_from_config(const Config& cfg, bool need_t, bool need_oracle) {
    const double xmin = cfg.get_number("xmin");
    const double xmax = cfg.get_number("xmax");
    const int points = cfg.get_int("points");

    Grid grid = [&] {
        try {
            return Grid(xmin, xmax, points);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("keys 'xmin'/'xmax'/'points': ") + e.what());
        }
    }();

    CoefficientSet coeffs =
        make_coefficient_set(cfg.get_field("a"), cfg.get_field("b"), cfg.get_field("c"), grid);

    double t = 0.0;
    if (need_t || cfg.has("t")) {
        t = cfg.get_number("t");
        if (!(t >= 0.0))
            throw ConfigError("key 't': must be nonnegative");
    }

    OracleKind oracle = OracleKind::None;
    if (need_oracle || cfg.has("oracle")) oracle = cfg.get_oracle("oracle");

    return Scenario{cfg.name(),
                    std::move(coeffs),
                    cfg.get_field("u0"),
                    grid,
                    cfg.get_extension("extension", Extension::ConstantHold),
                    cfg.get_scheme("scheme", InterpScheme::Cubic),
                    t,
                    oracle};
}

namespace cli {

namespace {

std::filesystem::path resolve_out(const Config& cfg, const std::string& sub,
                                  const std::string& out_dir) {
    std::filesystem::path out = cfg.has("out") ? std::filesystem::path(cfg.get_string("out"))
                                               : std::filesystem::path(cfg.name() + "." + sub +
                                                                       ".csv");
    if (!out_dir.empty()) out = std::filesystem::path(out_dir) / out.filename();
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os)
        throw ConfigError("cannot open output file '" + path.string() + "'");
    return os;
}

int run_solve(const Config& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err) {
    const Scenario s = scenario_from_config(cfg, true, false);
    const int n = cfg.get_int("n");
    if (n < 1)
        throw ConfigError("key 'n': must be at least 1");
    const GridFunction u0g = sample(s.u0, s.grid, s.extension);
    const SolveResult r = chernoff_solve(u0g, ChernoffParams{s.t, n, s.scheme}, s.coeffs);
    if (r.shifts.exit_fraction() > 0.01) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "warning: %.2f%% of shift targets left the window (extension policy applied)",
                      100.0 * r.shifts.exit_fraction());
        err << buf << '\n';
    }
    const auto path = resolve_out(cfg, "solve", out_dir);
    auto os = open_out(path);
    write_csv(r.u, os);
    out << "wrote " << path.string() << '\n';
    return 0;
}

int run_converge(const Config& cfg, const std::string& out_dir, std::ostream& out) {
    const Scenario s = scenario_from_config(cfg, true, true);
    const ConvergenceReport report = run_convergence(s, cfg.get_int_list("ns"));
    const auto path = resolve_out(cfg, "converge", out_dir);
    auto os = open_out(path);
    write_csv(report, os);
    out << "wrote " << path.string() << " (fitted rate " << report.fitted_rate << ")\n";
    return 0;
}

int run_tangency(const Config& cfg, const std::string& out_dir, std::ostream& out) {
    const Scenario s = scenario_from_config(cfg, false, false);
    const std::array<double, 4> taus = {1e-1, 1e-2, 1e-3, 1e-4};
    std::array<double, 4> residuals{};
    for (std::size_t i = 0; i < taus.size(); ++i)
        residuals[i] = tangency_residual(s.u0, taus[i], s.coeffs, s.grid);

    // least-squares slope of log(residual) against log(tau)
    double slope = 0.0;
    bool fitted = false;
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (std::size_t i = 0; i < taus.size(); ++i) {
            if (!(residuals[i] > 0.0)) continue;
            const double x = std::log(taus[i]);
            const double y = std::log(residuals[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++m;
        }
        if (m >= 2) {
            slope = (sxy - sx * sy / m) / (sxx - sx * sx / m);
            fitted = true;
        }
    }

    const auto path = resolve_out(cfg, "tangency", out_dir);
    auto os = open_out(path);
    char buf[192];
    std::snprintf(buf, sizeof buf, "# phi=%s slope=%.17g\n", s.u0.label().c_str(), slope);
    os << buf;
    if (!fitted) os << "# warning: slope not fitted (fewer than 2 positive residuals)\n";
    os << "tau,residual\n";
    for (std::size_t i = 0; i < taus.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", taus[i], residuals[i]);
        os << buf;
    }
    out << "wrote " << path.string() << " (slope " << slope << ")\n";
    return 0;
}

int run_bench(const Config& cfg, const std::string& out_dir, std::ostream& out) {
    const Scenario s = scenario_from_config(cfg, true, true);
    const double target = cfg.has("target") ? cfg.get_number("target") : 1e-2;
    if (!(target > 0.0))
        throw ConfigError("key 'target': must be positive (or inf)");
    const BenchmarkRecord record = run_benchmark(s, target);
    const auto path = resolve_out(cfg, "bench", out_dir);
    auto os = open_out(path);
    write_csv(record, os);
    out << "wrote " << path.string() << " (chernoff n=" << record.chernoff.param
        << " err=" << record.chernoff.error << " in " << record.chernoff.seconds
        << "s; crank_nicolson steps=" << record.crank_nicolson.param
        << " err=" << record.crank_nicolson.error << " in " << record.crank_nicolson.seconds
        << "s)\n";
    return 0;
}

} // namespace

int run(const std::string& subcommand, const std::string& config_path, const std::string& out_dir,
        std::ostream& out, std::ostream& err) {
    try {
        const Config cfg = Config::load(config_path);
        if (subcommand == "solve") return run_solve(cfg, out_dir, out, err);
        if (subcommand == "converge") return run_converge(cfg, out_dir, out);
        if (subcommand == "tangency") return run_tangency(cfg, out_dir, out);
        if (subcommand == "bench") return run_bench(cfg, out_dir, out);
        throw ConfigError("unknown subcommand '" + subcommand + "'");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace cli

} // namespace shiftop
