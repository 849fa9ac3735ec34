#pragma once

#include "shiftop/study.hpp"

#include <filesystem>
#include <iosfwd>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace shiftop {

/// Config file problem; the message names the offending key or line.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat key=value scenario description. '#' starts a comment, whitespace
/// around '=' is ignored, unknown and duplicate keys are rejected.
///
/// Keys: a, b, c, u0 (expressions), xmin, xmax, t, target (numbers),
/// points, n (integers), ns (comma list of integers), extension
/// (constant-hold | periodic | zero), scheme (linear | cubic), oracle
/// (analytic-heat | analytic-transport | analytic-growth | crank-nicolson
/// | tree | none), out (path).
class Config {
public:
    static Config load(const std::filesystem::path& file);
    static Config parse(std::istream& is, std::string name);

    const std::string& name() const noexcept { return name_; }
    bool has(const std::string& key) const;

    // typed getters; every failure throws ConfigError naming the key
    std::string get_string(const std::string& key) const;
    double get_number(const std::string& key) const;        // accepts inf for target
    int get_int(const std::string& key) const;
    std::vector<int> get_int_list(const std::string& key) const;
    ScalarField get_field(const std::string& key) const;
    Extension get_extension(const std::string& key, Extension fallback) const;
    InterpScheme get_scheme(const std::string& key, InterpScheme fallback) const;
    OracleKind get_oracle(const std::string& key) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    const Entry& require(const std::string& key) const;

    std::string name_;
    std::map<std::string, Entry> entries_;
};

/// Builds the grid, coefficient set, initial datum and the rest of the
/// scenario from a config. `need_t`/`need_oracle` control which keys are
/// required for the subcommand at hand.
Scenario scenario_from_config(const Config& cfg, bool need_t, bool need_oracle);

namespace cli {

/// Executes one subcommand (solve | converge | tangency | bench) against a
/// config file and writes the result CSV. Returns the process exit code:
/// 0 on success, 1 with a one-line diagnostic on `err` otherwise. A
/// nonempty out_dir redirects the output file into that directory.
int run(const std::string& subcommand, const std::string& config_path,
        const std::string& out_dir = {}, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

} // namespace cli

} // namespace shiftop
