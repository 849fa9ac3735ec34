#include "shiftop/config.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
    CLI::App app{"shiftop — shift-operator product-formula solver for\n"
                 "u_t = a(x)^2 u_xx + b(x) u_x + c(x) u on a truncated 1D window"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;

    const char* descriptions[][2] = {
        {"solve", "run one evolution and write the solution CSV"},
        {"converge", "error-vs-n study against the scenario oracle"},
        {"tangency", "step-operator tangency residuals over a tau ladder"},
        {"bench", "timing comparison against Crank-Nicolson at a target error"},
    };
    for (const auto& d : descriptions) {
        auto* sub = app.add_subcommand(d[0], d[1]);
        sub->add_option("config", config_path, "scenario config file (key=value lines)")
            ->required();
        sub->add_option("--out-dir", out_dir, "redirect the output CSV into this directory");
    }

    CLI11_PARSE(app, argc, argv);

    const std::string subcommand = app.get_subcommands().front()->get_name();
    return shiftop::cli::run(subcommand, config_path, out_dir);
}
