// Command-line driver for the rod-cooling study: inverse-source
// reconstruction, truncation sweeps, epsilon comparisons, CSV/SVG output.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "invsrc/experiment.hpp"

namespace {

invsrc::OperatorKind parse_operator(const std::string& name) {
    for (std::size_t i = 0; i < invsrc::catalog().size(); ++i)
        if (name == invsrc::catalog()[i].name) return static_cast<invsrc::OperatorKind>(i);
    throw CLI::ValidationError("--operator", "unknown operator '" + name + "' (see `invsrc operators`)");
}

struct SharedOptions {
    std::string operator_name = "involution";
    double epsilon = 0.9;
    double a = 0.0;
    double b = M_PI;
    double window = 12.0;
    std::size_t window_nodes = 513;
    double alpha = 1.0;
    double horizon = 5.0;
    std::vector<double> snapshots{0.5, 2.5, 4.5};
    std::size_t space_n = 401;
    std::size_t time_m = 4000;
    std::string out_dir = "out";
    bool plots = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--operator", operator_name, "operator name from the catalog")->capture_default_str();
        cmd->add_option("--epsilon", epsilon, "involution strength, |eps| < 1")->capture_default_str();
        cmd->add_option("--a", a, "interval left endpoint (dirichlet_laplacian)")->capture_default_str();
        cmd->add_option("--b", b, "interval right endpoint (dirichlet_laplacian)")->capture_default_str();
        cmd->add_option("--window", window, "half-width of the oscillator window")->capture_default_str();
        cmd->add_option("--window-nodes", window_nodes, "quadrature nodes on the oscillator window")
            ->capture_default_str();
        cmd->add_option("--alpha", alpha, "Caputo order in (0, 1]; 1 = heat equation")->capture_default_str();
        cmd->add_option("--horizon", horizon, "terminal time T")->capture_default_str();
        cmd->add_option("--snapshots", snapshots, "snapshot times in [0, T]")->delimiter(',')->capture_default_str();
        cmd->add_option("--space-n", space_n, "interior points of the verification grid")->capture_default_str();
        cmd->add_option("--time-m", time_m, "time steps of the verification oracle")->capture_default_str();
        cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
        cmd->add_flag("--plots", plots, "emit SVG plots next to the CSV tables");
    }

    invsrc::ExperimentConfig to_config() const {
        invsrc::ExperimentConfig cfg;
        cfg.op.kind = parse_operator(operator_name);
        cfg.op.epsilon = epsilon;
        cfg.op.a = a;
        cfg.op.b = b;
        cfg.op.window = window;
        cfg.op.window_nodes = window_nodes;
        cfg.alpha = invsrc::FractionalOrder(alpha);
        cfg.horizon = horizon;
        cfg.snapshot_times = snapshots;
        cfg.space_points = space_n;
        cfg.time_steps = time_m;
        cfg.output_dir = out_dir;
        cfg.emit_plots = plots;
        return cfg;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"inverse source reconstruction for diffusion and subdiffusion on (0, pi)"};
    app.require_subcommand(1);
    app.set_config("--config", "", "config file: key=value lines with [section] headers");

    SharedOptions run_opts, cmp_opts;
    std::vector<std::size_t> truncations{7, 10, 20};
    std::size_t compare_modes = 20;
    std::vector<double> epsilons;

    CLI::App* run = app.add_subcommand("run", "solve the inverse problem over a truncation sweep and verify");
    run_opts.attach(run);
    run->add_option("--modes", truncations, "series truncations, strictly increasing")
        ->delimiter(',')
        ->capture_default_str();

    CLI::App* cmp = app.add_subcommand("compare", "compare source energy and cooling across epsilon values");
    cmp_opts.attach(cmp);
    cmp->add_option("--epsilons", epsilons, "involution strengths to compare (>= 2)")->delimiter(',')->required();
    cmp->add_option("--modes", compare_modes, "series truncation shared by all rows")->capture_default_str();

    CLI::App* ops = app.add_subcommand("operators", "list the operator catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(ops)) {
            for (const auto& entry : invsrc::catalog())
                std::printf("%-34s %-14s %s\n", std::string(entry.name).c_str(),
                            entry.supported ? "supported" : "unsupported", std::string(entry.note).c_str());
            return 0;
        }
        if (app.got_subcommand(run)) {
            invsrc::ExperimentConfig cfg = run_opts.to_config();
            cfg.truncations = truncations;
            invsrc::Manifest manifest;
            try {
                manifest = invsrc::run_experiment(cfg);
            } catch (const std::invalid_argument& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return 1;
            } catch (const invsrc::UnsupportedOperatorError& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return 1;
            }
            for (const auto& f : manifest.files)
                std::printf("wrote %-28s role=%-13s crc32=%s\n", f.filename.c_str(), f.role.c_str(),
                            f.checksum.c_str());
            std::printf("manifest: %s\n", manifest.manifest_path.string().c_str());
            return 0;
        }
        // compare
        invsrc::ExperimentConfig cfg = cmp_opts.to_config();
        std::vector<invsrc::EnergyRow> rows;
        try {
            rows = invsrc::compare_energy(cfg, epsilons, compare_modes);
        } catch (const std::invalid_argument& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 1;
        } catch (const invsrc::UnsupportedOperatorError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 1;
        }
        std::printf("%10s %14s %14s %14s %14s\n", "epsilon", "||f||", "||u(t_last)||", "||u_free||", "verify_err");
        for (const auto& r : rows)
            std::printf("%10g %14.6g %14.6g %14.6g %14.3e\n", r.epsilon, r.f_l2,
                        r.u_l2.empty() ? 0.0 : r.u_l2.back(),
                        r.free_cooling_l2.empty() ? 0.0 : r.free_cooling_l2.back(), r.verify_error);
        std::printf("table: %s\n", (cfg.output_dir / "energy_compare.csv").string().c_str());
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
