#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curvemom/errors.hpp"
#include "curvemom/fmt_util.hpp"
#include "curvemom/recipes.hpp"

namespace {

using curvemom::RunConfig;

void add_common_options(CLI::App& app, RunConfig& cfg, std::string& ground) {
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--freq-start", cfg.freq_start, "sweep start, Hz");
    app.add_option("--freq-stop", cfg.freq_stop, "sweep stop, Hz");
    app.add_option("--freq-points", cfg.freq_points, "sweep point count");
    app.add_option("--fc", cfg.geom.f_c, "design frequency, Hz");
    app.add_option("--l-ref", cfg.geom.L_ref, "total wire length, m");
    app.add_option("--l-straight", cfg.geom.L_straight, "straight-section length, m");
    app.add_option("--kappa", cfg.geom.kappa, "arc curvature, 1/m");
    app.add_option("--wire-radius", cfg.geom.wire_radius, "wire radius, m");
    app.add_option("--segments-per-wavelength", cfg.geom.segments_per_wavelength,
                   "mesh density at fc");
    app.add_option("--kappa-values", cfg.kappa_values, "curvature sweep grid, 1/m")
        ->delimiter(',');
    app.add_option("--l-straight-values", cfg.l_straight_values,
                   "straight-length sweep grid, m")
        ->delimiter(',');
    app.add_option("--n-elements", cfg.n_elements, "array element count");
    app.add_option("--spacing", cfg.spacing, "array spacing, m");
    app.add_option("--steer-theta-deg", cfg.steer_theta_deg, "steering angle from zenith");
    app.add_option("--threshold-db", cfg.threshold_db, "bandwidth threshold, dB");
    app.add_option("--z0", cfg.z0, "reference impedance, ohm");
    app.add_option("--ground", ground, "ground model")
        ->check(CLI::IsMember({"pec-infinite", "free-space"}));
    app.add_option("--formats", cfg.formats, "output formats (csv,s1p,json,svg)")
        ->delimiter(',');
}

void print_sweep(const curvemom::SweepReport& rep) {
    std::cout << rep.parameter << " sweep: " << rep.records.size() << " designs\n";
    for (const auto& r : rep.records) {
        std::cout << "  " << rep.parameter << " = " << curvemom::g6(r.param_value) << ": ";
        if (r.ok)
            std::cout << "best RL " << curvemom::g6(r.best_rl_db) << " dB, bandwidth "
                      << curvemom::g6(r.bandwidth_hz / 1e3) << " kHz, peak RG "
                      << curvemom::g6(r.peak_rg_dbi) << " dBi"
                      << (r.low_tip ? " [low tip]" : "") << "\n";
        else
            std::cout << "failed: " << r.error << "\n";
    }
    if (rep.best_index >= 0)
        std::cout << "best " << rep.parameter << ": "
                  << curvemom::g6(rep.records[rep.best_index].param_value) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thin-wire solver and design sweeps for a curved HF monopole"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string ground = "pec-infinite";
    add_common_options(app, cfg, ground);
    app.set_config("--config", "", "config file (TOML-style key = value)");

    CLI::App* sweep_kappa = app.add_subcommand("sweep-kappa", "return-loss sweep over curvature");
    CLI::App* sweep_straight =
        app.add_subcommand("sweep-straight", "return-loss sweep over straight-section length");
    CLI::App* compare =
        app.add_subcommand("compare", "curved design vs straight reference, end to end");
    CLI::App* array_cmd = app.add_subcommand("array", "12-element array solve, both designs");
    CLI::App* plot = app.add_subcommand("plot", "render CSV outputs as SVG");
    CLI::App* export_nec = app.add_subcommand("export-nec", "write the geometry as a NEC deck");

    std::vector<std::string> plot_inputs;
    plot->add_option("inputs", plot_inputs, "CSV files")->required();
    std::string nec_file = "design.nec";
    export_nec->add_option("--nec-file", nec_file, "output deck name");

    for (CLI::App* sub : {sweep_kappa, sweep_straight, compare, array_cmd, plot, export_nec})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    cfg.ground = (ground == "free-space") ? curvemom::GroundModel::FreeSpace
                                          : curvemom::GroundModel::InfinitePEC;

    try {
        if (sweep_kappa->parsed()) {
            curvemom::SweepReport rep = curvemom::cmd_sweep_kappa(cfg);
            print_sweep(rep);
            return rep.partial_failure() ? 2 : 0;
        }
        if (sweep_straight->parsed()) {
            curvemom::SweepReport rep = curvemom::cmd_sweep_straight(cfg);
            print_sweep(rep);
            return rep.partial_failure() ? 2 : 0;
        }
        if (compare->parsed()) {
            curvemom::CompareReport rep = curvemom::cmd_compare(cfg);
            std::cout << "straight: best RL " << curvemom::g6(rep.straight.best_rl_db)
                      << " dB, bandwidth " << curvemom::g6(rep.straight.bandwidth_hz / 1e3)
                      << " kHz, peak RG " << curvemom::g6(rep.straight.peak_rg_dbi) << " dBi\n";
            std::cout << "curved:   best RL " << curvemom::g6(rep.curved.best_rl_db)
                      << " dB, bandwidth " << curvemom::g6(rep.curved.bandwidth_hz / 1e3)
                      << " kHz, peak RG " << curvemom::g6(rep.curved.peak_rg_dbi) << " dBi\n";
            std::cout << "delta peak RG " << curvemom::g6(rep.delta_peak_rg_db)
                      << " dB, delta bandwidth " << curvemom::g6(rep.delta_bandwidth_hz / 1e3)
                      << " kHz\n";
            return rep.failed_points > 0 ? 2 : 0;
        }
        if (array_cmd->parsed()) {
            curvemom::ArrayCompareReport rep = curvemom::cmd_array(cfg);
            std::cout << "gain at steer: straight "
                      << curvemom::g6(rep.gain_at_steer_straight_dbi) << " dBi, curved "
                      << curvemom::g6(rep.gain_at_steer_curved_dbi) << " dBi, delta "
                      << curvemom::g6(rep.delta_gain_db) << " dB\n";
            std::cout << "backlobe: straight " << curvemom::g6(rep.backlobe_straight_dbi)
                      << " dBi, curved " << curvemom::g6(rep.backlobe_curved_dbi) << " dBi\n";
            return 0;
        }
        if (plot->parsed()) {
            curvemom::cmd_plot(plot_inputs, cfg.out_dir);
            return 0;
        }
        if (export_nec->parsed()) {
            curvemom::cmd_export_nec(cfg, nec_file);
            return 0;
        }
    } catch (const curvemom::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const curvemom::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const curvemom::GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
