// qslab: command-line experiments for the eight-mode quasi-stationary
// vorticity model and its truncated-Galerkin reference.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "qslab/bounds.hpp"
#include "qslab/csv.hpp"
#include "qslab/manifold.hpp"
#include "qslab/observables.hpp"
#include "qslab/perturbation.hpp"
#include "qslab/scenario.hpp"
#include "qslab/spectral_ref.hpp"

using namespace qslab;

namespace {

int emit(const RunResult& res, bool quiet_csv) {
    if (!quiet_csv && res.out_path.empty()) std::cout << res.csv;
    for (const auto& line : res.report) std::cout << line << '\n';
    if (!res.out_path.empty()) std::cout << "wrote " << res.out_path << '\n';
    return res.exit_code;
}

std::vector<double> parse_init(const std::string& text) {
    std::vector<double> vals;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) vals.push_back(std::stod(tok));
    return vals;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-stationary state selection experiments"};
    app.require_subcommand(1);

    Scenario sc;
    std::string model = "reduced", init_text, config_path, certify;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--nu", sc.nu, "viscosity");
        cmd->add_option("--delta", sc.delta, "aspect ratio");
        cmd->add_option("--eps", sc.eps, "perturbation parameter");
        cmd->add_option("--eps0", sc.eps0, "sign of delta-1 (+1/-1)");
        cmd->add_option("--nu0", sc.nu0, "scaled viscosity");
        cmd->add_option("--alpha", sc.alpha, "scaling exponent (> 1/2)");
        cmd->add_option("--t-end", sc.t_end, "horizon");
        cmd->add_option("--dt", sc.dt, "step (0 = model default)");
        cmd->add_option("--stride", sc.stride, "sample stride (0 = auto)");
        cmd->add_option("--seed", sc.seed, "seed for generic initial data");
        cmd->add_option("--K", sc.K, "spectral truncation radius");
        cmd->add_option("--amplitude", sc.init_amplitude, "seeded init scale");
        cmd->add_option("--init", init_text, "explicit initial data v1,v2,...");
        cmd->add_option("--out", sc.out, "output CSV path");
        cmd->add_option("--config", config_path, "key=value configuration file");
        cmd->add_flag("--strict", sc.strict, "exit 4 on certificate failure");
    };

    auto* sim = app.add_subcommand("simulate", "integrate a model and emit CSV");
    sim->add_option("--model", model, "reduced|observable|scaled|spectral");
    sim->add_option("--certify", certify, "also run certificates: symmetric|asymmetric|ratio");
    add_common(sim);

    auto* cert = app.add_subcommand("certify", "run decay certificates on a reduced run");
    cert->add_option("kind", certify, "symmetric|asymmetric|ratio")->required();
    add_common(cert);

    auto* mres = app.add_subcommand("manifold-residual",
                                    "stable-manifold residual scaling study");
    double mr_r = 2.0, mr_nu = 0.1;
    std::size_t mr_dirs = 32;
    std::string mr_scales = "1e-2,5e-3,2.5e-3,1.25e-3";
    std::uint64_t mr_seed = 1;
    mres->add_option("--r", mr_r, "base fixed point");
    mres->add_option("--nu", mr_nu, "viscosity");
    mres->add_option("--dirs", mr_dirs, "number of directions");
    mres->add_option("--scales", mr_scales, "comma-separated scales");
    mres->add_option("--seed", mr_seed, "direction-set seed");

    auto* pert = app.add_subcommand("perturb", "slow-fast expansion experiments");
    pert->require_subcommand(1);
    double px0 = 0.6, py0 = 0.4, ptaua = 0.1, ptaub = 1.0, pdt = 1e-3;
    std::string peps_list = "0.04,0.02,0.01";
    auto* pcomp = pert->add_subcommand("compare", "numeric vs asymptotic magnitudes");
    auto* psweep = pert->add_subcommand("sweep", "error table over an epsilon list");
    auto* pcrit = pert->add_subcommand("critical-times", "expansion validity horizons");
    for (auto* cmd : {pcomp, psweep, pcrit}) {
        cmd->add_option("--eps", sc.eps, "perturbation parameter");
        cmd->add_option("--eps-list", peps_list, "comma-separated eps values (sweep)");
        cmd->add_option("--eps0", sc.eps0, "+1 or -1");
        cmd->add_option("--nu0", sc.nu0, "scaled viscosity");
        cmd->add_option("--alpha", sc.alpha, "scaling exponent");
        cmd->add_option("--x0", px0, "X0(0) = |Omega10(0)|^2");
        cmd->add_option("--y0", py0, "Y0(0) = |Omega30(0)|^2");
        cmd->add_option("--tau-a", ptaua, "window start");
        cmd->add_option("--tau-b", ptaub, "window end");
        cmd->add_option("--dt", pdt, "integration step in tau");
        cmd->add_option("--out", sc.out, "output CSV path");
    }

    auto* prst = app.add_subcommand("preset", "run a named figure preset");
    std::string preset_name;
    prst->add_option("name", preset_name, "figAB|figR|figlogA|figlogB")->required();
    prst->add_option("--seed", sc.seed, "seed");
    prst->add_option("--out", sc.out, "output path (multi-run presets get suffixes)");
    prst->add_flag("--strict", sc.strict, "exit 4 on certificate failure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;  // invalid invocation
    }

    try {
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) {
                std::cerr << "ERROR cannot open config " << config_path << "\n";
                return 2;
            }
            Scenario merged;  // defaults, then the file
            apply_config(merged, f);
            // fields the user set on the command line win over the file
            CLI::App* active = sim->parsed() ? sim : cert;
            auto used = [&](const std::string& n) { return active->count(n) > 0; };
            if (used("--nu")) merged.nu = sc.nu;
            if (used("--delta")) merged.delta = sc.delta;
            if (used("--eps")) merged.eps = sc.eps;
            if (used("--eps0")) merged.eps0 = sc.eps0;
            if (used("--nu0")) merged.nu0 = sc.nu0;
            if (used("--alpha")) merged.alpha = sc.alpha;
            if (used("--K")) merged.K = sc.K;
            if (used("--t-end")) merged.t_end = sc.t_end;
            if (used("--dt")) merged.dt = sc.dt;
            if (used("--stride")) merged.stride = sc.stride;
            if (used("--seed")) merged.seed = sc.seed;
            if (used("--amplitude")) merged.init_amplitude = sc.init_amplitude;
            if (used("--out")) merged.out = sc.out;
            if (sc.strict) merged.strict = true;
            sc = merged;
        }
        if (!init_text.empty()) sc.init = parse_init(init_text);

        if (sim->parsed() || cert->parsed()) {
            if (sim->parsed()) {
                if (model == "reduced") sc.model = ModelKind::Reduced;
                else if (model == "observable") sc.model = ModelKind::Observable;
                else if (model == "scaled") sc.model = ModelKind::Scaled;
                else if (model == "spectral") sc.model = ModelKind::Spectral;
                else {
                    std::cerr << "ERROR unknown model " << model << "\n";
                    return 2;
                }
            } else {
                sc.model = ModelKind::Reduced;
            }
            if (!certify.empty()) sc.outputs.push_back("cert:" + certify);
            return emit(run(sc), /*quiet_csv=*/false);
        }

        if (mres->parsed()) {
            const auto dirs = unit_directions(mr_dirs, mr_seed);
            const auto scales = parse_init(mr_scales);
            std::printf("scale,max_residual\n");
            std::vector<double> logs, logr;
            for (const double s : scales) {
                double worst = 0.0;
                for (const auto& d : dirs)
                    worst = std::max(worst, manifold_residual(mr_r, mr_nu, d, s));
                std::printf("%s,%s\n", format_g17(s).c_str(), format_g17(worst).c_str());
            }
            double min_slope = 1e300;
            for (const auto& d : dirs) {
                std::vector<double> ls, lr;
                for (const double s : scales) {
                    const double rres = manifold_residual(mr_r, mr_nu, d, s);
                    if (rres <= 0.0) continue;
                    ls.push_back(std::log(s));
                    lr.push_back(rres);
                }
                if (ls.size() >= 2) min_slope = std::min(min_slope, fit_log_slope(ls, lr));
            }
            std::printf("min log-log slope over %zu directions: %.6f\n", dirs.size(),
                        min_slope);
            return 0;
        }

        if (pert->parsed()) {
            PerturbationConfig cfg{sc.eps, sc.eps0, sc.nu0, sc.alpha};
            AsymptoticInit init{std::sqrt(px0), std::sqrt(py0), 0.0, 0.0};
            if (pcrit->parsed()) {
                const auto sol = asymptotic_solution(init, cfg);
                const auto ct = critical_times(sol);
                std::printf("tau_plus=%s tau_minus=%s K=%s\n",
                            format_g17(ct.tau_plus).c_str(),
                            format_g17(ct.tau_minus).c_str(), format_g17(sol.K()).c_str());
                return 0;
            }
            if (pcomp->parsed()) {
                const auto rows = convergence_study({sc.eps}, sc.eps0, sc.nu0, sc.alpha,
                                                    init, ptaua, ptaub, pdt);
                std::printf("eps,max_err_X,max_err_Y\n%s,%s,%s\n",
                            format_g17(rows[0].epsilon).c_str(),
                            format_g17(rows[0].max_err_X).c_str(),
                            format_g17(rows[0].max_err_Y).c_str());
                return 0;
            }
            const auto eps_list = parse_init(peps_list);
            const auto rows = convergence_study(eps_list, sc.eps0, sc.nu0, sc.alpha, init,
                                                ptaua, ptaub, pdt);
            std::printf("eps,max_err_X,max_err_Y,ratio_X,ratio_Y\n");
            for (std::size_t i = 0; i < rows.size(); ++i) {
                std::printf("%s,%s,%s", format_g17(rows[i].epsilon).c_str(),
                            format_g17(rows[i].max_err_X).c_str(),
                            format_g17(rows[i].max_err_Y).c_str());
                if (i > 0)
                    std::printf(",%s,%s",
                                format_g17(rows[i - 1].max_err_X / rows[i].max_err_X).c_str(),
                                format_g17(rows[i - 1].max_err_Y / rows[i].max_err_Y).c_str());
                std::printf("\n");
            }
            return 0;
        }

        if (prst->parsed()) {
            int worst = 0;
            const auto list = make_preset(preset_name, sc.seed);
            for (const auto& base : list) {
                Scenario s = base;
                s.strict = sc.strict;
                if (!sc.out.empty())
                    s.out = list.size() == 1 ? sc.out : s.name + "_" + sc.out;
                else
                    s.out = s.name + ".csv";
                const auto res = run(s);
                for (const auto& line : res.report) std::cout << line << '\n';
                std::cout << "wrote " << res.out_path << '\n';
                worst = std::max(worst, res.exit_code);
            }
            return worst;
        }
    } catch (const std::exception& e) {
        std::cerr << "ERROR " << e.what() << "\n";
        return 2;
    }
    return 0;
}
