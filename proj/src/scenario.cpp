#include "qslab/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qslab/bounds.hpp"
#include "qslab/csv.hpp"
#include "qslab/flows.hpp"
#include "qslab/perturbation.hpp"
#include "qslab/rng.hpp"
#include "qslab/spectral_ref.hpp"

namespace qslab {

std::string resolve_out_path(const std::string& path) {
    if (path.empty()) return path;
    const std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    if (const char* dir = std::getenv("QSLAB_OUT_DIR"); dir && *dir)
        return (std::filesystem::path(dir) / p).string();
    return path;
}

void apply_config(Scenario& sc, std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) continue;
        if (key == "nu") sc.nu = std::stod(val);
        else if (key == "delta") sc.delta = std::stod(val);
        else if (key == "eps") sc.eps = std::stod(val);
        else if (key == "eps0") sc.eps0 = std::stoi(val);
        else if (key == "nu0") sc.nu0 = std::stod(val);
        else if (key == "alpha") sc.alpha = std::stod(val);
        else if (key == "K") sc.K = std::stoi(val);
        else if (key == "t_end") sc.t_end = std::stod(val);
        else if (key == "dt") sc.dt = std::stod(val);
        else if (key == "stride") sc.stride = std::stoul(val);
        else if (key == "seed") sc.seed = std::stoull(val);
        else if (key == "amplitude") sc.init_amplitude = std::stod(val);
        else if (key == "strict") sc.strict = (val == "1" || val == "true");
        else if (key == "out") sc.out = val;
        else if (key == "model") {
            if (val == "reduced") sc.model = ModelKind::Reduced;
            else if (val == "observable") sc.model = ModelKind::Observable;
            else if (val == "scaled") sc.model = ModelKind::Scaled;
            else if (val == "spectral") sc.model = ModelKind::Spectral;
            else throw std::invalid_argument("config: unknown model " + val);
        } else if (key == "init") {
            sc.init.clear();
            std::istringstream vs(val);
            std::string tok;
            while (std::getline(vs, tok, ',')) sc.init.push_back(std::stod(tok));
        } else if (key == "certify") {
            sc.outputs.push_back("cert:" + val);
        } else {
            throw std::invalid_argument("config: unknown key " + key);
        }
    }
}

namespace {

std::vector<double> seeded_mode_init(std::uint64_t seed, double amplitude) {
    SplitMix64 rng(seed);
    std::vector<double> y;
    y.reserve(8);
    const double s = amplitude / std::sqrt(2.0);
    for (int i = 0; i < 8; ++i) y.push_back(s * rng.gaussian());
    return y;
}

std::size_t default_stride(double t_end, double dt) {
    const double steps = t_end / dt;
    return std::max<std::size_t>(1, static_cast<std::size_t>(steps / 2000.0));
}

std::string log_csv(const Trajectory& traj, const Scenario& sc, bool use_A) {
    const ModeState s0 = ModeState::from_flat(traj.states.front().data());
    const double A0 = s0.low_energy(), B0 = s0.high_energy();
    double Amax = 0.0;
    for (const auto& st : traj.states)
        Amax = std::max(Amax, ModeState::from_flat(st.data()).low_energy());
    const double e2 = std::exp(2.0);
    std::vector<double> t, q, logq, ref;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const ModeState s = ModeState::from_flat(traj.states[i].data());
        const double v = use_A ? s.low_energy() : s.high_energy();
        if (!(v > 0.0)) continue;
        t.push_back(traj.times[i]);
        q.push_back(v);
        logq.push_back(std::log(v));
        ref.push_back(use_A ? std::log(Amax) - 2.0 * sc.nu * traj.times[i]
                            : std::log(B0) -
                                  2.0 * A0 / (5.0 * sc.nu * e2) * traj.times[i]);
    }
    if (use_A) return columns_csv({"t", "A", "log_A", "ref_log"}, {t, q, logq, ref});
    return columns_csv({"t", "B", "log_B", "fast_log"}, {t, q, logq, ref});
}

RunResult run_impl(const Scenario& sc) {
    RunResult res;
    if (!(sc.t_end > 0.0)) throw std::invalid_argument("scenario: t_end must be > 0");

    Trajectory traj;
    bool reduced_like = false;  // states are flat ModeStates

    switch (sc.model) {
        case ModelKind::Reduced: {
            ModelParams p{sc.nu, sc.delta};
            p.validate();
            std::vector<double> y0 = sc.init;
            if (y0.empty())
                y0 = seeded_mode_init(sc.seed, sc.init_amplitude > 0.0 ? sc.init_amplitude
                                                                       : 0.5 * sc.nu);
            if (y0.size() != 8)
                throw std::invalid_argument("scenario: reduced init needs 8 components");
            const double dt = sc.dt > 0.0 ? sc.dt : default_reduced_dt(sc.nu);
            TimeGrid grid{0.0, sc.t_end, dt,
                          sc.stride ? sc.stride : default_stride(sc.t_end, dt)};
            traj = integrate(reduced_flow(p), y0, grid, "reduced", params_note(p));
            reduced_like = true;
            break;
        }
        case ModelKind::Observable: {
            ModelParams p{sc.nu, sc.delta};
            p.validate();
            std::vector<double> y0 = sc.init;
            if (y0.empty()) {
                const auto m = seeded_mode_init(
                    sc.seed, sc.init_amplitude > 0.0 ? sc.init_amplitude : 0.5 * sc.nu);
                const auto o = to_observables(ModeState::from_flat(m.data()));
                const auto f = o.flat();
                y0.assign(f.begin(), f.end());
            }
            if (y0.size() != 8)
                throw std::invalid_argument("scenario: observable init needs 8 components");
            if (!(y0[0] >= kChartFloor))
                throw std::invalid_argument(
                    "scenario: refusing to start the observable model in a degenerate chart");
            const double dt = sc.dt > 0.0 ? sc.dt : default_reduced_dt(sc.nu);
            TimeGrid grid{0.0, sc.t_end, dt,
                          sc.stride ? sc.stride : default_stride(sc.t_end, dt)};
            traj = integrate(observable_flow(p), y0, grid, "observable", params_note(p));
            break;
        }
        case ModelKind::Scaled: {
            PerturbationConfig cfg{sc.eps, sc.eps0, sc.nu0, sc.alpha};
            cfg.validate();
            std::vector<double> y0 = sc.init;
            if (y0.empty())
                y0 = seeded_mode_init(sc.seed,
                                      sc.init_amplitude > 0.0 ? sc.init_amplitude : 0.5);
            if (y0.size() != 8)
                throw std::invalid_argument("scenario: scaled init needs 8 components");
            const double dt = sc.dt > 0.0 ? sc.dt : std::min(1e-3, sc.eps / 10.0);
            TimeGrid grid{0.0, sc.t_end, dt,
                          sc.stride ? sc.stride : default_stride(sc.t_end, dt)};
            std::ostringstream note;
            note << "eps=" << sc.eps << " eps0=" << sc.eps0 << " nu0=" << sc.nu0
                 << " alpha=" << sc.alpha;
            traj = integrate(scaled_flow(cfg, 1), y0, grid, "scaled", note.str());
            reduced_like = true;  // same eight flat components
            break;
        }
        case ModelKind::Spectral: {
            ModelParams p{sc.nu, sc.delta};
            p.validate();
            const double amp = sc.init_amplitude > 0.0 ? sc.init_amplitude : sc.nu;
            const FourierField f0 = random_field(sc.seed, sc.K, sc.delta, amp);
            const SpectralOperator op(sc.K, sc.delta, sc.nu);
            const double dt = sc.dt > 0.0 ? sc.dt : 2e-2;
            TimeGrid grid{0.0, sc.t_end, dt,
                          sc.stride ? sc.stride : default_stride(sc.t_end, dt)};
            const Trajectory full =
                integrate(op.flow(), f0.flat(), grid, "spectral", params_note(p));
            traj.rhs_id = "spectral/project8";
            traj.params_note = full.params_note;
            traj.times = full.times;
            for (const auto& st : full.states) {
                const auto m = project8(FourierField::from_flat(sc.K, sc.delta, st)).flat();
                traj.states.emplace_back(m.begin(), m.end());
            }
            reduced_like = true;
            break;
        }
    }

    switch (sc.csv_mode) {
        case CsvMode::Standard:
            res.csv = reduced_like ? reduced_csv(traj) : observable_csv(traj);
            break;
        case CsvMode::LogA: res.csv = log_csv(traj, sc, true); break;
        case CsvMode::LogB: res.csv = log_csv(traj, sc, false); break;
    }

    bool cert_failed = false;
    for (const auto& outp : sc.outputs) {
        if (!reduced_like || sc.model != ModelKind::Reduced)
            throw std::invalid_argument("scenario: certificates need the reduced model");
        const ModeState s0 = ModeState::from_flat(traj.states.front().data());
        ModelParams p{sc.nu, sc.delta};
        std::vector<DecayCertificate> certs;
        if (outp == "cert:symmetric") {
            certs = symmetric_certificates(traj, p);
        } else if (outp == "cert:asymmetric") {
            const auto c = asymmetric_constants(p, 0.0, s0.low_energy(), s0.high_energy(),
                                                /*allow_absent_fast_phase=*/true);
            certs = asymmetric_certificates(traj, c);
        } else if (outp == "cert:ratio") {
            const auto c = asymmetric_constants(p, 0.0, s0.low_energy(), s0.high_energy(),
                                                /*allow_absent_fast_phase=*/true);
            certs.push_back(sc.delta < 1.0 ? ratio_certificate(traj, c, 1e6)
                                           : u_ratio_certificate(traj, c, 1e6));
        } else {
            throw std::invalid_argument("scenario: unknown output " + outp);
        }
        for (const auto& c : certs) {
            res.report.push_back(to_report_line(c));
            cert_failed = cert_failed || !c.pass;
        }
    }
    if (sc.strict && cert_failed) res.exit_code = 4;

    if (!sc.out.empty()) {
        res.out_path = resolve_out_path(sc.out);
        std::ofstream f(res.out_path);
        if (!f) throw std::invalid_argument("scenario: cannot open " + res.out_path);
        f << res.csv;
        for (const auto& line : res.report) f << line << '\n';
    }
    return res;
}

}  // namespace

RunResult run(const Scenario& sc) {
    try {
        return run_impl(sc);
    } catch (const BlowupError& e) {
        RunResult r;
        r.exit_code = 3;
        r.report.push_back(std::string("ERROR ") + e.what());
        return r;
    } catch (const std::exception& e) {
        RunResult r;
        r.exit_code = 2;
        r.report.push_back(std::string("ERROR ") + e.what());
        return r;
    }
}

std::vector<std::string> preset_names() { return {"figAB", "figR", "figlogA", "figlogB"}; }

namespace {

std::vector<double> phase_init(std::uint64_t seed, double m1, double m3, double m5,
                               double m7) {
    SplitMix64 rng(seed);
    std::vector<double> y;
    for (double mag : {m1, m3, m5, m7}) {
        const double phi = 2.0 * 3.14159265358979323846 * rng.uniform();
        y.push_back(mag * std::cos(phi));
        y.push_back(mag * std::sin(phi));
    }
    return y;
}

}  // namespace

std::vector<Scenario> make_preset(const std::string& name, std::uint64_t seed) {
    // figure-style presets: delta = 1, nu = 0.01, O(1e-1) data so the fast
    // B-phase is visible (A0 = 0.05, B0 = 0.01)
    const double nu = 0.01;
    const double a = std::sqrt(0.05 / 2.0), b = std::sqrt(0.01 / 2.0);
    if (name == "figAB" || name == "figlogB") {
        Scenario sc;
        sc.name = name;
        sc.nu = nu;
        sc.delta = 1.0;
        sc.t_end = 200.0;
        sc.seed = seed;
        sc.init = phase_init(seed, a, a, b, b);
        sc.csv_mode = name == "figAB" ? CsvMode::Standard : CsvMode::LogB;
        if (name == "figAB") sc.outputs = {"cert:symmetric"};
        return {sc};
    }
    if (name == "figlogA") {
        Scenario sc;
        sc.name = name;
        sc.nu = nu;
        sc.delta = 1.0;
        sc.t_end = 400.0;
        sc.seed = seed;
        sc.init = phase_init(seed, a, a, b, b);
        sc.csv_mode = CsvMode::LogA;
        return {sc};
    }
    if (name == "figR") {
        std::vector<Scenario> out;
        int i = 0;
        for (const double R0 : {0.2, 0.5, 1.0, 2.0, 5.0}) {
            Scenario sc;
            sc.name = "figR_" + std::to_string(++i);
            sc.nu = nu;
            sc.delta = 1.0;
            sc.t_end = 500.0;
            sc.seed = seed + static_cast<std::uint64_t>(i);
            const double a3 = 0.5 * nu;
            sc.init = phase_init(sc.seed, std::sqrt(R0) * a3, a3, 0.5 * nu, 0.5 * nu);
            out.push_back(sc);
        }
        return out;
    }
    throw std::invalid_argument("unknown preset " + name);
}

}  // namespace qslab
