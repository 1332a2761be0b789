#include "qslab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

#include "qslab/observables.hpp"

namespace qslab {

std::string to_report_line(const DecayCertificate& c) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "CERT %s pass=%s worst_margin=%.17g at_t=%.17g",
                  c.name.c_str(), c.pass ? "true" : "false", c.worst_margin, c.at_t);
    return buf;
}

namespace {

enum class Sense { Upper, Lower };  // quantity <= bound vs quantity >= bound

// fold a bound comparison over trajectory samples restricted to [t_lo, t_hi]
DecayCertificate check_bound(const Trajectory& traj, const std::string& name,
                             const std::function<double(const ModeState&)>& quantity,
                             const std::function<double(double)>& bound, Sense sense,
                             double t_lo, double t_hi) {
    DecayCertificate cert;
    cert.name = name;
    cert.pass = true;
    cert.worst_margin = std::numeric_limits<double>::infinity();
    cert.at_t = t_lo;
    bool any = false;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        if (t < t_lo - 1e-12 || t > t_hi + 1e-12) continue;
        any = true;
        const ModeState s = ModeState::from_flat(traj.states[i].data());
        const double q = quantity(s);
        const double b = bound(t);
        const double margin = (sense == Sense::Upper) ? b - q : q - b;
        const double scale = std::max({std::abs(b), std::abs(q), 1e-300});
        if (margin < -kCertificateSlack * scale) cert.pass = false;
        if (margin < cert.worst_margin) {
            cert.worst_margin = margin;
            cert.at_t = t;
        }
    }
    if (!any) {  // vacuous window
        cert.worst_margin = 0.0;
        cert.pass = true;
    }
    return cert;
}

ModeState first_state(const Trajectory& traj) {
    if (traj.size() == 0 || traj.dim() != 8)
        throw std::invalid_argument("certificates: need a nonempty reduced trajectory");
    return ModeState::from_flat(traj.states.front().data());
}

}  // namespace

std::vector<DecayCertificate> symmetric_certificates(const Trajectory& traj,
                                                     const ModelParams& p) {
    p.validate();
    if (p.delta != 1.0)
        throw std::invalid_argument("symmetric_certificates: delta must equal 1");
    const ModeState s0 = first_state(traj);
    const double A0 = s0.low_energy(), B0 = s0.high_energy();
    const double nu = p.nu, t0 = 1.0 / nu;
    const double t_end = traj.times.back();
    const double e2 = std::exp(2.0);
    const double fast = 2.0 * A0 / (5.0 * nu * e2);

    auto A = [](const ModeState& s) { return s.low_energy(); };
    auto B = [](const ModeState& s) { return s.high_energy(); };
    auto AB = [](const ModeState& s) { return s.low_energy() + s.high_energy(); };

    std::vector<DecayCertificate> out;
    out.push_back(check_bound(
        traj, "sym.energy", AB, [=](double t) { return (A0 + B0) * std::exp(-2.0 * nu * t); },
        Sense::Upper, traj.times.front(), t_end));
    out.push_back(check_bound(
        traj, "sym.A-floor", A, [=](double) { return A0 / e2; }, Sense::Lower,
        traj.times.front(), std::min(t0, t_end)));
    // piecewise B bound: fast phase on [0, 1/nu], plateau beyond
    out.push_back(check_bound(
        traj, "sym.B-fast", B,
        [=](double t) {
            return t <= t0 ? B0 * std::exp(-fast * t)
                           : B0 * std::exp(-2.0 * A0 / (5.0 * nu * nu * e2));
        },
        Sense::Upper, traj.times.front(), t_end));
    return out;
}

AsymmetricConstants asymmetric_constants(const ModelParams& p, double eta, double A0,
                                         double B0, bool allow_absent_fast_phase) {
    p.validate();
    const double d2 = p.delta * p.delta;
    if (d2 == 1.0)
        throw std::invalid_argument("asymmetric_constants: delta must differ from 1");
    if (eta <= 0.0) eta = 2.0 * std::abs(d2 - 1.0);
    if (!(std::abs(d2 - 1.0) < eta))
        throw std::invalid_argument("asymmetric_constants: need |delta^2-1| < eta");
    if (!(A0 > 0.0)) throw std::invalid_argument("asymmetric_constants: need A0 > 0");
    if (B0 < 0.0) throw std::invalid_argument("asymmetric_constants: need B0 >= 0");

    AsymmetricConstants c;
    c.delta = p.delta;
    c.nu = p.nu;
    c.eta = eta;
    c.A0 = A0;
    c.B0 = B0;
    c.K1 = std::min(1.0, 1.0 / d2);
    c.K2 = 2.0 * std::max(1.0, 1.0 / d2) + 6.0 * std::sqrt(2.0) * std::sqrt(A0 + B0);
    c.D0 = std::min((1.0 + 3.0 * d2) / (d2 * (1.0 + d2) * (1.0 + 4.0 * d2)),
                    d2 * d2 * d2 * (3.0 + d2) / ((1.0 + d2) * (4.0 + d2)));
    c.B_star = 128.0 * p.nu * p.nu * eta * eta / (d2 * c.D0 * c.D0);
    c.M0 = c.D0 * A0 / (2.0 * std::exp(c.K2));
    c.gamma = 2.0 * p.nu * (1.0 / d2 - 1.0);
    if (B0 > c.B_star) {
        c.t_star = -(p.nu / c.M0) *
                   std::log(128.0 * p.nu * p.nu * eta * eta / (B0 * d2 * c.D0 * c.D0));
    } else if (!allow_absent_fast_phase) {
        throw std::domain_error("asymmetric_constants: fast-phase-absent (B0 <= B_star)");
    }
    return c;
}

std::vector<DecayCertificate> asymmetric_certificates(const Trajectory& traj,
                                                      const AsymmetricConstants& c) {
    if (c.delta == 1.0)
        throw std::invalid_argument("asymmetric_certificates: delta must differ from 1");
    const ModeState s0 = first_state(traj);
    const double E0 = 0.5 * (s0.low_energy() + s0.high_energy());
    const double nu = c.nu;
    const double t_end = traj.times.back();
    const double ts = c.t_star.value_or(0.0);

    auto A = [](const ModeState& s) { return s.low_energy(); };
    auto B = [](const ModeState& s) { return s.high_energy(); };
    auto E = [](const ModeState& s) { return 0.5 * (s.low_energy() + s.high_energy()); };

    std::vector<DecayCertificate> out;
    out.push_back(check_bound(
        traj, "asym.energy", E,
        [=](double t) { return E0 * std::exp(-2.0 * c.K1 * nu * t); }, Sense::Upper,
        traj.times.front(), t_end));
    out.push_back(check_bound(
        traj, "asym.B-fast", B,
        [=](double t) { return c.B0 * std::exp(-c.M0 / nu * t); }, Sense::Upper,
        traj.times.front(), std::min(ts, t_end)));

    // M1 measured at the first sample past t_star, then checked forward
    double M1 = 0.0, t_at = ts;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] >= ts) {
            const ModeState s = ModeState::from_flat(traj.states[i].data());
            t_at = traj.times[i];
            M1 = s.high_energy() /
                 (c.eta * c.eta * nu * nu * std::exp(-2.0 * nu * c.K1 * t_at));
            break;
        }
    }
    auto late = check_bound(
        traj, "asym.B-late", B,
        [=](double t) {
            return M1 * c.eta * c.eta * nu * nu * std::exp(-2.0 * nu * c.K1 * t);
        },
        Sense::Upper, t_at, t_end);
    late.fitted_constant = M1;
    out.push_back(late);

    out.push_back(check_bound(
        traj, "asym.A-floor", A, [=](double) { return c.A0 * std::exp(-c.K2); },
        Sense::Lower, traj.times.front(),
        std::min(t_end, std::min(1.0 / nu, 1.0 / c.eta))));
    return out;
}

namespace {

DecayCertificate ratio_like_certificate(const Trajectory& traj, double rate, double cap,
                                        const char* name, bool use_U) {
    DecayCertificate cert;
    cert.name = name;
    std::vector<double> ts, vs;
    double M = 0.0, t_at = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const ModeState s = ModeState::from_flat(traj.states[i].data());
        const double den = use_U ? std::norm(s.omega1) : std::norm(s.omega3);
        if (den < kChartFloor) throw ChartError("ratio_certificate: chart degenerate");
        const double v = (use_U ? std::norm(s.omega3) : std::norm(s.omega1)) / den;
        ts.push_back(traj.times[i]);
        vs.push_back(v);
        const double m = v * std::exp(rate * traj.times[i]);
        if (m > M) {
            M = m;
            t_at = traj.times[i];
        }
    }
    if (ts.empty()) throw std::invalid_argument("ratio_certificate: empty trajectory");
    if (vs.front() > cap)
        throw std::invalid_argument("ratio_certificate: initial ratio above cap");
    cert.fitted_constant = M;  // smallest constant M with v(t) <= M e^{-rate t}
    cert.at_t = t_at;
    cert.worst_margin = 0.0;

    if (*std::max_element(vs.begin(), vs.end()) <= 0.0) {  // identically-zero ratio
        cert.pass = true;
        cert.fitted_constant = 0.0;
        return cert;
    }
    const double t_lo = ts.front() + 0.5 * (ts.back() - ts.front());
    std::vector<double> tw, vw;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] >= t_lo) {
            tw.push_back(ts[i]);
            vw.push_back(vs[i]);
        }
    const double fitted = -fit_log_slope(tw, vw);
    cert.worst_margin = fitted - 0.9 * rate;
    cert.pass = fitted >= 0.9 * rate;
    return cert;
}

}  // namespace

DecayCertificate ratio_certificate(const Trajectory& traj, const AsymmetricConstants& c,
                                   double R0_cap) {
    if (!(c.delta < 1.0))
        throw std::invalid_argument("ratio_certificate: needs delta < 1 (use u_ratio)");
    return ratio_like_certificate(traj, c.gamma, R0_cap, "asym.R-decay", false);
}

DecayCertificate u_ratio_certificate(const Trajectory& traj, const AsymmetricConstants& c,
                                     double U0_cap) {
    if (!(c.delta > 1.0))
        throw std::invalid_argument("u_ratio_certificate: needs delta > 1 (use ratio)");
    const double rate = 2.0 * c.nu * (1.0 - 1.0 / (c.delta * c.delta));
    return ratio_like_certificate(traj, rate, U0_cap, "asym.U-decay", true);
}

double energy_rate_residual(const ModeState& s, const ModelParams& p) {
    const ModeState f = reduced_rhs(s, p);
    const double chain = std::real(std::conj(s.omega1) * f.omega1) +
                         std::real(std::conj(s.omega3) * f.omega3) +
                         std::real(std::conj(s.omega5) * f.omega5) +
                         std::real(std::conj(s.omega7) * f.omega7);
    const double d = p.delta, nu = p.nu;
    const double d2 = d * d, q = 1.0 + d2;
    const double n1 = std::norm(s.omega1), n3 = std::norm(s.omega3);
    const double B = s.high_energy();
    const double d8 = d2 * d2 * d2 * d2;
    const double printed = -nu * (n1 / d2 + n3 + q / d2 * B) -
                           d8 / (2.0 * nu * q * q) * n1 * B -
                           1.0 / (2.0 * nu * d2 * q * q) * n3 * B;
    return std::abs(chain - printed);
}

}  // namespace qslab
