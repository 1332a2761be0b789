#include "qslab/observables.hpp"

#include <cmath>

namespace qslab {

std::array<double, 8> ObservableState::flat() const {
    return {R, A, w, z, P.real(), P.imag(), Q.real(), Q.imag()};
}

ObservableState ObservableState::from_flat(const double* p) {
    ObservableState o;
    o.R = p[0];
    o.A = p[1];
    o.w = p[2];
    o.z = p[3];
    o.P = {p[4], p[5]};
    o.Q = {p[6], p[7]};
    return o;
}

ObservableState ObservableState::from_flat(const std::array<double, 8>& a) {
    return from_flat(a.data());
}

ObservableState to_observables(const ModeState& s, double floor) {
    if (!s.finite()) throw std::invalid_argument("to_observables: non-finite state");
    const double n3 = std::norm(s.omega3);
    if (n3 < floor) throw ChartError("degenerate-omega3");
    ObservableState o;
    o.R = std::norm(s.omega1) / n3;
    o.A = std::norm(s.omega1) + n3;
    o.w = std::norm(s.omega5);
    o.z = std::norm(s.omega7);
    o.P = s.omega1 * std::conj(s.omega3) * std::conj(s.omega7) / n3;
    o.Q = std::conj(s.omega1) * std::conj(s.omega3) * s.omega5 / n3;
    return o;
}

ObservableState observable_rhs(const ObservableState& o, const ModelParams& p,
                               double floor) {
    p.validate();
    if (p.delta != 1.0)
        throw std::invalid_argument("observable_rhs: defined for delta = 1 only");
    if (!(o.R > 0.0) || o.R < floor) throw ChartError("observable_rhs: R below floor");

    const double nu = p.nu;
    const double Pr = o.P.real(), Pi = o.P.imag(), Qr = o.Q.real(), Qi = o.Q.imag();
    const double D = Pr - Qr;
    const double invR = 1.0 / o.R;

    ObservableState f;
    f.R = (1.0 + o.R) * D;
    f.A = -2.0 * nu * o.A + 3.0 / (20.0 * nu) * o.A * (o.w + o.z);
    f.w = -4.0 * nu * o.w - 2.0 / (5.0 * nu) * o.w * o.A;
    f.z = -4.0 * nu * o.z - 2.0 / (5.0 * nu) * o.z * o.A;
    const double dPr = -2.0 * nu * Pr + 0.5 * o.z * (1.0 - o.R) - Pr * o.A / (5.0 * nu) +
                       D * Pr + 0.5 * Pr * Qr * (1.0 - invR) + 0.5 * Pi * Qi * (1.0 + invR);
    const double dPi = -2.0 * nu * Pi - Pi * o.A / (5.0 * nu) + D * Pi +
                       0.5 * Pi * Qr * (1.0 - invR) - 0.5 * Pr * Qi * (1.0 + invR);
    const double dQr = -2.0 * nu * Qr + 0.5 * o.w * (o.R - 1.0) - Qr * o.A / (5.0 * nu) +
                       D * Qr + 0.5 * Pr * Qr * (invR - 1.0) - 0.5 * Pi * Qi * (invR + 1.0);
    const double dQi = -2.0 * nu * Qi - Qi * o.A / (5.0 * nu) + D * Qi +
                       0.5 * Pi * Qr * (invR + 1.0) + 0.5 * Pr * Qi * (invR - 1.0);
    f.P = {dPr, dPi};
    f.Q = {dQr, dQi};
    return f;
}

std::pair<double, double> ab_rhs(double A, double B, const ModelParams& p) {
    p.validate();
    if (!(A >= 0.0 && B >= 0.0))
        throw std::invalid_argument("ab_rhs: A and B must be nonnegative");
    const double nu = p.nu;
    return {-2.0 * nu * A + 3.0 / (20.0 * nu) * A * B,
            -4.0 * nu * B - 2.0 / (5.0 * nu) * A * B};
}

Diagnostics diagnostics(const ModeState& s) {
    Diagnostics d;
    d.A = s.low_energy();
    d.B = s.high_energy();
    d.E = 0.5 * (d.A + d.B);
    const double n1 = std::norm(s.omega1), n3 = std::norm(s.omega3);
    if (n3 >= kChartFloor) d.R = n1 / n3;
    if (n1 >= kChartFloor) d.U = n3 / n1;
    return d;
}

ObservableState pushforward_derivative(const ModeState& s, const ModelParams& p) {
    const ModeState f = reduced_rhs(s, p);
    const double n3 = std::norm(s.omega3);
    if (n3 < kChartFloor) throw ChartError("degenerate-omega3");

    const double dn1 = 2.0 * std::real(std::conj(s.omega1) * f.omega1);
    const double dn3 = 2.0 * std::real(std::conj(s.omega3) * f.omega3);
    const double n1 = std::norm(s.omega1);

    ObservableState d;
    d.R = (dn1 * n3 - n1 * dn3) / (n3 * n3);
    d.A = dn1 + dn3;
    d.w = 2.0 * std::real(std::conj(s.omega5) * f.omega5);
    d.z = 2.0 * std::real(std::conj(s.omega7) * f.omega7);
    const Complex numP = s.omega1 * std::conj(s.omega3) * std::conj(s.omega7);
    const Complex dnumP = f.omega1 * std::conj(s.omega3) * std::conj(s.omega7) +
                          s.omega1 * std::conj(f.omega3) * std::conj(s.omega7) +
                          s.omega1 * std::conj(s.omega3) * std::conj(f.omega7);
    d.P = (dnumP * n3 - numP * dn3) / (n3 * n3);
    const Complex numQ = std::conj(s.omega1) * std::conj(s.omega3) * s.omega5;
    const Complex dnumQ = std::conj(f.omega1) * std::conj(s.omega3) * s.omega5 +
                          std::conj(s.omega1) * std::conj(f.omega3) * s.omega5 +
                          std::conj(s.omega1) * std::conj(s.omega3) * f.omega5;
    d.Q = (dnumQ * n3 - numQ * dn3) / (n3 * n3);
    return d;
}

ObservableState fd_pushforward_derivative(const ModeState& s, const ModelParams& p,
                                          double h) {
    const ModeState f = reduced_rhs(s, p);
    const auto sf = s.flat(), ff = f.flat();
    std::array<double, 8> plus{}, minus{};
    for (int i = 0; i < 8; ++i) {
        plus[i] = sf[i] + h * ff[i];
        minus[i] = sf[i] - h * ff[i];
    }
    const auto op = to_observables(ModeState::from_flat(plus)).flat();
    const auto om = to_observables(ModeState::from_flat(minus)).flat();
    std::array<double, 8> d{};
    for (int i = 0; i < 8; ++i) d[i] = (op[i] - om[i]) / (2.0 * h);
    return ObservableState::from_flat(d);
}

double r_equation_residual(const ModeState& s, const ModelParams& p) {
    p.validate();
    const double n3 = std::norm(s.omega3);
    if (n3 < kChartFloor) throw ChartError("degenerate-omega3");

    const ModeState f = reduced_rhs(s, p);
    const double n1 = std::norm(s.omega1);
    const double dn1 = 2.0 * std::real(std::conj(s.omega1) * f.omega1);
    const double dn3 = 2.0 * std::real(std::conj(s.omega3) * f.omega3);
    const double chain = (dn1 * n3 - n1 * dn3) / (n3 * n3);

    const double d = p.delta, nu = p.nu;
    const double d2 = d * d, q = 1.0 + d2;
    const double Rv = n1 / n3;
    const double B = s.high_energy();
    const double gamma = 2.0 * nu * (1.0 / d2 - 1.0);
    const double a1 = s.omega1.real(), b1 = s.omega1.imag();
    const double a3 = s.omega3.real(), b3 = s.omega3.imag();
    const double a5 = s.omega5.real(), b5 = s.omega5.imag();
    const double a7 = s.omega7.real(), b7 = s.omega7.imag();
    const double bracket = a1 * a3 * (a7 - a5) + b1 * a3 * (b7 - b5) -
                           a1 * b3 * (b5 + b7) + b1 * b3 * (a5 + a7);
    const double display =
        -gamma * Rv +
        3.0 * d2 / (nu * q * q) * (d2 * d2 / (4.0 + d2) - 1.0 / (1.0 + 4.0 * d2)) * Rv * B +
        (2.0 / (d * q) + 2.0 * d2 * d / q * Rv) * bracket / n3;
    return std::abs(chain - display);
}

std::string to_string(DiagnosticSelector sel) {
    switch (sel) {
        case DiagnosticSelector::A: return "A";
        case DiagnosticSelector::B: return "B";
        case DiagnosticSelector::E: return "E";
        case DiagnosticSelector::R: return "R";
        case DiagnosticSelector::U: return "U";
    }
    return "?";
}

double fit_log_slope(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 2)
        throw std::invalid_argument("fit_log_slope: need >= 2 samples");
    double st = 0, sl = 0, stt = 0, stl = 0;
    const auto n = static_cast<double>(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(values[i] > 0.0))
            throw std::domain_error("fit_log_slope: nonpositive value in window");
        const double l = std::log(values[i]);
        st += times[i];
        sl += l;
        stt += times[i] * times[i];
        stl += times[i] * l;
    }
    const double den = n * stt - st * st;
    if (den == 0.0) throw std::invalid_argument("fit_log_slope: degenerate time window");
    return (n * stl - st * sl) / den;
}

namespace {

double select(const ModeState& s, DiagnosticSelector sel) {
    const Diagnostics d = diagnostics(s);
    switch (sel) {
        case DiagnosticSelector::A: return d.A;
        case DiagnosticSelector::B: return d.B;
        case DiagnosticSelector::E: return d.E;
        case DiagnosticSelector::R:
            if (!d.R) throw std::domain_error("fit_decay_rate: R chart degenerate");
            return *d.R;
        case DiagnosticSelector::U:
            if (!d.U) throw std::domain_error("fit_decay_rate: U chart degenerate");
            return *d.U;
    }
    throw std::logic_error("unreachable");
}

}  // namespace

double fit_decay_rate(const Trajectory& traj, DiagnosticSelector sel, double t_a,
                      double t_b) {
    if (traj.dim() != 8)
        throw std::invalid_argument("fit_decay_rate: expects reduced trajectories");
    if (!(t_a < t_b) || traj.times.empty() || t_a < traj.times.front() - 1e-12 ||
        t_b > traj.times.back() + 1e-12)
        throw std::invalid_argument("fit_decay_rate: window outside trajectory span");
    std::vector<double> ts, vs;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] < t_a || traj.times[i] > t_b) continue;
        ts.push_back(traj.times[i]);
        vs.push_back(select(ModeState::from_flat(traj.states[i].data()), sel));
    }
    return -fit_log_slope(ts, vs);
}

std::pair<double, double> default_fit_window(const Trajectory& traj, double t_star) {
    const double t_end = traj.times.back();
    const double lo = t_star + 0.5 * (t_end - t_star);
    return {lo, t_end};
}

}  // namespace qslab
