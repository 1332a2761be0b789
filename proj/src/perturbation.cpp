#include "qslab/perturbation.hpp"

#include <cmath>
#include <stdexcept>

namespace qslab {

void PerturbationConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("PerturbationConfig: need 0 < epsilon < 1");
    if (epsilon0 != 1 && epsilon0 != -1)
        throw std::invalid_argument("PerturbationConfig: epsilon0 must be +1 or -1");
    if (!(nu0 > 0.0)) throw std::invalid_argument("PerturbationConfig: need nu0 > 0");
    if (!(alpha > 0.5)) throw std::invalid_argument("PerturbationConfig: need alpha > 1/2");
}

namespace {

// forward-mode dual number, for exact derivatives of the coefficient
// functions at delta = 1
struct Dual {
    double v, d;
    Dual(double value, double deriv = 0.0) : v(value), d(deriv) {}
};
Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator/(Dual a, Dual b) {
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}
Dual operator*(double s, Dual a) { return {s * a.v, s * a.d}; }

template <typename T>
std::array<T, 9> coeff_fns(T d) {
    const T one(1.0);
    const T d2 = d * d;
    const T d3 = d2 * d, d6 = d3 * d3;
    const T q = one + d2;
    return {
        one / d2,
        one / (d * q),
        3.0 * d6 / (2.0 * ((4.0 * one + d2) * (q * q))),
        d3 / q,
        3.0 * d2 / (2.0 * ((one + 4.0 * d2) * (q * q))),
        d6 * (3.0 * one + d2) / (2.0 * ((4.0 * one + d2) * q)),
        (one + 3.0 * d2) / (2.0 * (d2 * ((one + 4.0 * d2) * q))),
        q / d2,
        (d2 - one) / d,
    };
}

}  // namespace

std::array<double, 9> coefficient_functions(double delta) { return coeff_fns(delta); }

CoefficientSeries coefficient_series(int epsilon0) {
    if (epsilon0 != 1 && epsilon0 != -1)
        throw std::invalid_argument("coefficient_series: epsilon0 must be +1 or -1");
    CoefficientSeries s;
    const auto g = coeff_fns(Dual{1.0, 1.0});  // derivative w.r.t. delta at delta = 1
    for (int i = 0; i < 9; ++i) {
        s.c[i][0] = g[i].v;
        s.c[i][1] = epsilon0 * g[i].d;  // d(delta)/d(eps) = eps0
    }
    return s;
}

namespace {

// common body for the truncated and exact scaled fields; g holds the nine
// coefficient values to use, gr9 the value of (delta^2-1)/(delta*eps)
Omega4 scaled_body(const Omega4& Om, double nu0, double inv_eps,
                   const std::array<double, 9>& g, double g9_over_eps) {
    const Complex O1 = Om[0], O3 = Om[1], O5 = Om[2], O7 = Om[3];
    const double X = std::norm(O1), Y = std::norm(O3);
    const double B = std::norm(O5) + std::norm(O7);
    Omega4 f;
    f[0] = -g[0] * nu0 * O1 + g[1] * (O3 * O7 - std::conj(O3) * O5) + g[2] / nu0 * O1 * B;
    f[1] = -nu0 * O3 + g[3] * (std::conj(O1) * O5 - O1 * std::conj(O7)) +
           g[4] / nu0 * O3 * B;
    const double fast = inv_eps / nu0 * (g[5] * X + g[6] * Y);
    f[2] = -fast * O5 - g[7] * nu0 * O5 - g9_over_eps * O1 * O3;
    f[3] = -fast * O7 - g[7] * nu0 * O7 + g9_over_eps * O1 * std::conj(O3);
    return f;
}

}  // namespace

Omega4 scaled_rhs(const Omega4& Om, const PerturbationConfig& cfg, int order) {
    cfg.validate();
    if (order != 0 && order != 1)
        throw std::invalid_argument("scaled_rhs: order must be 0 or 1");
    const CoefficientSeries s = coefficient_series(cfg.epsilon0);
    std::array<double, 9> g{};
    for (int i = 1; i <= 9; ++i) {
        g[i - 1] = s.at(i, 0);
        if (order >= 1) g[i - 1] += cfg.epsilon * s.at(i, 1);
    }
    // (delta^2-1)/(delta*eps) truncated at the same order:
    // sum_{j<=order} c9_{j+1} eps^j  (c9_0 = 0, c9_2 = -1 enters only at order>=1)
    double g9 = s.at(9, 1);
    if (order >= 1) {
        const double c92 = -1.0;  // second Taylor coefficient of (d^2-1)/d at d=1
        g9 += cfg.epsilon * c92;
    }
    return scaled_body(Om, cfg.nu0, 1.0 / cfg.epsilon, g, g9);
}

Omega4 scaled_rhs_exact(const Omega4& Om, const PerturbationConfig& cfg) {
    cfg.validate();
    const auto g = coefficient_functions(cfg.delta());
    return scaled_body(Om, cfg.nu0, 1.0 / cfg.epsilon, g, g[8] / cfg.epsilon);
}

AsymptoticSolution::AsymptoticSolution(const AsymptoticInit& init,
                                       const PerturbationConfig& cfg)
    : init_(init), cfg_(cfg) {
    cfg.validate();
    const double D = std::norm(init.Omega10) + std::norm(init.Omega30);
    if (!(D > 0.0))
        throw std::invalid_argument(
            "AsymptoticSolution: order-0 low modes must not both vanish");
    const double e0 = cfg.epsilon0, n0 = cfg.nu0;
    omega51_ = -10.0 * n0 * e0 * init.Omega10 * init.Omega30 / D;
    omega71_ = 10.0 * n0 * e0 * init.Omega10 * std::conj(init.Omega30) / D;
    resonant1_ =
        n0 * e0 * (2.0 * init.Omega10 + 10.0 * std::norm(init.Omega30) * init.Omega10 / D);
    resonant3_ = -n0 * e0 * 10.0 * std::norm(init.Omega10) * init.Omega30 / D;
    X00_ = std::norm(init.Omega10);
    Y00_ = std::norm(init.Omega30);
    X10_ = 2.0 * std::real(std::conj(init.Omega10) * init.Omega11);
    Y10_ = 2.0 * std::real(std::conj(init.Omega30) * init.Omega31);
    K_ = 20.0 * X00_ * Y00_ / (X00_ + Y00_);
}

Complex AsymptoticSolution::Omega10(double tau) const {
    return init_.Omega10 * std::exp(-cfg_.nu0 * tau);
}
Complex AsymptoticSolution::Omega30(double tau) const {
    return init_.Omega30 * std::exp(-cfg_.nu0 * tau);
}
Complex AsymptoticSolution::Omega11(double tau) const {
    const double e = std::exp(-cfg_.nu0 * tau);
    return init_.Omega11 * e + tau * e * resonant1_;
}
Complex AsymptoticSolution::Omega31(double tau) const {
    const double e = std::exp(-cfg_.nu0 * tau);
    return init_.Omega31 * e + tau * e * resonant3_;
}

double AsymptoticSolution::X0(double tau) const {
    return X00_ * std::exp(-2.0 * cfg_.nu0 * tau);
}
double AsymptoticSolution::Y0(double tau) const {
    return Y00_ * std::exp(-2.0 * cfg_.nu0 * tau);
}
double AsymptoticSolution::X1(double tau) const {
    const double e = std::exp(-2.0 * cfg_.nu0 * tau);
    return X10_ * e + cfg_.epsilon0 * cfg_.nu0 * tau * e * (4.0 * X00_ + K_);
}
double AsymptoticSolution::Y1(double tau) const {
    const double e = std::exp(-2.0 * cfg_.nu0 * tau);
    return Y10_ * e - K_ * cfg_.epsilon0 * cfg_.nu0 * tau * e;
}
double AsymptoticSolution::Xbar(double tau) const { return X0(tau) + cfg_.epsilon * X1(tau); }
double AsymptoticSolution::Ybar(double tau) const { return Y0(tau) + cfg_.epsilon * Y1(tau); }

AsymptoticSolution asymptotic_solution(const AsymptoticInit& init,
                                       const PerturbationConfig& cfg) {
    return AsymptoticSolution(init, cfg);
}

CriticalTimes critical_times(const AsymptoticSolution& sol) {
    const auto& cfg = sol.config();
    if (!(sol.X0_at0() > 0.0) || !(sol.Y0_at0() > 0.0))
        throw std::domain_error("critical_times: X0(0) and Y0(0) must be positive");
    CriticalTimes ct;
    ct.tau_plus = (sol.Y0_at0() / cfg.epsilon + sol.Y1_at0()) / (cfg.nu0 * sol.K());
    ct.tau_minus = (sol.X0_at0() / cfg.epsilon + sol.X1_at0()) /
                   (cfg.nu0 * (sol.K() + 4.0 * sol.X0_at0()));
    return ct;
}

double selection_ratio(const AsymptoticSolution& sol, double tau) {
    const auto& cfg = sol.config();
    const double e = cfg.epsilon, n0 = cfg.nu0, e0 = cfg.epsilon0;
    // validity horizon: the decreasing bracket must stay nonnegative
    const CriticalTimes ct = critical_times(sol);
    const double horizon = (cfg.epsilon0 == 1) ? ct.tau_plus : ct.tau_minus;
    if (tau >= horizon)
        throw std::domain_error("selection_ratio: past the expansion validity horizon");
    const double num = sol.X0_at0() + e * (sol.X1_at0() + e0 * n0 * (sol.K() + 4.0 * sol.X0_at0()) * tau);
    const double den = sol.Y0_at0() + e * (sol.Y1_at0() - e0 * n0 * sol.K() * tau);
    if (den == 0.0) throw std::domain_error("selection_ratio: Ybar vanished");
    return num / den;
}

RhsFn scaled_flow(const PerturbationConfig& cfg, int order) {
    cfg.validate();
    return [cfg, order](double, const std::vector<double>& y, std::vector<double>& dy) {
        Omega4 Om = {Complex{y[0], y[1]}, Complex{y[2], y[3]}, Complex{y[4], y[5]},
                     Complex{y[6], y[7]}};
        const Omega4 f = order < 0 ? scaled_rhs_exact(Om, cfg) : scaled_rhs(Om, cfg, order);
        dy.resize(8);
        for (int i = 0; i < 4; ++i) {
            dy[2 * i] = f[i].real();
            dy[2 * i + 1] = f[i].imag();
        }
    };
}

std::vector<ConvergenceRow> convergence_study(const std::vector<double>& eps_list,
                                              int epsilon0, double nu0, double alpha,
                                              const AsymptoticInit& init, double tau_a,
                                              double tau_b, double dt) {
    if (!(0.0 < tau_a && tau_a < tau_b))
        throw std::invalid_argument("convergence_study: need 0 < tau_a < tau_b");
    std::vector<ConvergenceRow> rows;
    for (const double eps : eps_list) {
        PerturbationConfig cfg{eps, epsilon0, nu0, alpha};
        AsymptoticSolution sol(init, cfg);
        const CriticalTimes ct = critical_times(sol);
        if (!(tau_b < 0.5 * std::min(ct.tau_plus, ct.tau_minus)))
            throw std::invalid_argument(
                "convergence_study: window must sit inside (0, min(tau+,tau-)/2)");

        // consistent initialization on the slow manifold to O(eps)
        const Complex O1 = init.Omega10 + eps * init.Omega11;
        const Complex O3 = init.Omega30 + eps * init.Omega31;
        const Complex O5 = eps * sol.Omega51();
        const Complex O7 = eps * sol.Omega71();
        std::vector<double> y0 = {O1.real(), O1.imag(), O3.real(), O3.imag(),
                                  O5.real(), O5.imag(), O7.real(), O7.imag()};
        TimeGrid grid{0.0, tau_b, dt, 1};
        const Trajectory traj = integrate(scaled_flow(cfg, 1), y0, grid, "scaled");

        ConvergenceRow row;
        row.epsilon = eps;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double tau = traj.times[i];
            if (tau < tau_a) continue;
            const auto& s = traj.states[i];
            const double Xn = s[0] * s[0] + s[1] * s[1];
            const double Yn = s[2] * s[2] + s[3] * s[3];
            row.max_err_X = std::max(row.max_err_X, std::abs(Xn - sol.Xbar(tau)));
            row.max_err_Y = std::max(row.max_err_Y, std::abs(Yn - sol.Ybar(tau)));
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qslab
