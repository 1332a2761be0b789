#include "qslab/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace qslab {

void TimeGrid::validate() const {
    if (!(std::isfinite(t0) && std::isfinite(t_end) && t_end > t0))
        throw std::invalid_argument("TimeGrid: need t_end > t0");
    if (!(std::isfinite(dt) && dt > 0.0 && dt <= t_end - t0))
        throw std::invalid_argument("TimeGrid: need 0 < dt <= t_end - t0");
    if (sample_stride == 0) throw std::invalid_argument("TimeGrid: stride must be >= 1");
}

double default_reduced_dt(double nu) { return std::min(nu / 10.0, 1e-2); }

namespace {

void guard(const std::vector<double>& y, double t) {
    for (double v : y)
        if (!std::isfinite(v) || std::abs(v) > kBlowupGuard) throw BlowupError(t);
}

void rk4_step(const RhsFn& f, double t, double h, std::vector<double>& y,
              std::vector<double>& k1, std::vector<double>& k2, std::vector<double>& k3,
              std::vector<double>& k4, std::vector<double>& tmp) {
    const std::size_t n = y.size();
    f(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    f(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

Trajectory integrate(const RhsFn& rhs, std::vector<double> y, const TimeGrid& grid,
                     std::string rhs_id, std::string params_note) {
    grid.validate();
    guard(y, grid.t0);

    const double span = grid.t_end - grid.t0;
    const auto n_steps = static_cast<std::size_t>(std::ceil(span / grid.dt - 1e-9));
    const std::size_t n = y.size();

    Trajectory traj;
    traj.rhs_id = std::move(rhs_id);
    traj.params_note = std::move(params_note);
    traj.times.reserve(n_steps / grid.sample_stride + 2);
    traj.states.reserve(n_steps / grid.sample_stride + 2);
    traj.times.push_back(grid.t0);
    traj.states.push_back(y);

    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        const double t_prev = grid.t0 + static_cast<double>(step - 1) * grid.dt;
        const double t_next =
            (step == n_steps) ? grid.t_end : grid.t0 + static_cast<double>(step) * grid.dt;
        rk4_step(rhs, t_prev, t_next - t_prev, y, k1, k2, k3, k4, tmp);
        guard(y, t_next);
        if (step % grid.sample_stride == 0 || step == n_steps) {
            traj.times.push_back(t_next);
            traj.states.push_back(y);
        }
    }
    return traj;
}

Trajectory integrate_adaptive(const RhsFn& rhs, std::vector<double> y, double t0,
                              double t_end, double tol, double dt_init,
                              std::string rhs_id, std::string params_note) {
    if (!(t_end > t0)) throw std::invalid_argument("integrate_adaptive: t_end <= t0");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tol <= 0");
    guard(y, t0);

    // Cash-Karp tableau
    static const double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
    static const double b21 = 0.2;
    static const double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    static const double b41 = 0.3, b42 = -0.9, b43 = 1.2;
    static const double b51 = -11.0 / 54.0, b52 = 2.5, b53 = -70.0 / 27.0,
                        b54 = 35.0 / 27.0;
    static const double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0,
                        b63 = 575.0 / 13824.0, b64 = 44275.0 / 110592.0,
                        b65 = 253.0 / 4096.0;
    static const double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                        c6 = 512.0 / 1771.0;
    static const double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                        d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0,
                        d6 = c6 - 0.25;

    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), tmp(n), ynew(n);

    Trajectory traj;
    traj.rhs_id = std::move(rhs_id);
    traj.params_note = std::move(params_note);
    traj.times.push_back(t0);
    traj.states.push_back(y);

    double t = t0, h = std::min(dt_init, t_end - t0);
    std::size_t iters = 0;
    while (t < t_end) {
        if (++iters > 50'000'000) throw std::runtime_error("integrate_adaptive: stalled");
        h = std::min(h, t_end - t);
        rhs(t, y, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * b21 * k1[i];
        rhs(t + a2 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (b31 * k1[i] + b32 * k2[i]);
        rhs(t + a3 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
        rhs(t + a4 * h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
        rhs(t + a5 * h, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] + b64 * k4[i] +
                                 b65 * k5[i]);
        rhs(t + a6 * h, tmp, k6);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ynew[i] = y[i] + h * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
            const double e =
                h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i]);
            const double sc = tol * (1.0 + std::max(std::abs(y[i]), std::abs(ynew[i])));
            err = std::max(err, std::abs(e) / sc);
        }
        if (err <= 1.0) {
            t += h;
            y = ynew;
            guard(y, t);
            traj.times.push_back(t);
            traj.states.push_back(y);
        }
        const double fac = std::clamp(0.9 * std::pow(err > 0 ? err : 1e-16, -0.2), 0.2, 5.0);
        h *= fac;
        if (!(h > 0.0) || !std::isfinite(h)) throw BlowupError(t);
    }
    return traj;
}

}  // namespace qslab
