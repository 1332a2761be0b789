#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qslab {

/// Fixed-step sampling grid. dt is the integration step; every
/// sample_stride-th step is recorded (plus the initial and final states).
struct TimeGrid {
    double t0 = 0.0;
    double t_end = 1.0;
    double dt = 1e-2;
    std::size_t sample_stride = 1;

    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::string rhs_id;
    std::string params_note;

    std::size_t size() const { return times.size(); }
    std::size_t dim() const { return states.empty() ? 0 : states.front().size(); }
};

using RhsFn =
    std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;

/// Thrown when a state component leaves the validity region (|y| > 1e12)
/// or turns non-finite during integration.
struct BlowupError : std::runtime_error {
    double t;
    explicit BlowupError(double when)
        : std::runtime_error("integration aborted: state blow-up at t=" +
                             std::to_string(when)),
          t(when) {}
};

inline constexpr double kBlowupGuard = 1e12;

/// Default step for reduced-model runs: resolves the fast 1/nu scale.
double default_reduced_dt(double nu);

/// Classical fourth-order one-step integration at fixed dt. Deterministic:
/// identical inputs produce byte-identical trajectories.
Trajectory integrate(const RhsFn& rhs, std::vector<double> y0, const TimeGrid& grid,
                     std::string rhs_id = {}, std::string params_note = {});

/// Embedded Cash-Karp 4(5) variant with proportional step control.
/// Accepted steps are recorded as samples.
Trajectory integrate_adaptive(const RhsFn& rhs, std::vector<double> y0, double t0,
                              double t_end, double tol, double dt_init = 1e-3,
                              std::string rhs_id = {}, std::string params_note = {});

}  // namespace qslab
