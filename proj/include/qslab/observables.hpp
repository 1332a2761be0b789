#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "qslab/integrator.hpp"
#include "qslab/model_core.hpp"

namespace qslab {

inline constexpr double kChartFloor = 1e-30;  // on |omega3|^2 (resp. |omega1|^2)

/// Raised when a chart denominator is degenerate (|omega3|^2 below floor
/// in to_observables, R below floor in observable_rhs).
struct ChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The real observable vector (R, A, w, z, P, Q) with
///   R = |w1|^2/|w3|^2, A = |w1|^2+|w3|^2, w = |w5|^2, z = |w7|^2,
///   P = w1 conj(w3) conj(w7) / |w3|^2,  Q = conj(w1) conj(w3) w5 / |w3|^2.
struct ObservableState {
    double R = 0.0, A = 0.0, w = 0.0, z = 0.0;
    Complex P{}, Q{};

    std::array<double, 8> flat() const;  // (R, A, w, z, P_re, P_im, Q_re, Q_im)
    static ObservableState from_flat(const double* p);
    static ObservableState from_flat(const std::array<double, 8>& a);
};

ObservableState to_observables(const ModeState& s, double floor = kChartFloor);

/// Vector field of the observable system on the symmetric torus (the
/// split into the eight real equations). Requires params.delta == 1.
ObservableState observable_rhs(const ObservableState& o, const ModelParams& p,
                               double floor = kChartFloor);

/// (A, B) subsystem at delta = 1:  dA = -2 nu A + 3/(20 nu) A B,
/// dB = -4 nu B - 2/(5 nu) A B.
std::pair<double, double> ab_rhs(double A, double B, const ModelParams& p);

struct Diagnostics {
    double A = 0.0, B = 0.0, E = 0.0;
    std::optional<double> R;  // absent when |omega3|^2 below chart floor
    std::optional<double> U;  // absent when |omega1|^2 below chart floor
};

Diagnostics diagnostics(const ModeState& s);

/// Exact directional derivative of to_observables along reduced_rhs
/// (chain rule through the defining quotients).
ObservableState pushforward_derivative(const ModeState& s, const ModelParams& p);

/// Same pushforward by central differences along the flow direction.
ObservableState fd_pushforward_derivative(const ModeState& s, const ModelParams& p,
                                          double h = 1e-6);

/// Pointwise check of the asymmetric-torus R-equation display: returns
/// |dR/dt(chain rule) - dR/dt(displayed form)| at the given state.
double r_equation_residual(const ModeState& s, const ModelParams& p);

enum class DiagnosticSelector { A, B, E, R, U };

std::string to_string(DiagnosticSelector sel);

/// Least-squares slope of log(values) against times; rate = -slope.
double fit_log_slope(const std::vector<double>& times, const std::vector<double>& values);

/// Decay rate of a diagnostic over [t_a, t_b] on a reduced-model
/// trajectory (8 real components per sample). Throws std::domain_error if
/// the quantity is not strictly positive on the window.
double fit_decay_rate(const Trajectory& traj, DiagnosticSelector sel, double t_a,
                      double t_b);

/// Default fitting window: the last half of the span after the fast
/// transient t_star.
std::pair<double, double> default_fit_window(const Trajectory& traj, double t_star);

}  // namespace qslab
