#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qslab/integrator.hpp"
#include "qslab/model_core.hpp"

namespace qslab {

/// Machine-checked inequality along a trajectory. margin is the signed
/// slack (bound - quantity for upper bounds, quantity - bound for lower
/// bounds); pass iff the relative slack never drops below -1e-8.
struct DecayCertificate {
    std::string name;
    bool pass = false;
    double worst_margin = 0.0;
    double at_t = 0.0;
    std::optional<double> fitted_constant;  // measured M1 / M2 where applicable
};

inline constexpr double kCertificateSlack = 1e-8;  // relative

std::string to_report_line(const DecayCertificate& c);

/// The three symmetric-torus bounds: (i) A+B <= (A0+B0) e^{-2 nu t} for
/// all t, (ii) A >= A0 e^{-2} on [0, 1/nu], (iii) B <= B0 e^{-2A0 t/(5 nu e^2)}
/// on [0, 1/nu] and B <= B0 e^{-2A0/(5 nu^2 e^2)} beyond. Trajectory must
/// be a reduced run at delta = 1.
std::vector<DecayCertificate> symmetric_certificates(const Trajectory& traj,
                                                     const ModelParams& p);

/// Constants of the asymmetric-torus rapid-decay estimate, evaluated from
/// the printed formulas. t_star is absent when B0 <= B_star (no fast phase).
struct AsymmetricConstants {
    double delta = 0.0, nu = 0.0, eta = 0.0;
    double A0 = 0.0, B0 = 0.0;
    double K1 = 0.0, K2 = 0.0, D0 = 0.0;
    double B_star = 0.0, M0 = 0.0;
    double gamma = 0.0;  // 2 nu (1/delta^2 - 1); negative for delta > 1
    std::optional<double> t_star;
};

/// eta <= 0 selects the default 2|delta^2-1|. Throws "fast-phase-absent"
/// when B0 <= B_star unless allow_absent_fast_phase.
AsymmetricConstants asymmetric_constants(const ModelParams& p, double eta, double A0,
                                         double B0, bool allow_absent_fast_phase = false);

/// Certificates for delta != 1: (i) E <= E0 e^{-2 K1 nu t} for all t,
/// (ii) B <= B0 e^{-(M0/nu) t} on [0, t_star], (iii) B <= M1 eta^2 nu^2
/// e^{-2 nu K1 t} for t >= t_star with M1 measured at t_star, (iv)
/// A >= A0 e^{-K2} on [0, min(1/nu, 1/eta)].
std::vector<DecayCertificate> asymmetric_certificates(const Trajectory& traj,
                                                      const AsymmetricConstants& c);

/// Ratio decay R(t) <= M2 e^{-gamma t} for delta < 1: M2 is the smallest
/// constant over the trajectory; pass iff the late-window fitted rate is
/// at least 0.9 gamma.
DecayCertificate ratio_certificate(const Trajectory& traj, const AsymmetricConstants& c,
                                   double R0_cap);

/// Mirror for delta > 1 with U = 1/R and gamma' = 2 nu (1 - 1/delta^2).
DecayCertificate u_ratio_certificate(const Trajectory& traj, const AsymmetricConstants& c,
                                     double U0_cap);

/// Pointwise energy-derivative identity: |dE/dt(chain rule) - printed
/// negative-definite expression| at the given state.
double energy_rate_residual(const ModeState& s, const ModelParams& p);

}  // namespace qslab
