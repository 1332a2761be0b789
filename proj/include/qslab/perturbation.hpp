#pragma once

#include <array>
#include <vector>

#include "qslab/integrator.hpp"
#include "qslab/model_core.hpp"

namespace qslab {

/// Scaling data: delta = 1 + eps0*eps, nu = eps^alpha * nu0, tau = eps^alpha * t,
/// low modes scaled by eps^beta, high modes by eps^phi, with the paper's
/// simplifying choice phi = alpha, beta = alpha - 1/2 (any alpha > 1/2).
struct PerturbationConfig {
    double epsilon = 0.01;
    int epsilon0 = 1;  // +1 or -1
    double nu0 = 1.0;
    double alpha = 1.0;

    double beta() const { return alpha - 0.5; }
    double phi() const { return alpha; }
    double delta() const { return 1.0 + epsilon0 * epsilon; }
    void validate() const;
};

/// Taylor coefficients in eps of the nine rational coefficient functions
/// of delta = 1 + eps0*eps, to first order: c[i-1][j] holds c^i_j.
struct CoefficientSeries {
    std::array<std::array<double, 2>, 9> c{};
    double at(int i, int j) const { return c[i - 1][j]; }
};

CoefficientSeries coefficient_series(int epsilon0);

/// The nine generating functions evaluated at a given delta (used by the
/// exact-conjugacy route and by the finite-difference cross-check).
std::array<double, 9> coefficient_functions(double delta);

using Omega4 = std::array<Complex, 4>;  // (Omega1, Omega3, Omega5, Omega7)

/// Scaled slow-fast vector field in tau, with the j-sums truncated at the
/// requested order (0 or 1). The eps^{-1} fast terms are always present.
Omega4 scaled_rhs(const Omega4& Om, const PerturbationConfig& cfg, int order);

/// Same field with the coefficient functions evaluated exactly at
/// delta = 1 + eps0*eps (full series; exact conjugate of the unscaled flow).
Omega4 scaled_rhs_exact(const Omega4& Om, const PerturbationConfig& cfg);

struct AsymptoticInit {
    Complex Omega10, Omega30;      // order-0 initial data
    Complex Omega11{}, Omega31{};  // order-1 initial data
};

/// Closed-form order-0/order-1 expansion terms on the slow time scale.
class AsymptoticSolution {
  public:
    AsymptoticSolution(const AsymptoticInit& init, const PerturbationConfig& cfg);

    Complex Omega10(double tau) const;
    Complex Omega30(double tau) const;
    Complex Omega51() const { return omega51_; }  // tau-independent
    Complex Omega71() const { return omega71_; }
    Complex Omega11(double tau) const;
    Complex Omega31(double tau) const;

    double X0(double tau) const;
    double Y0(double tau) const;
    double X1(double tau) const;
    double Y1(double tau) const;
    double Xbar(double tau) const;  // X0 + eps*X1
    double Ybar(double tau) const;

    double K() const { return K_; }  // 20 X0(0) Y0(0) / (X0(0) + Y0(0))
    double X0_at0() const { return X00_; }
    double Y0_at0() const { return Y00_; }
    double X1_at0() const { return X10_; }
    double Y1_at0() const { return Y10_; }
    const PerturbationConfig& config() const { return cfg_; }
    const AsymptoticInit& init() const { return init_; }

  private:
    AsymptoticInit init_;
    PerturbationConfig cfg_;
    Complex omega51_{}, omega71_{};
    Complex resonant1_{}, resonant3_{};  // bracket factors of the tau e^{-nu0 tau} terms
    double X00_ = 0, Y00_ = 0, X10_ = 0, Y10_ = 0, K_ = 0;
};

AsymptoticSolution asymptotic_solution(const AsymptoticInit& init,
                                       const PerturbationConfig& cfg);

/// Validity horizons: tau_plus where Ybar's bracket vanishes (eps0 = +1),
/// tau_minus where Xbar's does (eps0 = -1). Both Theta(1/eps).
struct CriticalTimes {
    double tau_plus = 0.0;
    double tau_minus = 0.0;
};

CriticalTimes critical_times(const AsymptoticSolution& sol);

/// The printed simplified ratio Xbar/Ybar (common exponential cancelled).
/// Signals past the vanishing time of the decreasing bracket.
double selection_ratio(const AsymptoticSolution& sol, double tau);

struct ConvergenceRow {
    double epsilon = 0.0;
    double max_err_X = 0.0;
    double max_err_Y = 0.0;
};

/// Integrates scaled_rhs (order 1) from consistent initial data
/// (Omega5(0) = eps*Omega51, Omega7(0) = eps*Omega71) for every epsilon in
/// the list and reports the max error against Xbar/Ybar over the window.
/// The window must lie strictly inside (0, min(tau+, tau-)/2) for each eps.
std::vector<ConvergenceRow> convergence_study(const std::vector<double>& eps_list,
                                              int epsilon0, double nu0, double alpha,
                                              const AsymptoticInit& init, double tau_a,
                                              double tau_b, double dt);

/// Flat-state adapter for the integrator (order < 0 selects the exact field).
RhsFn scaled_flow(const PerturbationConfig& cfg, int order);

}  // namespace qslab
