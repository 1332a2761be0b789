#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "qslab/observables.hpp"

namespace qslab {

inline constexpr double kRExclusionBand = 1e-6;   // r ~ 0 and |r-1| bands
inline constexpr double kLambdaFloor = 1e-12;     // 1/(lambda+r) hazard

/// Quadratic polynomial on the 7 stable coordinates
/// (A, w, z, P_re, P_im, Q_re, Q_im); coefficients stored upper-triangular.
struct QuadraticForm {
    double c0 = 0.0;
    std::array<double, 7> lin{};
    std::array<std::array<double, 7>, 7> quad{};  // quad[i][j], i <= j

    double eval(const std::array<double, 7>& x) const;
    std::array<double, 7> gradient(const std::array<double, 7>& x) const;
};

/// Coefficient table of the stable-manifold graph R = f(.; r) exactly as
/// printed in the closed form (valid at r = 1; r = 0 excluded).
QuadraticForm printed_f_coefficients(double r, double nu);

/// f(.; r) evaluated at a point of the stable coordinates.
double manifold_eval(double r, const std::array<double, 7>& point, double nu);

/// Linear data of the diagonalizing change of variables at the fixed
/// point (r, 0, ..., 0), plus the stable-graph coefficients in the
/// diagonalized coordinates. Refuses |r-1| < 1e-6 (S is singular there)
/// and r < 1e-6.
struct StableManifoldChart {
    double r = 0.0, nu = 0.0;
    Eigen::Matrix<double, 8, 8> S, Sinv, Lambda, J;
    // nonzero h-coefficients, diagonalized coordinates y2..y8
    double c25, c27, c33, c34, c35, c37, c44, c45, c47, c57, c68;

    /// h(y2..y8) = sum of the eleven quadratic monomials.
    double h(const std::array<double, 7>& y) const;  // y[0] = y2, ..., y[6] = y8
};

StableManifoldChart make_chart(double r, double nu);

/// Graph coefficients recovered by pushing h back through S; exact for
/// quadratics (polarization), comparable term-by-term with
/// printed_f_coefficients.
QuadraticForm chart_f_coefficients(const StableManifoldChart& chart);

/// The complete vector field in the diagonalized Y variables, verbatim.
std::array<double, 8> shifted_rhs(const std::array<double, 8>& y, double r, double nu);

/// Shifted original field (fixed point moved to the origin): input and
/// output are (R~, A, w, z, P_re, P_im, Q_re, Q_im).
std::array<double, 8> pqshifted_rhs(const std::array<double, 8>& x, double r, double nu);

/// Instantaneous defect d/dt [R - f] at the on-graph point scale*direction,
/// along the full observable vector field. O(scale^3) as scale -> 0.
double manifold_residual(double r, double nu, const std::array<double, 7>& direction,
                         double scale);

/// Fixed low-discrepancy unit directions over the 7 graph coordinates
/// (Halton sequence offset by the seed).
std::vector<std::array<double, 7>> unit_directions(std::size_t count, std::uint64_t seed);

}  // namespace qslab
