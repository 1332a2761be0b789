#pragma once

#include <array>
#include <complex>
#include <string>

namespace qslab {

using Complex = std::complex<double>;

/// Viscosity and torus aspect ratio. The aspect ratio must lie in the
/// window (sqrt(2/3), sqrt(3/2)) for the eight-mode closure to have a
/// unique quadratic graph over the retained modes.
struct ModelParams {
    double nu = 0.01;
    double delta = 1.0;

    bool admissible() const;
    void validate() const;  // throws std::invalid_argument if not admissible
};

double delta_window_lo();  // sqrt(2/3)
double delta_window_hi();  // sqrt(3/2)

/// The four independent complex amplitudes of the reduced model:
/// omega1 = w(1,0), omega3 = w(0,1), omega5 = w(1,1), omega7 = w(1,-1).
/// The partners omega2/omega4/omega8/omega6 are their conjugates and are
/// never stored.
struct ModeState {
    Complex omega1{}, omega3{}, omega5{}, omega7{};

    bool finite() const;
    double low_energy() const;   // A = |w1|^2 + |w3|^2
    double high_energy() const;  // B = |w5|^2 + |w7|^2

    std::array<double, 8> flat() const;  // (re,im) pairs in index order
    static ModeState from_flat(const double* p);
    static ModeState from_flat(const std::array<double, 8>& a);

    ModeState conjugated() const;
    ModeState scaled(double s) const;
};

/// Right-hand side of the reduced eight-mode system for any admissible
/// (nu, delta). At delta = 1 the coefficients reduce continuously to the
/// symmetric-torus system (the quadratic graph over the (±2,0),(0,±2)
/// modes is fixed to zero).
ModeState reduced_rhs(const ModeState& s, const ModelParams& p);

/// Quadratic-order graph values of the first ring of unresolved modes.
struct CenterGraphValues {
    Complex w21{};   // w(2,1)
    Complex w2m1{};  // w(2,-1)
    Complex w12{};   // w(1,2)
    Complex w1m2{};  // w(1,-2)
};

CenterGraphValues center_graph(const ModeState& s, const ModelParams& p);

/// Invariance defect of the quadratic graph at the scaled state scale*s:
/// for each graph mode, the time derivative computed through the graph by
/// the chain rule is compared with the truncated flow equation of that
/// mode (convolution restricted to products of retained-or-graphed modes).
/// Returns the max norm over the four graph modes; O(scale^3) as scale->0.
double graph_invariance_defect(const ModeState& s, const ModelParams& p, double scale);

}  // namespace qslab
