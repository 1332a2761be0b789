#pragma once

#include <cstdint>
#include <vector>

#include "qslab/integrator.hpp"
#include "qslab/model_core.hpp"

namespace qslab {

/// Truncated grid of vorticity coefficients w_k for 0 < max(|k1|,|k2|) <= K,
/// with |k|_d^2 = k1^2 + delta^2 k2^2. Reality (w_{-k} = conj w_k) is
/// enforced on construction and preserved by the flow; the mean mode is
/// identically zero.
struct FourierField {
    int K = 2;
    double delta = 1.0;
    std::vector<Complex> coeffs;  // (2K+1)^2 slots, origin kept at zero

    FourierField() = default;
    FourierField(int K_, double delta_);

    int side() const { return 2 * K + 1; }
    bool in_range(int k1, int k2) const;
    std::size_t index(int k1, int k2) const;
    Complex at(int k1, int k2) const;
    /// Sets w_k and w_{-k} = conj(w_k) together.
    void set_pair(int k1, int k2, Complex v);

    double norm2_of(int k1, int k2) const;  // |k|_d^2
    double energy() const;                  // sum |w_k|^2 / |k|_d^2
    double enstrophy() const;               // sum |w_k|^2
    double reality_defect() const;          // max |w_{-k} - conj(w_k)|

    std::vector<double> flat() const;  // re/im over the whole grid
    static FourierField from_flat(int K, double delta, const std::vector<double>& v);
};

/// Precomputed direct-summation convolution over the retained square.
/// Derivatives are computed on a canonical half grid and mirrored, so the
/// reality invariant is preserved exactly.
class SpectralOperator {
  public:
    SpectralOperator(int K, double delta, double nu);

    FourierField rhs(const FourierField& f) const;
    RhsFn flow() const;  // operates on FourierField::flat vectors

    int K() const { return K_; }
    double delta() const { return delta_; }
    double nu() const { return nu_; }

  private:
    struct Term {
        std::uint32_t j, l;  // grid indices of the factors
        double coeff;
    };
    int K_;
    double delta_, nu_;
    std::vector<std::uint32_t> targets_;           // canonical-half grid indices
    std::vector<std::uint32_t> mirrors_;           // matching -k indices
    std::vector<double> visc_;                     // nu/d^2 |k|_d^2 per target
    std::vector<std::pair<std::size_t, std::size_t>> spans_;  // term ranges
    std::vector<Term> terms_;
};

/// One-off right-hand-side evaluation (builds a transient operator; use
/// SpectralOperator directly for repeated calls).
FourierField full_rhs(const FourierField& f, double nu);

/// Exact single-m solution family: the four coefficients of
/// e^{-nu m^2 t/d^2}[a1 cos(mx/d) + a2 sin(mx/d)] + e^{-nu m^2 t}[a3 cos(my) + a4 sin(my)].
/// Valid for delta = 1, or when one of the two mode pairs is absent.
FourierField exact_family(int m, const std::array<double, 4>& a, double delta, double nu,
                          double t, int K);

/// Extracts the reduced-model modes (1,0), (0,1), (1,1), (1,-1).
ModeState project8(const FourierField& f);

struct ConservationReport {
    double energy_drift = 0.0;     // max relative deviation over the run
    double enstrophy_drift = 0.0;
};

/// Integrates the nu = 0 truncation and reports quadratic-invariant drift.
ConservationReport euler_conservation_report(const FourierField& f0, double horizon,
                                             double dt);

/// Seeded smooth random field: iid complex Gaussians damped by
/// e^{-|k|_d^2/2}, reality-symmetrized, rescaled to the target enstrophy
/// amplitude sqrt(sum |w_k|^2).
FourierField random_field(std::uint64_t seed, int K, double delta, double amplitude);

struct SelectionReport {
    double delta = 0.0, nu = 0.0;
    int K = 0;
    std::uint64_t seed = 0;
    double rate_spectral = 0.0;  // fitted d log R/dt over the late window
    double rate_reduced = 0.0;
    int sign_spectral = 0;  // -1: y-bar, +1: x-bar, 0: flat (dipole)
    int sign_reduced = 0;
    bool agree = false;
    bool chart_degenerate = false;
    Trajectory projected;  // reduced-mode projection of the spectral run
};

/// Truncated-system selection run cross-checked against the reduced model
/// started from the projected initial data.
SelectionReport selection_experiment(std::uint64_t seed, double delta, double nu, int K,
                                     double horizon, double dt = 2e-2);

}  // namespace qslab
