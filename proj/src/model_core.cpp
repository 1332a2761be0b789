#include "qslab/model_core.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qslab {

double delta_window_lo() { return std::sqrt(2.0 / 3.0); }
double delta_window_hi() { return std::sqrt(3.0 / 2.0); }

bool ModelParams::admissible() const {
    return std::isfinite(nu) && nu > 0.0 && std::isfinite(delta) &&
           delta > delta_window_lo() && delta < delta_window_hi();
}

void ModelParams::validate() const {
    if (!(std::isfinite(nu) && nu > 0.0))
        throw std::invalid_argument("ModelParams: nu must be positive and finite");
    if (!(std::isfinite(delta) && delta > delta_window_lo() && delta < delta_window_hi()))
        throw std::invalid_argument(
            "ModelParams: delta must lie in (sqrt(2/3), sqrt(3/2))");
}

static bool cfinite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

bool ModeState::finite() const {
    return cfinite(omega1) && cfinite(omega3) && cfinite(omega5) && cfinite(omega7);
}

double ModeState::low_energy() const { return std::norm(omega1) + std::norm(omega3); }
double ModeState::high_energy() const { return std::norm(omega5) + std::norm(omega7); }

std::array<double, 8> ModeState::flat() const {
    return {omega1.real(), omega1.imag(), omega3.real(), omega3.imag(),
            omega5.real(), omega5.imag(), omega7.real(), omega7.imag()};
}

ModeState ModeState::from_flat(const double* p) {
    return {Complex{p[0], p[1]}, Complex{p[2], p[3]}, Complex{p[4], p[5]},
            Complex{p[6], p[7]}};
}

ModeState ModeState::from_flat(const std::array<double, 8>& a) {
    return from_flat(a.data());
}

ModeState ModeState::conjugated() const {
    return {std::conj(omega1), std::conj(omega3), std::conj(omega5), std::conj(omega7)};
}

ModeState ModeState::scaled(double s) const {
    return {s * omega1, s * omega3, s * omega5, s * omega7};
}

ModeState reduced_rhs(const ModeState& s, const ModelParams& p) {
    p.validate();
    if (!s.finite()) throw std::invalid_argument("reduced_rhs: non-finite state");

    const double nu = p.nu, d = p.delta;
    const double d2 = d * d;
    const double d3 = d2 * d, d6 = d3 * d3;
    const double q = 1.0 + d2;

    const Complex w1 = s.omega1, w3 = s.omega3, w5 = s.omega5, w7 = s.omega7;
    const double B = std::norm(w5) + std::norm(w7);

    // coefficients of the delta-dependent system, evaluated at call time
    const double c_13 = 1.0 / (d * q);                            // w3w7 - conj(w3)w5 in w1-eq
    const double c_1B = 3.0 * d6 / (2.0 * nu * (4.0 + d2) * q * q);
    const double c_31 = d3 / q;                                   // conj(w1)w5 - w1 conj(w7)
    const double c_3B = 3.0 * d2 / (2.0 * nu * (1.0 + 4.0 * d2) * q * q);
    const double c_lin57 = nu * q / d2;
    const double c_force = (d2 - 1.0) / d;
    const double c_5A1 = d6 * (3.0 + d2) / (2.0 * nu * (4.0 + d2) * q);
    const double c_5A3 = (1.0 + 3.0 * d2) / (2.0 * nu * d2 * (1.0 + 4.0 * d2) * q);

    ModeState f;
    f.omega1 = -nu / d2 * w1 + c_13 * (w3 * w7 - std::conj(w3) * w5) + c_1B * w1 * B;
    f.omega3 = -nu * w3 + c_31 * (std::conj(w1) * w5 - w1 * std::conj(w7)) + c_3B * w3 * B;
    f.omega5 = -c_lin57 * w5 - c_force * w1 * w3 -
               (c_5A1 * std::norm(w1) + c_5A3 * std::norm(w3)) * w5;
    f.omega7 = -c_lin57 * w7 + c_force * w1 * std::conj(w3) -
               (c_5A1 * std::norm(w1) + c_5A3 * std::norm(w3)) * w7;
    return f;
}

CenterGraphValues center_graph(const ModeState& s, const ModelParams& p) {
    p.validate();
    if (!s.finite()) throw std::invalid_argument("center_graph: non-finite state");
    const double d = p.delta, nu = p.nu;
    const double d2 = d * d;
    const double d5 = d2 * d2 * d;
    const double q = 1.0 + d2;
    const double b = d5 / (2.0 * nu * q);
    const double c = 1.0 / (2.0 * nu * d * q);
    CenterGraphValues g;
    g.w21 = -b * s.omega1 * s.omega5;
    g.w2m1 = b * s.omega1 * s.omega7;
    g.w12 = c * s.omega3 * s.omega5;
    g.w1m2 = -c * std::conj(s.omega3) * s.omega7;
    return g;
}

namespace {

struct KV {
    int k1, k2;
    Complex v;
};

// |k|_d^2
double knorm2(int k1, int k2, double d) { return k1 * k1 + d * d * k2 * k2; }

Complex lookup(const std::vector<KV>& m, int k1, int k2, bool& found) {
    for (const auto& e : m)
        if (e.k1 == k1 && e.k2 == k2) {
            found = true;
            return e.v;
        }
    found = false;
    return {};
}

// Truncated flow-equation derivative of mode k over the 20-mode set
// (retained modes plus graphed modes, conjugate partners included).
Complex flow_rhs_on_graph(const std::vector<KV>& modes, int k1, int k2, Complex vk,
                          double nu, double d) {
    Complex acc = -nu / (d * d) * knorm2(k1, k2, d) * vk;
    for (const auto& j : modes) {
        const int l1 = k1 - j.k1, l2 = k2 - j.k2;
        if (l1 == 0 && l2 == 0) continue;
        bool found = false;
        const Complex vl = lookup(modes, l1, l2, found);
        if (!found) continue;
        // <j_perp, l> with j_perp = (j2, -j1)
        const double jperp_l = j.k2 * l1 - j.k1 * l2;
        if (jperp_l == 0.0) continue;
        const double w = 1.0 / knorm2(l1, l2, d) - 1.0 / knorm2(j.k1, j.k2, d);
        acc += -(d / 2.0) * jperp_l * w * j.v * vl;
    }
    return acc;
}

}  // namespace

double graph_invariance_defect(const ModeState& s, const ModelParams& p, double scale) {
    p.validate();
    if (!(scale > 0.0 && scale <= 1.0))
        throw std::invalid_argument("graph_invariance_defect: scale must be in (0,1]");
    const ModeState x = s.scaled(scale);
    const ModeState f = reduced_rhs(x, p);
    const CenterGraphValues g = center_graph(x, p);

    const double d = p.delta, nu = p.nu;
    const double d2 = d * d, d5 = d2 * d2 * d, q = 1.0 + d2;
    const double b = d5 / (2.0 * nu * q);
    const double c = 1.0 / (2.0 * nu * d * q);

    // chain rule through the graph monomials, full reduced field
    const Complex chain_w21 = -b * (f.omega1 * x.omega5 + x.omega1 * f.omega5);
    const Complex chain_w2m1 = b * (f.omega1 * x.omega7 + x.omega1 * f.omega7);
    const Complex chain_w12 = c * (f.omega3 * x.omega5 + x.omega3 * f.omega5);
    const Complex chain_w1m2 =
        -c * (std::conj(f.omega3) * x.omega7 + std::conj(x.omega3) * f.omega7);

    // the 20 modes visible to the closure: 8 retained + 12 graphed
    // (the (±2,0),(0,±2) graph values are identically zero)
    std::vector<KV> modes = {
        {1, 0, x.omega1},  {-1, 0, std::conj(x.omega1)},
        {0, 1, x.omega3},  {0, -1, std::conj(x.omega3)},
        {1, 1, x.omega5},  {-1, -1, std::conj(x.omega5)},
        {1, -1, x.omega7}, {-1, 1, std::conj(x.omega7)},
        {2, 1, g.w21},     {-2, -1, std::conj(g.w21)},
        {2, -1, g.w2m1},   {-2, 1, std::conj(g.w2m1)},
        {1, 2, g.w12},     {-1, -2, std::conj(g.w12)},
        {1, -2, g.w1m2},   {-1, 2, std::conj(g.w1m2)},
        {2, 0, 0.0},       {-2, 0, 0.0},
        {0, 2, 0.0},       {0, -2, 0.0},
    };

    const Complex flow_w21 = flow_rhs_on_graph(modes, 2, 1, g.w21, nu, d);
    const Complex flow_w2m1 = flow_rhs_on_graph(modes, 2, -1, g.w2m1, nu, d);
    const Complex flow_w12 = flow_rhs_on_graph(modes, 1, 2, g.w12, nu, d);
    const Complex flow_w1m2 = flow_rhs_on_graph(modes, 1, -2, g.w1m2, nu, d);

    double defect = 0.0;
    defect = std::max(defect, std::abs(chain_w21 - flow_w21));
    defect = std::max(defect, std::abs(chain_w2m1 - flow_w2m1));
    defect = std::max(defect, std::abs(chain_w12 - flow_w12));
    defect = std::max(defect, std::abs(chain_w1m2 - flow_w1m2));
    return defect;
}

}  // namespace qslab
