#include "qslab/spectral_ref.hpp"

#include <cmath>
#include <stdexcept>

#include "qslab/flows.hpp"
#include "qslab/observables.hpp"
#include "qslab/rng.hpp"

namespace qslab {

FourierField::FourierField(int K_, double delta_) : K(K_), delta(delta_) {
    if (K < 2) throw std::invalid_argument("FourierField: K must be >= 2");
    if (!(delta > 0.0)) throw std::invalid_argument("FourierField: delta must be > 0");
    coeffs.assign(static_cast<std::size_t>(side()) * side(), Complex{});
}

bool FourierField::in_range(int k1, int k2) const {
    if (k1 == 0 && k2 == 0) return false;
    return std::max(std::abs(k1), std::abs(k2)) <= K;
}

std::size_t FourierField::index(int k1, int k2) const {
    return static_cast<std::size_t>(k1 + K) * side() + static_cast<std::size_t>(k2 + K);
}

Complex FourierField::at(int k1, int k2) const {
    return in_range(k1, k2) ? coeffs[index(k1, k2)] : Complex{};
}

void FourierField::set_pair(int k1, int k2, Complex v) {
    if (!in_range(k1, k2)) throw std::invalid_argument("FourierField: mode out of range");
    coeffs[index(k1, k2)] = v;
    coeffs[index(-k1, -k2)] = std::conj(v);
}

double FourierField::norm2_of(int k1, int k2) const {
    return k1 * k1 + delta * delta * k2 * k2;
}

double FourierField::energy() const {
    double e = 0.0;
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2)
            if (in_range(k1, k2)) e += std::norm(coeffs[index(k1, k2)]) / norm2_of(k1, k2);
    return e;
}

double FourierField::enstrophy() const {
    double z = 0.0;
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2)
            if (in_range(k1, k2)) z += std::norm(coeffs[index(k1, k2)]);
    return z;
}

double FourierField::reality_defect() const {
    double d = 0.0;
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2)
            if (in_range(k1, k2))
                d = std::max(d, std::abs(coeffs[index(-k1, -k2)] -
                                         std::conj(coeffs[index(k1, k2)])));
    return d;
}

std::vector<double> FourierField::flat() const {
    std::vector<double> v(2 * coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        v[2 * i] = coeffs[i].real();
        v[2 * i + 1] = coeffs[i].imag();
    }
    return v;
}

FourierField FourierField::from_flat(int K, double delta, const std::vector<double>& v) {
    FourierField f(K, delta);
    if (v.size() != 2 * f.coeffs.size())
        throw std::invalid_argument("FourierField::from_flat: size mismatch");
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) f.coeffs[i] = {v[2 * i], v[2 * i + 1]};
    return f;
}

SpectralOperator::SpectralOperator(int K, double delta, double nu)
    : K_(K), delta_(delta), nu_(nu) {
    if (K < 2) throw std::invalid_argument("SpectralOperator: K must be >= 2");
    if (!(delta > 0.0) || nu < 0.0)
        throw std::invalid_argument("SpectralOperator: bad parameters");
    const FourierField proto(K, delta);
    const double d = delta;
    // canonical half: k1 > 0, or k1 == 0 and k2 > 0
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = -K; k2 <= K; ++k2) {
            if (!proto.in_range(k1, k2)) continue;
            if (!(k1 > 0 || (k1 == 0 && k2 > 0))) continue;
            targets_.push_back(static_cast<std::uint32_t>(proto.index(k1, k2)));
            mirrors_.push_back(static_cast<std::uint32_t>(proto.index(-k1, -k2)));
            visc_.push_back(nu / (d * d) * proto.norm2_of(k1, k2));
            const std::size_t begin = terms_.size();
            for (int j1 = -K; j1 <= K; ++j1) {
                for (int j2 = -K; j2 <= K; ++j2) {
                    if (!proto.in_range(j1, j2)) continue;
                    const int l1 = k1 - j1, l2 = k2 - j2;
                    if (!proto.in_range(l1, l2)) continue;
                    const double jperp_l = j2 * l1 - j1 * l2;  // <j_perp, l>
                    if (jperp_l == 0.0) continue;
                    const double w =
                        1.0 / proto.norm2_of(l1, l2) - 1.0 / proto.norm2_of(j1, j2);
                    if (w == 0.0) continue;
                    terms_.push_back({static_cast<std::uint32_t>(proto.index(j1, j2)),
                                      static_cast<std::uint32_t>(proto.index(l1, l2)),
                                      -(d / 2.0) * jperp_l * w});
                }
            }
            spans_.emplace_back(begin, terms_.size());
        }
    }
}

FourierField SpectralOperator::rhs(const FourierField& f) const {
    if (f.K != K_ || f.delta != delta_)
        throw std::invalid_argument("SpectralOperator: field/operator mismatch");
    FourierField out(K_, delta_);
    for (std::size_t n = 0; n < targets_.size(); ++n) {
        Complex acc = -visc_[n] * f.coeffs[targets_[n]];
        const auto [b, e] = spans_[n];
        for (std::size_t t = b; t < e; ++t)
            acc += terms_[t].coeff * f.coeffs[terms_[t].j] * f.coeffs[terms_[t].l];
        out.coeffs[targets_[n]] = acc;
        out.coeffs[mirrors_[n]] = std::conj(acc);
    }
    return out;
}

RhsFn SpectralOperator::flow() const {
    // copies of the precomputed tables keep the closure self-contained
    auto targets = targets_;
    auto mirrors = mirrors_;
    auto visc = visc_;
    auto spans = spans_;
    auto terms = terms_;
    return [targets, mirrors, visc, spans, terms](double, const std::vector<double>& y,
                                                  std::vector<double>& dy) {
        dy.assign(y.size(), 0.0);
        for (std::size_t n = 0; n < targets.size(); ++n) {
            const std::size_t kt = targets[n];
            double re = -visc[n] * y[2 * kt], im = -visc[n] * y[2 * kt + 1];
            const auto [b, e] = spans[n];
            for (std::size_t t = b; t < e; ++t) {
                const std::size_t j = terms[t].j, l = terms[t].l;
                const double jr = y[2 * j], ji = y[2 * j + 1];
                const double lr = y[2 * l], li = y[2 * l + 1];
                re += terms[t].coeff * (jr * lr - ji * li);
                im += terms[t].coeff * (jr * li + ji * lr);
            }
            dy[2 * kt] = re;
            dy[2 * kt + 1] = im;
            dy[2 * mirrors[n]] = re;
            dy[2 * mirrors[n] + 1] = -im;
        }
    };
}

FourierField full_rhs(const FourierField& f, double nu) {
    return SpectralOperator(f.K, f.delta, nu).rhs(f);
}

FourierField exact_family(int m, const std::array<double, 4>& a, double delta, double nu,
                          double t, int K) {
    if (m < 1) throw std::invalid_argument("exact_family: m must be >= 1");
    if (K < std::max(2, m)) throw std::invalid_argument("exact_family: K too small for m");
    const bool x_empty = a[0] == 0.0 && a[1] == 0.0;
    const bool y_empty = a[2] == 0.0 && a[3] == 0.0;
    if (delta != 1.0 && !x_empty && !y_empty)
        throw std::invalid_argument(
            "exact_family: mixed modes are exact only at delta = 1");
    FourierField f(K, delta);
    const double ex = std::exp(-nu * m * m * t / (delta * delta));
    const double ey = std::exp(-nu * m * m * t);
    if (!x_empty) f.set_pair(m, 0, 0.5 * ex * Complex{a[0], -a[1]});
    if (!y_empty) f.set_pair(0, m, 0.5 * ey * Complex{a[2], -a[3]});
    return f;
}

ModeState project8(const FourierField& f) {
    return {f.at(1, 0), f.at(0, 1), f.at(1, 1), f.at(1, -1)};
}

ConservationReport euler_conservation_report(const FourierField& f0, double horizon,
                                             double dt) {
    const SpectralOperator op(f0.K, f0.delta, 0.0);
    TimeGrid grid{0.0, horizon, dt, 1};
    const Trajectory traj = integrate(op.flow(), f0.flat(), grid, "euler");
    const double E0 = f0.energy(), Z0 = f0.enstrophy();
    if (!(E0 > 0.0) || !(Z0 > 0.0))
        throw std::invalid_argument("euler_conservation_report: empty field");
    ConservationReport rep;
    for (const auto& s : traj.states) {
        const FourierField f = FourierField::from_flat(f0.K, f0.delta, s);
        rep.energy_drift = std::max(rep.energy_drift, std::abs(f.energy() - E0) / E0);
        rep.enstrophy_drift =
            std::max(rep.enstrophy_drift, std::abs(f.enstrophy() - Z0) / Z0);
    }
    return rep;
}

FourierField random_field(std::uint64_t seed, int K, double delta, double amplitude) {
    FourierField f(K, delta);
    SplitMix64 rng(seed);
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = -K; k2 <= K; ++k2) {
            if (!f.in_range(k1, k2)) continue;
            if (!(k1 > 0 || (k1 == 0 && k2 > 0))) continue;
            const double damp = std::exp(-0.5 * f.norm2_of(k1, k2));
            f.set_pair(k1, k2, damp * Complex{rng.gaussian(), rng.gaussian()});
        }
    }
    const double z = std::sqrt(f.enstrophy());
    if (z > 0.0) {
        const double s = amplitude / z;
        for (auto& c : f.coeffs) c *= s;
    }
    return f;
}

namespace {

int rate_sign(double rate, double threshold) {
    if (rate > threshold) return -1;  // decaying ratio: y-bar direction
    if (rate < -threshold) return +1;
    return 0;
}

// fitted decay rate of R over the last half of a reduced-style trajectory
double late_R_rate(const Trajectory& traj, bool& degenerate) {
    std::vector<double> ts, vs;
    const double t_lo =
        traj.times.front() + 0.5 * (traj.times.back() - traj.times.front());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] < t_lo) continue;
        const ModeState s = ModeState::from_flat(traj.states[i].data());
        const double n3 = std::norm(s.omega3);
        if (n3 < kChartFloor) {
            degenerate = true;
            return 0.0;
        }
        ts.push_back(traj.times[i]);
        vs.push_back(std::norm(s.omega1) / n3);
    }
    return -fit_log_slope(ts, vs);
}

}  // namespace

SelectionReport selection_experiment(std::uint64_t seed, double delta, double nu, int K,
                                     double horizon, double dt) {
    SelectionReport rep;
    rep.delta = delta;
    rep.nu = nu;
    rep.K = K;
    rep.seed = seed;

    const FourierField f0 = random_field(seed, K, delta, nu);
    const SpectralOperator op(K, delta, nu);
    const std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                            0.5 / dt));  // ~2 samples/unit t
    TimeGrid grid{0.0, horizon, dt, stride};
    const Trajectory full = integrate(op.flow(), f0.flat(), grid, "spectral");

    rep.projected.rhs_id = "spectral/project8";
    rep.projected.times = full.times;
    rep.projected.states.reserve(full.size());
    for (const auto& s : full.states) {
        const FourierField f = FourierField::from_flat(K, delta, s);
        const auto m = project8(f).flat();
        rep.projected.states.emplace_back(m.begin(), m.end());
    }

    ModelParams p{nu, delta};
    const ModeState m0 = project8(f0);
    const Trajectory reduced =
        integrate(reduced_flow(p), {m0.flat().begin(), m0.flat().end()},
                  TimeGrid{0.0, horizon, dt, stride}, "reduced", params_note(p));

    rep.rate_spectral = late_R_rate(rep.projected, rep.chart_degenerate);
    bool deg2 = false;
    rep.rate_reduced = late_R_rate(reduced, deg2);
    rep.chart_degenerate = rep.chart_degenerate || deg2;

    const double gamma0 = 2.0 * nu * std::abs(1.0 / (delta * delta) - 1.0);
    const double thr = delta == 1.0 ? 0.05 * nu : 0.25 * gamma0;
    rep.sign_spectral = rate_sign(rep.rate_spectral, thr);
    rep.sign_reduced = rate_sign(rep.rate_reduced, thr);
    rep.agree = !rep.chart_degenerate && rep.sign_spectral == rep.sign_reduced;
    return rep;
}

}  // namespace qslab
