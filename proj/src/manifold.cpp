#include "qslab/manifold.hpp"

#include <cmath>
#include <stdexcept>

namespace qslab {

double QuadraticForm::eval(const std::array<double, 7>& x) const {
    double v = c0;
    for (int i = 0; i < 7; ++i) {
        v += lin[i] * x[i];
        for (int j = i; j < 7; ++j) v += quad[i][j] * x[i] * x[j];
    }
    return v;
}

std::array<double, 7> QuadraticForm::gradient(const std::array<double, 7>& x) const {
    std::array<double, 7> g{};
    for (int i = 0; i < 7; ++i) {
        g[i] = lin[i] + 2.0 * quad[i][i] * x[i];
        for (int j = 0; j < i; ++j) g[i] += quad[j][i] * x[j];
        for (int j = i + 1; j < 7; ++j) g[i] += quad[i][j] * x[j];
    }
    return g;
}

// stable-coordinate indices
namespace {
constexpr int iA = 0, iw = 1, iz = 2, iPr = 3, iPi = 4, iQr = 5, iQi = 6;
}

QuadraticForm printed_f_coefficients(double r, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("printed_f_coefficients: nu <= 0");
    if (!(r >= kRExclusionBand))
        throw std::invalid_argument("printed_f_coefficients: r below exclusion band");
    const double n2 = nu * nu, n3 = n2 * nu, n4 = n2 * n2;
    const double r2m1 = r * r - 1.0, rp1 = r + 1.0;

    QuadraticForm f;
    f.c0 = r;
    f.lin[iw] = r2m1 / (16.0 * n2);
    f.lin[iz] = r2m1 / (16.0 * n2);
    f.lin[iPr] = -rp1 / (2.0 * nu);
    f.lin[iQr] = rp1 / (2.0 * nu);

    f.quad[iA][iw] = -r2m1 / (160.0 * n4);
    f.quad[iA][iz] = -r2m1 / (160.0 * n4);
    f.quad[iA][iPr] = rp1 / (40.0 * n3);
    f.quad[iA][iQr] = -rp1 / (40.0 * n3);
    f.quad[iw][iz] = r2m1 * (7.0 * r * r + 2.0 * r + 1.0) / (768.0 * n4 * r);
    f.quad[iw][iPr] = -rp1 * (4.0 * r * r - r + 1.0) / (96.0 * n3 * r);
    f.quad[iw][iQr] = rp1 * (3.0 * r + 1.0) / (96.0 * n3);
    f.quad[iw][iw] = r2m1 * (3.0 * r + 2.0) / (768.0 * n4);
    f.quad[iz][iPr] = -rp1 * (3.0 * r + 1.0) / (96.0 * n3);
    f.quad[iz][iQr] = rp1 * (4.0 * r * r - r + 1.0) / (96.0 * n3 * r);
    f.quad[iz][iz] = r2m1 * (3.0 * r + 2.0) / (768.0 * n4);
    f.quad[iPr][iQr] = -r2m1 / (8.0 * n2 * r);
    f.quad[iPi][iQi] = -rp1 * rp1 / (8.0 * n2 * r);
    return f;
}

double manifold_eval(double r, const std::array<double, 7>& point, double nu) {
    return printed_f_coefficients(r, nu).eval(point);
}

StableManifoldChart make_chart(double r, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("make_chart: nu <= 0");
    if (!(r >= kRExclusionBand))
        throw std::invalid_argument("make_chart: r below exclusion band");
    if (std::abs(r - 1.0) < kRExclusionBand)
        throw std::invalid_argument("make_chart: S is singular at r = 1");

    StableManifoldChart ch;
    ch.r = r;
    ch.nu = nu;
    const double rp1 = r + 1.0, rm1 = r - 1.0;
    const double n2 = nu * nu, n3 = n2 * nu;

    auto& S = ch.S;
    S.setZero();
    S(0, 0) = 1.0;
    S(0, 2) = rp1 / (4.0 * nu);
    S(0, 3) = -rp1 / (4.0 * nu);
    S(0, 4) = -rp1 / (2.0 * nu);
    S(0, 6) = rp1 / (2.0 * nu);
    S(1, 1) = 1.0;
    S(2, 2) = -4.0 * nu / rm1;
    S(3, 3) = 4.0 * nu / rm1;
    S(4, 3) = 1.0;
    S(4, 4) = 1.0;
    S(5, 5) = 1.0;
    S(6, 2) = 1.0;
    S(6, 6) = 1.0;
    S(7, 7) = 1.0;

    auto& Si = ch.Sinv;
    Si.setZero();
    Si(0, 0) = 1.0;
    Si(0, 2) = -(r * r - 1.0) / (16.0 * n2);
    Si(0, 3) = -(r * r - 1.0) / (16.0 * n2);
    Si(0, 4) = rp1 / (2.0 * nu);
    Si(0, 6) = -rp1 / (2.0 * nu);
    Si(1, 1) = 1.0;
    Si(2, 2) = -rm1 / (4.0 * nu);
    Si(3, 3) = rm1 / (4.0 * nu);
    Si(4, 3) = -rm1 / (4.0 * nu);
    Si(4, 4) = 1.0;
    Si(5, 5) = 1.0;
    Si(6, 2) = rm1 / (4.0 * nu);
    Si(6, 6) = 1.0;
    Si(7, 7) = 1.0;

    auto& L = ch.Lambda;
    L.setZero();
    L(1, 1) = -2.0 * nu;
    L(2, 2) = -4.0 * nu;
    L(3, 3) = -4.0 * nu;
    for (int i = 4; i < 8; ++i) L(i, i) = -2.0 * nu;

    auto& J = ch.J;
    J.setZero();
    J(0, 4) = 1.0 + r;
    J(0, 6) = -(1.0 + r);
    J(1, 1) = -2.0 * nu;
    J(2, 2) = -4.0 * nu;
    J(3, 3) = -4.0 * nu;
    J(4, 3) = 0.5 * (1.0 - r);
    J(4, 4) = -2.0 * nu;
    J(6, 2) = 0.5 * (r - 1.0);
    J(6, 6) = -2.0 * nu;
    J(5, 5) = -2.0 * nu;
    J(7, 7) = -2.0 * nu;

    const double frac = rp1 / rm1 + 1.0 / r;
    ch.c25 = rp1 / (40.0 * n3);
    ch.c27 = -rp1 / (40.0 * n3);
    ch.c34 = rp1 / (16.0 * n2) * frac;
    ch.c35 = -rp1 / (12.0 * n2) * (0.5 - frac);
    ch.c37 = -rp1 / (12.0 * n2) * (0.5 + rp1 / rm1);
    ch.c33 = -r * rp1 / (16.0 * n2 * rm1);
    ch.c45 = -rp1 / (12.0 * n2) * (0.5 + rp1 / rm1);
    ch.c47 = -rp1 / (12.0 * n2) * (0.5 - frac);
    ch.c44 = -r * rp1 / (16.0 * n2 * rm1);
    ch.c57 = -(r * r - 1.0) / (8.0 * n2 * r);
    ch.c68 = -rp1 * rp1 / (8.0 * n2 * r);
    return ch;
}

double StableManifoldChart::h(const std::array<double, 7>& y) const {
    const double y2 = y[0], y3 = y[1], y4 = y[2], y5 = y[3], y6 = y[4], y7 = y[5],
                 y8 = y[6];
    return c25 * y2 * y5 + c27 * y2 * y7 + c34 * y3 * y4 + c35 * y3 * y5 +
           c37 * y3 * y7 + c33 * y3 * y3 + c45 * y4 * y5 + c47 * y4 * y7 +
           c44 * y4 * y4 + c57 * y5 * y7 + c68 * y6 * y8;
}

namespace {

// f reconstructed from the chart: r + linear terms of S^-1 row 1 + h(y(x))
double chart_f_eval(const StableManifoldChart& ch, const std::array<double, 7>& x) {
    const double r = ch.r, nu = ch.nu;
    const double A = x[iA], w = x[iw], z = x[iz], Pr = x[iPr], Pi = x[iPi], Qr = x[iQr],
                 Qi = x[iQi];
    const double k = (r - 1.0) / (4.0 * nu);
    const std::array<double, 7> y = {A, -k * w, k * z, Pr - k * z, Pi, Qr + k * w, Qi};
    const double linear = (r * r - 1.0) / (16.0 * nu * nu) * (w + z) -
                          (r + 1.0) / (2.0 * nu) * Pr + (r + 1.0) / (2.0 * nu) * Qr;
    return r + linear + ch.h(y);
}

}  // namespace

QuadraticForm chart_f_coefficients(const StableManifoldChart& ch) {
    QuadraticForm f;
    std::array<double, 7> x{};
    f.c0 = chart_f_eval(ch, x);
    std::array<double, 7> fp{}, fm{};
    for (int i = 0; i < 7; ++i) {
        x.fill(0.0);
        x[i] = 1.0;
        fp[i] = chart_f_eval(ch, x);
        x[i] = -1.0;
        fm[i] = chart_f_eval(ch, x);
        f.lin[i] = 0.5 * (fp[i] - fm[i]);
        f.quad[i][i] = 0.5 * (fp[i] + fm[i]) - f.c0;
    }
    for (int i = 0; i < 7; ++i)
        for (int j = i + 1; j < 7; ++j) {
            x.fill(0.0);
            x[i] = 1.0;
            x[j] = 1.0;
            f.quad[i][j] = chart_f_eval(ch, x) - f.c0 - f.lin[i] - f.lin[j] -
                           f.quad[i][i] - f.quad[j][j];
        }
    return f;
}

std::array<double, 8> shifted_rhs(const std::array<double, 8>& yv, double r, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("shifted_rhs: nu <= 0");
    if (std::abs(r - 1.0) < kRExclusionBand)
        throw std::invalid_argument("shifted_rhs: r = 1 excluded (1/(r-1) terms)");
    const double y1 = yv[0], y2 = yv[1], y3 = yv[2], y4 = yv[3], y5 = yv[4], y6 = yv[5],
                 y7 = yv[6], y8 = yv[7];
    const double rp1 = r + 1.0, rm1 = r - 1.0;
    const double lam = y1 + rp1 / (4.0 * nu) * (y3 - y4) - rp1 / (2.0 * nu) * (y5 - y7);
    if (!(lam + r > kLambdaFloor))
        throw std::domain_error("shifted_rhs: lambda + r at or below floor");
    const double inv = 1.0 / (lam + r);
    const double s45 = y4 + y5, s37 = y3 + y7;
    const double diff = s45 - s37;

    std::array<double, 8> d{};
    d[0] = lam * diff + rp1 / rm1 * (y3 - y4) * lam + rp1 / (10.0 * nu * nu) * y2 * (y7 - y5) +
           rp1 / (2.0 * nu) * diff * diff + rp1 / (2.0 * nu) * s45 * s37 * (1.0 - inv) +
           rp1 / (2.0 * nu) * y6 * y8 * (1.0 + inv);
    d[1] = -2.0 * nu * y2 + 3.0 / (5.0 * rm1) * y2 * (y4 - y3);
    d[2] = -4.0 * nu * y3 - 2.0 / (5.0 * nu) * y2 * y3;
    d[3] = -4.0 * nu * y4 - 2.0 / (5.0 * nu) * y2 * y4;
    d[4] = -2.0 * nu * y5 + 2.0 / (5.0 * nu) * y2 * y4 - 2.0 * nu / rm1 * lam * y4 -
           1.0 / (5.0 * nu) * y2 * s45 + diff * s45 + 0.5 * s45 * s37 * (1.0 - inv) +
           0.5 * y6 * y8 * (1.0 + inv);
    d[5] = -2.0 * nu * y6 - 1.0 / (5.0 * nu) * y2 * y6 + y6 * diff +
           0.5 * y6 * s37 * (1.0 - inv) - 0.5 * y8 * s45 * (1.0 + inv);
    d[6] = -2.0 * nu * y7 + 2.0 / (5.0 * nu) * y2 * y3 - 2.0 * nu / rm1 * lam * y3 -
           1.0 / (5.0 * nu) * y2 * s37 + diff * s37 + 0.5 * s45 * s37 * (inv - 1.0) -
           0.5 * y6 * y8 * (1.0 + inv);
    d[7] = -2.0 * nu * y8 - 1.0 / (5.0 * nu) * y2 * y8 + y8 * diff +
           0.5 * y6 * s37 * (1.0 + inv) + 0.5 * y8 * s45 * (inv - 1.0);
    return d;
}

std::array<double, 8> pqshifted_rhs(const std::array<double, 8>& x, double r, double nu) {
    ObservableState o = ObservableState::from_flat(x.data());
    o.R += r;
    const ObservableState f = observable_rhs(o, ModelParams{nu, 1.0});
    return f.flat();
}

double manifold_residual(double r, double nu, const std::array<double, 7>& direction,
                         double scale) {
    if (!(scale >= 0.0)) throw std::invalid_argument("manifold_residual: scale < 0");
    if (scale == 0.0) return 0.0;
    const QuadraticForm f = printed_f_coefficients(r, nu);
    std::array<double, 7> x{};
    for (int i = 0; i < 7; ++i) x[i] = scale * direction[i];

    ObservableState o;
    o.R = f.eval(x);
    o.A = x[iA];
    o.w = x[iw];
    o.z = x[iz];
    o.P = {x[iPr], x[iPi]};
    o.Q = {x[iQr], x[iQi]};
    const ObservableState d = observable_rhs(o, ModelParams{nu, 1.0});
    const auto df = d.flat();  // (dR, dA, dw, dz, dPr, dPi, dQr, dQi)
    const auto grad = f.gradient(x);
    double fdot = 0.0;
    for (int i = 0; i < 7; ++i) fdot += grad[i] * df[i + 1];
    return std::abs(df[0] - fdot);
}

std::vector<std::array<double, 7>> unit_directions(std::size_t count, std::uint64_t seed) {
    static const int bases[7] = {2, 3, 5, 7, 11, 13, 17};
    auto halton = [](std::uint64_t index, int base) {
        double f = 1.0, v = 0.0;
        while (index > 0) {
            f /= base;
            v += f * static_cast<double>(index % base);
            index /= base;
        }
        return v;
    };
    std::vector<std::array<double, 7>> dirs;
    dirs.reserve(count);
    std::uint64_t idx = seed + 1;
    while (dirs.size() < count) {
        std::array<double, 7> d{};
        double norm2 = 0.0;
        for (int c = 0; c < 7; ++c) {
            d[c] = 2.0 * halton(idx, bases[c]) - 1.0;
            norm2 += d[c] * d[c];
        }
        ++idx;
        if (norm2 < 1e-4) continue;
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& v : d) v *= inv;
        dirs.push_back(d);
    }
    return dirs;
}

}  // namespace qslab
