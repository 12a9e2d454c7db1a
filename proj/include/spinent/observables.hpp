#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "lattice.hpp"
#include "model.hpp"

namespace spinent {

enum class Axis { X = 0, Y = 1, Z = 2 };

namespace detail {

inline int n_sites_of(const StateVector& v) {
    int n = 0;
    while ((std::int64_t(1) << n) < v.size()) ++n;
    if ((std::int64_t(1) << n) != v.size())
        throw std::invalid_argument("state dimension is not a power of two");
    return n;
}

}  // namespace detail

inline double site_magnetization(const StateVector& v, int site, Axis axis) {
    const std::int64_t dim = v.size();
    const std::int64_t mask = std::int64_t(1) << site;
    Complex acc(0.0, 0.0);
    switch (axis) {
        case Axis::Z:
            for (std::int64_t s = 0; s < dim; ++s)
                acc += std::norm(v[s]) * (((s >> site) & 1) - 0.5);
            break;
        case Axis::X:
            for (std::int64_t s = 0; s < dim; ++s)
                acc += std::conj(v[s ^ mask]) * v[s] * 0.5;
            break;
        case Axis::Y:
            // S^y |up> = +(i/2)|down>, S^y |down> = -(i/2)|up>
            for (std::int64_t s = 0; s < dim; ++s) {
                double sgn = ((s >> site) & 1) ? 1.0 : -1.0;
                acc += std::conj(v[s ^ mask]) * Complex(0.0, 0.5 * sgn) * v[s];
            }
            break;
    }
    return acc.real();
}

// Translation-averaged <S^alpha>.
inline double magnetization(const StateVector& v, Axis axis) {
    const int n = detail::n_sites_of(v);
    double m = 0.0;
    for (int i = 0; i < n; ++i) m += site_magnetization(v, i, axis);
    return m / n;
}

inline double pair_correlator(const StateVector& v, int i, int j, Axis axis) {
    const std::int64_t dim = v.size();
    const std::int64_t mi = std::int64_t(1) << i, mj = std::int64_t(1) << j;
    double acc = 0.0;
    switch (axis) {
        case Axis::Z:
            for (std::int64_t s = 0; s < dim; ++s)
                acc += std::norm(v[s]) * (((s >> i) & 1) - 0.5) * (((s >> j) & 1) - 0.5);
            break;
        case Axis::X:
            for (std::int64_t s = 0; s < dim; ++s)
                acc += (std::conj(v[s ^ (mi | mj)]) * v[s]).real() * 0.25;
            break;
        case Axis::Y:
            // S^y_i S^y_j flips both bits: +1/4 anti-aligned, -1/4 aligned
            for (std::int64_t s = 0; s < dim; ++s) {
                double sgn = (((s >> i) & 1) == ((s >> j) & 1)) ? -1.0 : 1.0;
                acc += (std::conj(v[s ^ (mi | mj)]) * v[s]).real() * 0.25 * sgn;
            }
            break;
    }
    return acc;
}

// g^{aa} averaged over all pairs of a translation class.
inline double correlator(const StateVector& v, const PairClass& pc, Axis axis) {
    double acc = 0.0;
    for (const auto& [i, j] : pc.pairs) acc += pair_correlator(v, i, j, axis);
    return acc / double(pc.pairs.size());
}

// Broken-symmetry estimator M^x = |<S^x_i S^x_{i+L/2}>|^{1/2}; on the ladder
// the same-leg class at rung displacement L/2 plays the role of the
// maximum-distance correlator.
inline double mx_longrange(const StateVector& v, const Lattice& lat) {
    const int L = lat.length;
    double g = 0.0;
    int cnt = 0;
    if (lat.kind == LatticeKind::Chain) {
        for (int i = 0; i < L / 2; ++i) {
            g += pair_correlator(v, i, i + L / 2, Axis::X);
            ++cnt;
        }
    } else {
        for (int r = 0; r < L / 2; ++r)
            for (int leg = 0; leg < 2; ++leg) {
                g += pair_correlator(v, lat.site(r, leg), lat.site((r + L / 2) % L, leg),
                                     Axis::X);
                ++cnt;
            }
    }
    return std::sqrt(std::abs(g / cnt));
}

// Reduced density matrices in the (up, down) local ordering, i.e. basis
// {uu, ud, du, dd} for two sites with the first site leftmost.
struct ReducedDensityMatrix {
    int order = 1;
    Eigen::MatrixXcd matrix;
    std::array<int, 2> sites{-1, -1};
};

inline ReducedDensityMatrix rdm(const StateVector& v, int site) {
    const std::int64_t dim = v.size();
    const std::int64_t m = std::int64_t(1) << site;
    ReducedDensityMatrix r;
    r.order = 1;
    r.sites = {site, -1};
    r.matrix = Eigen::MatrixXcd::Zero(2, 2);
    for (std::int64_t s = 0; s < dim; ++s) {
        const int a = 1 - int((s >> site) & 1);  // 0 = up
        for (int b = 0; b < 2; ++b) {
            const std::int64_t t = (s & ~m) | (std::int64_t(1 - b) << site);
            r.matrix(a, b) += v[s] * std::conj(v[t]);
        }
    }
    return r;
}

inline ReducedDensityMatrix rdm(const StateVector& v, int site_i, int site_j) {
    if (site_i == site_j) throw std::invalid_argument("rdm: sites must be distinct");
    const std::int64_t dim = v.size();
    const std::int64_t mi = std::int64_t(1) << site_i, mj = std::int64_t(1) << site_j;
    ReducedDensityMatrix r;
    r.order = 2;
    r.sites = {site_i, site_j};
    r.matrix = Eigen::MatrixXcd::Zero(4, 4);
    for (std::int64_t s = 0; s < dim; ++s) {
        const int a = 2 * (1 - int((s >> site_i) & 1)) + (1 - int((s >> site_j) & 1));
        for (int b = 0; b < 4; ++b) {
            std::int64_t t = s & ~(mi | mj);
            if (!(b & 2)) t |= mi;
            if (!(b & 1)) t |= mj;
            r.matrix(a, b) += v[s] * std::conj(v[t]);
        }
    }
    return r;
}

// Least-squares exponential fit of the staggering-removed connected
// correlator c(r) = (-1)^r g^{xx}(r) - mx2 over r in [2, L/2 - 1]
// (Original-frame convention; r = 1 and the wraparound point are excluded).
// g_x[r-1] holds the distance-r value, r = 1 .. L/2.
inline std::optional<double> correlation_length_fit(const std::vector<double>& g_x,
                                                    double mx2) {
    const int half = int(g_x.size());
    const int lo = 2, hi = half - 1;  // inclusive window
    if (hi - lo + 1 < 4) return std::nullopt;

    std::vector<double> rs, logc;
    for (int r = lo; r <= hi; ++r) {
        const double c = ((r % 2 == 0) ? 1.0 : -1.0) * g_x[r - 1] - mx2;
        if (c > 1e-300) {
            rs.push_back(double(r));
            logc.push_back(std::log(c));
        }
    }
    if (rs.size() < 3) return std::nullopt;

    bool degenerate = true;
    for (double y : logc)
        if (std::abs(y - logc[0]) > 1e-14) degenerate = false;
    if (degenerate) return std::nullopt;

    const double n = double(rs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t q = 0; q < rs.size(); ++q) {
        sx += rs[q];
        sy += logc[q];
        sxx += rs[q] * rs[q];
        sxy += rs[q] * logc[q];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (!(slope < 0.0)) return std::nullopt;
    return -1.0 / slope;
}

// Everything the entanglement estimators need from one state.
struct CorrelatorSet {
    double mz = 0.0;
    double mx_lr = 0.0;
    std::vector<std::array<double, 3>> g;  // per pair class: [xx, yy, zz]
    std::optional<double> xi_x;
};

inline CorrelatorSet compute_correlators(const StateVector& v, const Lattice& lat,
                                         const std::vector<PairClass>& classes,
                                         Frame frame) {
    CorrelatorSet cs;
    cs.mz = magnetization(v, Axis::Z);
    cs.mx_lr = mx_longrange(v, lat);
    cs.g.reserve(classes.size());
    for (const auto& pc : classes)
        cs.g.push_back({correlator(v, pc, Axis::X), correlator(v, pc, Axis::Y),
                        correlator(v, pc, Axis::Z)});
    if (lat.kind == LatticeKind::Chain) {
        std::vector<double> gx(lat.length / 2);
        for (size_t c = 0; c < classes.size(); ++c) {
            double val = cs.g[c][0];
            // map to the Original-frame staggered convention before the fit
            if (frame == Frame::Rotated && classes[c].distance % 2 == 1) val = -val;
            gx[classes[c].distance - 1] = val;
        }
        cs.xi_x = correlation_length_fit(gx, cs.mx_lr * cs.mx_lr);
    }
    return cs;
}

}  // namespace spinent
