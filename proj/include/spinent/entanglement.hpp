#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "observables.hpp"

namespace spinent {

// tau_1 = 1 - 4 sum_a (M^a)^2, the one-site tangle.  The broken-symmetry
// variant feeds the long-range M^x estimate through this same expression,
// which at small L can overshoot the Bloch sphere near the factorizing
// field; negative values are clamped to zero like the [0,1] bound requires.
inline double one_tangle(const std::array<double, 3>& m) {
    for (double c : m)
        if (std::abs(c) > 0.5 + 1e-12)
            throw std::invalid_argument("one_tangle: |M^alpha| must be <= 1/2");
    const double t = 1.0 - 4.0 * (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    return std::clamp(t, 0.0, 1.0);
}

// Same quantity as 4 det rho^(1); independent path used for cross checks.
inline double one_tangle_from_rdm(const ReducedDensityMatrix& rho1) {
    if (rho1.order != 1) throw std::invalid_argument("one_tangle_from_rdm: order != 1");
    const double t = 4.0 * rho1.matrix.determinant().real();
    return std::clamp(t, 0.0, 1.0);
}

struct ConcurrenceTriple {
    double c1 = 0.0;  // g^zz - 1/4 + |g^xx - g^yy|
    double c2 = 0.0;  // |g^xx + g^yy| - sqrt((1/4 + g^zz)^2 - (M^z)^2)
    double c = 0.0;   // 2 max{0, c1, c2}
};

inline ConcurrenceTriple concurrence_formula(double gxx, double gyy, double gzz,
                                             double mz) {
    for (double g : {gxx, gyy, gzz})
        if (std::abs(g) > 0.25 + 1e-12)
            throw std::invalid_argument("concurrence_formula: |g| must be <= 1/4");
    if (std::abs(mz) > 0.5 + 1e-12)
        throw std::invalid_argument("concurrence_formula: |M^z| must be <= 1/2");
    double arg = (0.25 + gzz) * (0.25 + gzz) - mz * mz;
    if (arg < -1e-12)
        throw std::invalid_argument("concurrence_formula: non-physical correlators");
    arg = std::max(arg, 0.0);

    ConcurrenceTriple t;
    t.c1 = gzz - 0.25 + std::abs(gxx - gyy);
    t.c2 = std::abs(gxx + gyy) - std::sqrt(arg);
    t.c = std::min(1.0, 2.0 * std::max({0.0, t.c1, t.c2}));
    return t;
}

// General two-qubit concurrence; independent oracle for the correlator
// formula.  lambda_k are the descending square roots of the eigenvalues of
// rho (sy x sy) rho* (sy x sy).
inline double concurrence_wootters(const ReducedDensityMatrix& rho2) {
    if (rho2.order != 2 || rho2.matrix.rows() != 4)
        throw std::invalid_argument("concurrence_wootters: need a 4x4 order-2 rdm");
    const Eigen::Matrix4cd rho = rho2.matrix;
    if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-8)
        throw std::invalid_argument("concurrence_wootters: trace != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> herm(rho);
    if (herm.eigenvalues().minCoeff() < -1e-8)
        throw std::invalid_argument("concurrence_wootters: non-positive input");

    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = yy(3, 0) = -1.0;
    yy(1, 2) = yy(2, 1) = 1.0;
    const Eigen::Matrix4cd m = rho * yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(m, false);
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i)
        lam[i] = std::sqrt(std::max(0.0, es.eigenvalues()[i].real()));
    std::sort(lam.begin(), lam.end(), std::greater<>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

// tau_2 = sum_{j != i} C_ij^2, assembled from per-class concurrences and the
// per-site partner multiplicities.
inline double tau2(const std::vector<std::pair<double, int>>& c_and_mult) {
    double acc = 0.0;
    for (const auto& [c, mult] : c_and_mult) acc += mult * c * c;
    return acc;
}

// R = tau_2 / tau_1, undefined at the factorized point.
inline std::optional<double> entanglement_ratio(double t2, double t1) {
    if (t1 < 1e-12) return std::nullopt;
    return t2 / t1;
}

enum class CkwBasis { Broken, Sym };

struct EntanglementReport {
    double tau1_sym = 0.0;
    double tau1_broken = 0.0;
    std::vector<ConcurrenceTriple> concurrences;  // one per pair class
    double tau2 = 0.0;
    std::optional<double> ratio;
    bool ckw_ok = true;
};

inline EntanglementReport build_entanglement_report(
    const CorrelatorSet& cs, const std::vector<PairClass>& classes,
    CkwBasis basis = CkwBasis::Broken) {
    EntanglementReport rep;
    rep.tau1_sym = one_tangle({0.0, 0.0, cs.mz});
    rep.tau1_broken = one_tangle({cs.mx_lr, 0.0, cs.mz});

    std::vector<std::pair<double, int>> cm;
    for (size_t q = 0; q < classes.size(); ++q) {
        auto t = concurrence_formula(cs.g[q][0], cs.g[q][1], cs.g[q][2], cs.mz);
        cm.emplace_back(t.c, classes[q].multiplicity);
        rep.concurrences.push_back(t);
    }
    rep.tau2 = tau2(cm);
    const double t1 = (basis == CkwBasis::Broken) ? rep.tau1_broken : rep.tau1_sym;
    rep.ratio = entanglement_ratio(rep.tau2, t1);
    rep.ckw_ok = rep.tau2 <= t1 + 1e-12;
    return rep;
}

}  // namespace spinent
