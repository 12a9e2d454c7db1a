#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "hamiltonian.hpp"

namespace spinent {

struct SolverOptions {
    double tol = 1e-11;          // residual tolerance, relative to max(1,|E|)
    int max_iter = 600;          // Krylov dimension cap per sector
    std::uint64_t seed = 12345;  // start-vector seed
};

struct SectorResult {
    int parity = 1;
    std::vector<double> energies;     // k lowest, ascending
    std::vector<RealVector> vectors;  // matching Ritz vectors
    std::vector<double> residuals;    // true residuals ||Hx - Ex||
    int iterations = 0;
    bool converged = false;
};

struct GroundStateResult {
    double energy = 0.0;
    StateVector vector;
    int parity = 1;
    double gap = 0.0;  // E1 - E0 across both parity sectors
    int iterations = 0;
    double residual = 0.0;
};

namespace detail {

inline RealVector sector_random_vector(int n_sites, int parity, std::mt19937_64& rng) {
    const std::int64_t dim = std::int64_t(1) << n_sites;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RealVector v(dim);
    for (std::int64_t s = 0; s < dim; ++s) {
        double x = u(rng);
        v[s] = (parity_of_basis_state(std::uint64_t(s)) == parity) ? x : 0.0;
    }
    double nrm = v.norm();
    if (nrm == 0.0) throw std::runtime_error("empty parity sector start vector");
    v /= nrm;
    return v;
}

inline void reorthogonalize(RealVector& w, const std::vector<RealVector>& basis,
                            const std::vector<RealVector>& locked) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& u : locked) w -= u.dot(w) * u;
        for (const auto& u : basis) w -= u.dot(w) * u;
    }
}

}  // namespace detail

// Lanczos with full reorthogonalization restricted to one Z2 parity sector.
// H has exactly zero matrix elements between sectors, so a sector-pure start
// vector keeps the whole Krylov space in the sector; no projection needed.
// Vectors in `locked` are deflated away (kept out of the Krylov space).
inline SectorResult lanczos_sector(const ModelParams& p, const Lattice& lat,
                                   int parity, int k, const SolverOptions& opts,
                                   const std::vector<RealVector>& locked = {}) {
    p.validate();
    if (lat.n_sites > 24) throw std::invalid_argument("lanczos_sector: N > 24");
    const std::int64_t dim = std::int64_t(1) << lat.n_sites;
    const std::int64_t sector_dim = dim / 2 - std::int64_t(locked.size());
    if (k < 1 || k > sector_dim) throw std::invalid_argument("lanczos_sector: bad k");
    if (opts.max_iter < k || opts.tol <= 0.0)
        throw std::invalid_argument("lanczos_sector: bad solver options");

    std::mt19937_64 rng(opts.seed);
    std::vector<RealVector> basis;
    std::vector<double> alpha, beta;  // beta[j] couples v_j and v_{j+1}
    {
        RealVector v0 = detail::sector_random_vector(lat.n_sites, parity, rng);
        detail::reorthogonalize(v0, {}, locked);
        v0 /= v0.norm();
        basis.push_back(std::move(v0));
    }

    const int maxit = int(std::min<std::int64_t>(opts.max_iter, sector_dim));
    SectorResult res;
    res.parity = parity;

    auto ritz = [&](int m) {
        Eigen::Map<const Eigen::VectorXd> d(alpha.data(), m);
        Eigen::VectorXd e = Eigen::VectorXd::Zero(std::max(m - 1, 0));
        for (int i = 0; i + 1 < m; ++i) e[i] = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
        return es;
    };

    // Extracts the kk lowest Ritz pairs and tests true residuals.
    auto extract = [&](int m, int kk) {
        auto es = ritz(m);
        res.energies.clear();
        res.vectors.clear();
        res.residuals.clear();
        bool all_ok = true;
        for (int i = 0; i < kk; ++i) {
            RealVector x = RealVector::Zero(dim);
            for (int q = 0; q < m; ++q) x += es.eigenvectors()(q, i) * basis[q];
            x /= x.norm();
            double theta = es.eigenvalues()[i];
            double r = (apply_hamiltonian(p, lat, x) - theta * x).norm();
            res.energies.push_back(theta);
            res.vectors.push_back(std::move(x));
            res.residuals.push_back(r);
            if (r > opts.tol * std::max(1.0, std::abs(theta))) all_ok = false;
        }
        return all_ok;
    };

    for (int j = 0;; ++j) {
        RealVector w = apply_hamiltonian(p, lat, basis[j]);
        alpha.push_back(basis[j].dot(w));
        detail::reorthogonalize(w, basis, locked);
        double b = w.norm();
        const int m = int(alpha.size());
        res.iterations = m;

        const bool breakdown = b < 1e-13 * std::max(1.0, std::abs(alpha[0]));
        const bool exhausted = (std::int64_t(m) == sector_dim);
        const bool last = (m == maxit) || exhausted;

        if (m >= k && (last || breakdown || m % 8 == 0)) {
            auto es = ritz(m);
            bool plausible = true;
            for (int i = 0; i < k; ++i) {
                double est = breakdown ? 0.0 : std::abs(b * es.eigenvectors()(m - 1, i));
                if (est > 0.1 * opts.tol * std::max(1.0, std::abs(es.eigenvalues()[i])))
                    plausible = false;
            }
            if (plausible || last) {
                bool ok = extract(m, k);
                // an exhausted Krylov space is exact regardless of the estimate
                res.converged = ok || exhausted;
                if (res.converged || last) return res;
            }
        }
        if (last) {
            if (res.energies.empty()) extract(m, std::min(m, k));
            return res;
        }

        if (breakdown) {
            // Krylov space closed early: continue in the orthogonal complement
            RealVector fresh;
            double fn = 0.0;
            for (int attempt = 0; attempt < 3 && fn < 1e-8; ++attempt) {
                fresh = detail::sector_random_vector(lat.n_sites, parity, rng);
                detail::reorthogonalize(fresh, basis, locked);
                fn = fresh.norm();
            }
            if (fn < 1e-8) {  // complement empty: the subspace is exact
                extract(m, std::min(m, k));
                res.converged = (m >= k);
                return res;
            }
            basis.push_back(fresh / fn);
            beta.push_back(0.0);
        } else {
            basis.push_back(w / b);
            beta.push_back(b);
        }
    }
}

// Ground state over both parity sectors.  On a tie within 1e-10 the even
// sector is returned; the near-degeneracy shows up in gap.
inline GroundStateResult lanczos_ground(const ModelParams& p, const Lattice& lat,
                                        const SolverOptions& opts = {}) {
    SectorResult even = lanczos_sector(p, lat, +1, 2, opts);
    SectorResult odd = lanczos_sector(p, lat, -1, 2, opts);
    if (!even.converged || !odd.converged) {
        double best = std::min(even.residuals.empty() ? 1.0 : even.residuals[0],
                               odd.residuals.empty() ? 1.0 : odd.residuals[0]);
        throw std::runtime_error("lanczos_ground: no convergence after max iterations"
                                 ", best residual " + std::to_string(best));
    }
    const double e0e = even.energies[0], e0o = odd.energies[0];
    const double degen_tol = 1e-10 * std::max(1.0, std::abs(std::min(e0e, e0o)));
    const bool pick_even = (std::abs(e0e - e0o) <= degen_tol) ? true : (e0e <= e0o);
    const SectorResult& win = pick_even ? even : odd;

    std::vector<double> all = {even.energies[0], even.energies[1],
                               odd.energies[0], odd.energies[1]};
    std::sort(all.begin(), all.end());

    GroundStateResult g;
    g.energy = win.energies[0];
    g.vector = win.vectors[0].cast<Complex>();
    g.parity = win.parity;
    g.gap = std::max(0.0, all[1] - all[0]);
    g.iterations = win.iterations;
    g.residual = win.residuals[0];
    return g;
}

// k lowest eigenvalues across both parity sectors, ascending.  Sequential
// deflation (lock each converged vector, restart in its complement) keeps
// exact degeneracies with their full multiplicity, which single-vector
// Lanczos would silently collapse.
inline std::vector<double> low_spectrum(const ModelParams& p, const Lattice& lat,
                                        int k, const SolverOptions& opts = {}) {
    if (k < 1 || k > 6) throw std::invalid_argument("low_spectrum: k must be in [1, 6]");
    if (lat.n_sites > 20) throw std::invalid_argument("low_spectrum: N > 20");

    auto deflated = [&](int parity) {
        std::vector<RealVector> locked;
        std::vector<double> energies;
        for (int t = 0; t < k; ++t) {
            // a fresh start vector per pass: reusing the seed would leave the
            // start exactly orthogonal to surviving degenerate copies
            SolverOptions pass = opts;
            pass.seed = opts.seed + 0x9E3779B97F4A7C15ull * std::uint64_t(t);
            SectorResult r = lanczos_sector(p, lat, parity, 1, pass, locked);
            if (!r.converged) throw std::runtime_error("low_spectrum: no convergence");
            if (r.residuals[0] > 1e-8)
                throw std::runtime_error("low_spectrum: residual above 1e-8");
            energies.push_back(r.energies[0]);
            locked.push_back(std::move(r.vectors[0]));
        }
        return energies;
    };

    std::vector<double> all = deflated(+1);
    std::vector<double> odd = deflated(-1);
    all.insert(all.end(), odd.begin(), odd.end());
    std::sort(all.begin(), all.end());
    all.resize(k);
    return all;
}

}  // namespace spinent
