#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>

#include "analytic.hpp"
#include "eigensolver.hpp"
#include "entanglement.hpp"

namespace spinent {

struct SweepRow {
    double h = 0.0;
    bool converged = false;
    double energy = 0.0;
    double gap = 0.0;
    int parity = 1;
    double mz = 0.0;
    double mx_lr = 0.0;
    double tau1_sym = 0.0;
    double tau1_broken = 0.0;
    std::vector<ConcurrenceTriple> concurrences;
    double tau2 = 0.0;
    std::optional<double> ratio;
    std::optional<double> xi;
    bool ckw_ok = true;
    bool multiplet_resolved = false;
};

namespace detail {

inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

inline double real_sx_cross(const RealVector& u, const RealVector& w, int site) {
    const std::int64_t dim = u.size();
    const std::int64_t m = std::int64_t(1) << site;
    double acc = 0.0;
    for (std::int64_t s = 0; s < dim; ++s) acc += u[s ^ m] * 0.5 * w[s];
    return acc;
}

inline double real_sz_site(const RealVector& u, int site) {
    const std::int64_t dim = u.size();
    double acc = 0.0;
    for (std::int64_t s = 0; s < dim; ++s)
        acc += u[s] * u[s] * (((s >> site) & 1) - 0.5);
    return acc;
}

// At an exact parity-sector degeneracy the finite-size ground level is a
// doublet; the broken-symmetry estimators address the symmetry-broken member.
// Take the combination cos(phi) v_even + sin(phi) v_odd that maximizes the
// site-resolved Bloch length (equivalently, minimizes tau_1).  At the
// factorizing field this recovers the exact product state.
inline StateVector resolve_multiplet(const RealVector& ve, const RealVector& vo,
                                     int n_sites) {
    std::vector<double> ze(n_sites), zo(n_sites), xc(n_sites);
    for (int i = 0; i < n_sites; ++i) {
        ze[i] = real_sz_site(ve, i);
        zo[i] = real_sz_site(vo, i);
        xc[i] = real_sx_cross(ve, vo, i);
    }
    auto neg_bloch = [&](double phi) {
        const double c2 = std::cos(phi) * std::cos(phi), s2 = 1.0 - c2;
        const double sx = std::sin(2.0 * phi);
        double acc = 0.0;
        for (int i = 0; i < n_sites; ++i) {
            const double mz = c2 * ze[i] + s2 * zo[i];
            const double mx = sx * xc[i];
            acc += mz * mz + mx * mx;
        }
        return -acc / n_sites;
    };
    double best_phi = 0.0, best = neg_bloch(0.0);
    const int ngrid = 256;
    for (int q = 1; q < ngrid; ++q) {
        const double phi = q * std::numbers::pi / ngrid;
        const double val = neg_bloch(phi);
        if (val < best) { best = val; best_phi = phi; }
    }
    const double w = std::numbers::pi / ngrid;
    const double phi = golden_min(neg_bloch, best_phi - w, best_phi + w, 1e-12);
    return (std::cos(phi) * ve + std::sin(phi) * vo).cast<Complex>();
}

}  // namespace detail

inline SweepRow compute_row(ModelParams p, const Lattice& lat,
                            const std::vector<PairClass>& classes, double h,
                            const SolverOptions& opts,
                            CkwBasis basis = CkwBasis::Broken) {
    p.h = h;
    SweepRow row;
    row.h = h;
    SectorResult even = lanczos_sector(p, lat, +1, 2, opts);
    SectorResult odd = lanczos_sector(p, lat, -1, 2, opts);
    if (!even.converged || !odd.converged) return row;  // converged = false

    const double e0 = std::min(even.energies[0], odd.energies[0]);
    const double splitting = std::abs(even.energies[0] - odd.energies[0]);
    std::vector<double> all = {even.energies[0], even.energies[1],
                               odd.energies[0], odd.energies[1]};
    std::sort(all.begin(), all.end());

    row.converged = true;
    row.energy = e0;
    row.gap = std::max(0.0, all[1] - all[0]);

    StateVector state;
    if (splitting <= 1e-10 * std::max(1.0, std::abs(e0))) {
        state = detail::resolve_multiplet(even.vectors[0], odd.vectors[0], lat.n_sites);
        row.multiplet_resolved = true;
        row.parity = 1;
    } else {
        const SectorResult& win = (even.energies[0] <= odd.energies[0]) ? even : odd;
        state = win.vectors[0].cast<Complex>();
        row.parity = win.parity;
    }

    CorrelatorSet cs = compute_correlators(state, lat, classes, p.frame);
    EntanglementReport rep = build_entanglement_report(cs, classes, basis);
    row.mz = cs.mz;
    row.mx_lr = cs.mx_lr;
    row.xi = cs.xi_x;
    row.tau1_sym = rep.tau1_sym;
    row.tau1_broken = rep.tau1_broken;
    row.concurrences = std::move(rep.concurrences);
    row.tau2 = rep.tau2;
    row.ratio = rep.ratio;
    row.ckw_ok = rep.ckw_ok;
    return row;
}

inline int sweep_workers(std::size_t n_rows) {
    int n = int(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPIN_ENT_WORKERS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = cap;
    }
    n = std::max(1, std::min<int>(n, int(n_rows)));
    return n;
}

// One row per grid point, rows independent (no warm starts), output order
// and content independent of the worker count.
inline std::vector<SweepRow> field_sweep(const ModelParams& p, const Lattice& lat,
                                         const std::vector<double>& h_grid,
                                         const SolverOptions& opts,
                                         CkwBasis basis = CkwBasis::Broken) {
    if (h_grid.empty()) throw std::invalid_argument("field_sweep: empty grid");
    for (size_t q = 1; q < h_grid.size(); ++q)
        if (!(h_grid[q] > h_grid[q - 1]))
            throw std::invalid_argument("field_sweep: grid must be strictly increasing");

    const auto classes = pair_classes(lat);
    std::vector<SweepRow> rows(h_grid.size());
    const int workers = sweep_workers(h_grid.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t q = next.fetch_add(1);
            if (q >= h_grid.size()) return;
            try {
                rows[q] = compute_row(p, lat, classes, h_grid[q], opts, basis);
            } catch (const std::exception&) {
                rows[q].h = h_grid[q];  // converged stays false
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return rows;
}

// ---------------------------------------------------------------------------
// factorization detector

struct FactorizationProbe {
    double h = 0.0;
    double splitting = 0.0;
    double tau1_broken = 0.0;
    std::optional<double> overlap;  // vs the product ansatz (XYX only)
    bool multiplet_resolved = false;
};

// Evaluates the factorization certificate quantities at one field value.
// Within the near-degenerate window the overlap is taken against the ground
// doublet as a whole, |P_gs |ansatz>|, since the product state is a member
// of the degenerate level rather than of one parity sector.
inline FactorizationProbe probe_factorization(ModelParams p, const Lattice& lat,
                                              double h, const SolverOptions& opts) {
    p.h = h;
    FactorizationProbe pr;
    pr.h = h;
    SectorResult even = lanczos_sector(p, lat, +1, 1, opts);
    SectorResult odd = lanczos_sector(p, lat, -1, 1, opts);
    if (!even.converged || !odd.converged)
        throw std::runtime_error("probe_factorization: solver did not converge");
    const double e0 = std::min(even.energies[0], odd.energies[0]);
    pr.splitting = std::abs(even.energies[0] - odd.energies[0]);

    StateVector state;
    const bool near_degenerate = pr.splitting <= 1e-5 * std::max(1.0, std::abs(e0));
    if (near_degenerate) {
        state = detail::resolve_multiplet(even.vectors[0], odd.vectors[0], lat.n_sites);
        pr.multiplet_resolved = true;
    } else {
        state = ((even.energies[0] <= odd.energies[0]) ? even : odd)
                    .vectors[0].cast<Complex>();
    }

    const auto classes = pair_classes(lat);
    CorrelatorSet cs = compute_correlators(state, lat, classes, p.frame);
    pr.tau1_broken = one_tangle({cs.mx_lr, 0.0, cs.mz});

    if (std::abs(p.delta_z - 1.0) < 1e-12) {
        const StateVector& a = build_factorized_state(p.delta_y, lat).vector;
        if (near_degenerate) {
            const double oe = overlap(a, even.vectors[0].cast<Complex>());
            const double oo = overlap(a, odd.vectors[0].cast<Complex>());
            pr.overlap = std::sqrt(oe * oe + oo * oo);
        } else {
            pr.overlap = overlap(a, state);
        }
    }
    return pr;
}

struct FactorizationReport {
    double h_f_estimate = 0.0;
    double tau1_at_min = 0.0;
    std::optional<double> overlap;
    bool certified = false;
    std::string reason;
};

// Locates the factorizing field inside [h_lo, h_hi].  A coarse scan of the
// (clamped) tau1_broken finds the basin; because the estimator flattens to
// zero across a small interval at these sizes, the point inside the basin is
// then pinned by the parity-sector crossing, which is exactly degenerate at
// the factorized point.
inline FactorizationReport locate_factorizing_field(const ModelParams& p,
                                                    const Lattice& lat, double h_lo,
                                                    double h_hi,
                                                    const SolverOptions& opts) {
    if (!(h_hi > h_lo)) throw std::invalid_argument("locate_factorizing_field: bad bracket");
    const int ncoarse = 33;
    const double step = (h_hi - h_lo) / (ncoarse - 1);
    const auto classes = pair_classes(lat);

    std::vector<double> t1(ncoarse);
    for (int q = 0; q < ncoarse; ++q) {
        SweepRow row = compute_row(p, lat, classes, h_lo + q * step, opts);
        if (!row.converged)
            throw std::runtime_error("locate_factorizing_field: solver failure");
        t1[q] = row.tau1_broken;
    }
    int best = int(std::min_element(t1.begin(), t1.end()) - t1.begin());
    if (best == 0 || best == ncoarse - 1)
        throw std::runtime_error("locate_factorizing_field: no interior minimum in bracket");
    // the minimal value may extend over a flat run; search the whole run
    int run_lo = best, run_hi = best;
    while (run_lo > 0 && t1[run_lo - 1] <= t1[best] + 1e-12) --run_lo;
    while (run_hi < ncoarse - 1 && t1[run_hi + 1] <= t1[best] + 1e-12) ++run_hi;
    double a = h_lo + std::max(0, run_lo - 1) * step;
    double b = h_lo + std::min(ncoarse - 1, run_hi + 1) * step;

    auto split = [&](double h) {
        ModelParams q = p;
        q.h = h;
        SectorResult even = lanczos_sector(q, lat, +1, 1, opts);
        SectorResult odd = lanczos_sector(q, lat, -1, 1, opts);
        if (!even.converged || !odd.converged)
            throw std::runtime_error("locate_factorizing_field: solver failure");
        return even.energies[0] - odd.energies[0];
    };

    // bisection on the sign change when there is one, golden section on the
    // magnitude otherwise
    double h_star;
    double fa = split(a), fb = split(b);
    if (fa == 0.0) h_star = a;
    else if (fb == 0.0) h_star = b;
    else if ((fa < 0) != (fb < 0)) {
        double lo = a, hi = b;
        while (hi - lo > 1e-7) {
            const double mid = 0.5 * (lo + hi);
            const double fm = split(mid);
            if (fm == 0.0) { lo = hi = mid; break; }
            if ((fm < 0) == (fa < 0)) lo = mid;
            else hi = mid;
        }
        h_star = 0.5 * (lo + hi);
    } else {
        h_star = detail::golden_min([&](double h) { return std::abs(split(h)); }, a, b,
                                    1e-7);
    }

    FactorizationProbe pr = probe_factorization(p, lat, h_star, opts);
    FactorizationReport rep;
    rep.h_f_estimate = h_star;
    rep.tau1_at_min = pr.tau1_broken;
    // the product-ansatz overlap is a chain-only certificate field
    if (lat.kind == LatticeKind::Chain) rep.overlap = pr.overlap;
    if (lat.kind == LatticeKind::Chain && pr.overlap.has_value()) {
        rep.certified = pr.tau1_broken <= 1e-9 && *pr.overlap >= 1.0 - 1e-9;
        if (!rep.certified) rep.reason = "tau1 or ansatz overlap above threshold";
    } else {
        rep.certified = pr.tau1_broken <= 1e-6;
        if (!rep.certified) rep.reason = "tau1 above threshold";
    }
    return rep;
}

// ---------------------------------------------------------------------------
// critical-point detector

struct CriticalReport {
    double h_c_estimate = 0.0;
    double r_min = 0.0;
    std::optional<double> mz_inflection;
    bool inconclusive = false;
};

namespace detail {

// vertex of the parabola through three points
inline double parabola_vertex(double x0, double y0, double x1, double y1, double x2,
                              double y2) {
    const double d1 = (x1 - x0) * (y1 - y2), d2 = (x1 - x2) * (y1 - y0);
    const double denom = 2.0 * (d1 - d2);
    if (denom == 0.0) return x1;
    return x1 - ((x1 - x0) * d1 - (x1 - x2) * d2) / denom;
}

}  // namespace detail

// Minimum of the entanglement ratio above the masked h_f neighborhood,
// refined by parabolic interpolation; the magnetization inflection point is
// reported alongside as the cross check used on the ladder.
inline CriticalReport locate_critical_dip(const std::vector<SweepRow>& rows, double h_f,
                                          double mask_radius = 0.04) {
    std::vector<const SweepRow*> valid;
    for (const auto& r : rows)
        if (r.converged && r.ratio.has_value() && r.h > h_f + mask_radius)
            valid.push_back(&r);
    if (valid.size() < 7)
        throw std::invalid_argument("locate_critical_dip: fewer than 7 usable rows");

    std::size_t imin = 0;
    for (std::size_t q = 1; q < valid.size(); ++q)
        if (*valid[q]->ratio < *valid[imin]->ratio) imin = q;

    CriticalReport rep;
    rep.r_min = *valid[imin]->ratio;
    if (imin == 0 || imin + 1 == valid.size()) {
        rep.inconclusive = true;
        rep.h_c_estimate = valid[imin]->h;
    } else {
        rep.h_c_estimate = detail::parabola_vertex(
            valid[imin - 1]->h, *valid[imin - 1]->ratio, valid[imin]->h,
            *valid[imin]->ratio, valid[imin + 1]->h, *valid[imin + 1]->ratio);
    }

    // steepest rise of M^z(h) over all converged rows
    std::vector<const SweepRow*> conv;
    for (const auto& r : rows)
        if (r.converged) conv.push_back(&r);
    if (conv.size() >= 3) {
        std::vector<double> slope(conv.size(), 0.0), hs(conv.size(), 0.0);
        for (std::size_t q = 1; q + 1 < conv.size(); ++q) {
            slope[q] = (conv[q + 1]->mz - conv[q - 1]->mz) /
                       (conv[q + 1]->h - conv[q - 1]->h);
            hs[q] = conv[q]->h;
        }
        std::size_t best = 1;
        for (std::size_t q = 2; q + 1 < conv.size(); ++q)
            if (slope[q] > slope[best]) best = q;
        if (best > 1 && best + 2 < conv.size())
            rep.mz_inflection = detail::parabola_vertex(hs[best - 1], -slope[best - 1],
                                                        hs[best], -slope[best],
                                                        hs[best + 1], -slope[best + 1]);
        else
            rep.mz_inflection = hs[best];
    }
    return rep;
}

}  // namespace spinent
