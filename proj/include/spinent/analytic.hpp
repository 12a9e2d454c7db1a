#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lattice.hpp"
#include "model.hpp"

namespace spinent {

// h_f = sqrt(2 (1 + Delta_y)) for the XYX chain (Delta_z = 1, z = 2);
// the same bond construction gives (z/2) sqrt(2 (1 + Delta_y)) for
// coordination z, which the ladder detector reproduces numerically.
inline double factorizing_field(double delta_y) {
    if (delta_y < 0.0 || delta_y > 1.0)
        throw std::invalid_argument("factorizing_field: delta_y must be in [0, 1]");
    return std::sqrt(2.0 * (1.0 + delta_y));
}

// Product ground state at the factorizing field: every site points along a
// classical direction canted by theta from the z axis, with the azimuth
// alternating between sublattices,
//   |psi_j> = cos(theta/2)|up> + sin(theta/2) e^{i phi_j} |down>,
//   cos(theta) = sqrt((1 + Delta_y)/2),  phi_j = (1 + (-1)^j) pi/2.
// theta is the canting angle; the spinor amplitudes carry theta/2.  This is
// the unique angle for which every bond term acts diagonally on the pair
// state, which is what makes the product state an exact eigenstate.
struct FactorizedAnsatz {
    double theta = 0.0;
    std::vector<double> phases;
    StateVector vector;
};

inline FactorizedAnsatz build_factorized_state(double delta_y, const Lattice& lat) {
    if (delta_y < 0.0 || delta_y > 1.0)
        throw std::invalid_argument("build_factorized_state: delta_y must be in [0, 1]");
    const int n = lat.n_sites;
    const double ct = std::sqrt((1.0 + delta_y) / 2.0);
    FactorizedAnsatz a;
    a.theta = std::acos(ct);
    const double up = std::cos(a.theta / 2.0);
    const double down = std::sin(a.theta / 2.0);

    a.phases.resize(n);
    std::vector<double> down_amp(n);
    for (int i = 0; i < n; ++i) {
        const bool even_sublattice = (lat.sublattice[i] == 1);
        a.phases[i] = even_sublattice ? std::numbers::pi : 0.0;
        down_amp[i] = even_sublattice ? -down : down;
    }

    const std::int64_t dim = std::int64_t(1) << n;
    a.vector.resize(dim);
    for (std::int64_t s = 0; s < dim; ++s) {
        double amp = 1.0;
        for (int i = 0; i < n; ++i) amp *= ((s >> i) & 1) ? up : down_amp[i];
        a.vector[s] = amp;
    }
    return a;
}

// Exact solution of the Delta_z = 0 chain through the Jordan-Wigner map,
// worked in the rotated (ferromagnetic) frame whose spectrum equals the
// original frame on an even ring.  Conventions: up spin = occupied fermion,
// so the spin parity (-1)^{#up} is the fermion parity; the boundary bond
// closes antiperiodically in the even sector and periodically in the odd
// one.  Both sectors are assembled with parity-consistent occupations and
// the minimum is returned.
struct FreeFermionSolution {
    double energy = 0.0;
    double mz = 0.0;
    std::vector<double> gzz;  // r = 1 .. L/2
    int parity_sector = 1;
};

namespace detail {

struct FermionMode {
    double k = 0.0;
    double occ_pos = 0.0;   // <n_k>, k > 0 member (or the unpaired mode)
    double occ_neg = 0.0;   // <n_-k>
    Complex anom{0.0, 0.0}; // <c^dag_k c^dag_-k>
    bool paired = true;
};

struct FermionSector {
    double energy = 0.0;
    std::vector<FermionMode> modes;
    bool valid = true;
};

// One boundary sector with the fermion-number parity forced to `parity`.
inline FermionSector solve_fermion_sector(double delta_y, double h, int L,
                                          bool antiperiodic, int parity) {
    const double t = -(1.0 + delta_y) / 4.0;    // hopping
    const double d = -(1.0 - delta_y) / 4.0;    // pairing
    FermionSector sec;
    sec.energy = 0.5 * L * h;

    std::vector<double> ks;
    if (antiperiodic)
        for (int m = 0; m < L / 2; ++m) ks.push_back((2.0 * m + 1.0) * std::numbers::pi / L);
    else
        for (int m = 1; m < L / 2; ++m) ks.push_back(2.0 * m * std::numbers::pi / L);

    int nf_parity = 0;             // fermion parity of the assembled vacuum
    double cheapest = 1e300;       // cheapest parity-flipping excitation
    int cheap_idx = -1;            // index into sec.modes

    for (double k : ks) {
        const double xi = 2.0 * t * std::cos(k) - h;
        const Complex g(0.0, 2.0 * d * std::sin(k));
        const double eps = std::sqrt(xi * xi + std::norm(g));
        FermionMode mode;
        mode.k = k;
        const double lambda = xi - eps;
        const double n2 = std::norm(g) + lambda * lambda;
        if (n2 < 1e-300) {  // no pairing and xi >= 0: vacuum is empty
            mode.occ_pos = mode.occ_neg = 0.0;
        } else {
            const Complex alpha = std::conj(g) / std::sqrt(n2);
            const double beta = lambda / std::sqrt(n2);
            mode.occ_pos = mode.occ_neg = beta * beta;
            mode.anom = beta * alpha;
        }
        sec.energy += lambda;
        if (eps < cheapest) {
            cheapest = eps;
            cheap_idx = int(sec.modes.size());
        }
        sec.modes.push_back(mode);
    }

    if (!antiperiodic) {
        for (double k : {0.0, std::numbers::pi}) {
            const double xi = 2.0 * t * std::cos(k) - h;
            FermionMode mode;
            mode.paired = false;
            mode.k = k;
            if (xi < 0.0) {
                mode.occ_pos = 1.0;
                sec.energy += xi;
                nf_parity ^= 1;
            }
            if (std::abs(xi) < cheapest) {
                cheapest = std::abs(xi);
                cheap_idx = int(sec.modes.size());
            }
            sec.modes.push_back(mode);
        }
    }

    const int want_odd = (parity == -1) ? 1 : 0;
    if (nf_parity != want_odd) {
        if (cheap_idx < 0) {
            sec.valid = false;  // nothing to excite (cannot happen for L >= 4)
            return sec;
        }
        FermionMode& mode = sec.modes[cheap_idx];
        sec.energy += cheapest;
        if (mode.paired) {  // one quasiparticle: |1_k 0_-k>, coherence gone
            mode.occ_pos = 1.0;
            mode.occ_neg = 0.0;
            mode.anom = Complex(0.0, 0.0);
        } else {
            if (mode.occ_pos > 0.5) {
                mode.occ_pos = 0.0;
            } else {
                mode.occ_pos = 1.0;
            }
        }
    }
    return sec;
}

}  // namespace detail

inline FreeFermionSolution free_fermion_solution(double delta_y, double h, int L) {
    if (L < 4 || L % 2 != 0)
        throw std::invalid_argument("free_fermion_solution: need even L >= 4");
    if (delta_y < 0.0 || delta_y > 1.0)
        throw std::invalid_argument("free_fermion_solution: delta_y must be in [0, 1]");
    if (h < 0.0) throw std::invalid_argument("free_fermion_solution: h must be >= 0");

    detail::FermionSector even = detail::solve_fermion_sector(delta_y, h, L, true, +1);
    detail::FermionSector odd = detail::solve_fermion_sector(delta_y, h, L, false, -1);
    const bool pick_even = !odd.valid || (even.valid && even.energy <= odd.energy);
    const detail::FermionSector& win = pick_even ? even : odd;

    // Wick contractions G(r) = <c^dag_0 c_r>, F(r) = <c^dag_0 c^dag_r>
    std::vector<Complex> G(L / 2 + 1, Complex(0, 0)), F(L / 2 + 1, Complex(0, 0));
    for (int r = 0; r <= L / 2; ++r) {
        for (const auto& mode : win.modes) {
            if (mode.paired) {
                G[r] += std::exp(Complex(0, mode.k * r)) * mode.occ_pos +
                        std::exp(Complex(0, -mode.k * r)) * mode.occ_neg;
                F[r] += 2.0 * Complex(0, std::sin(mode.k * r)) * mode.anom;
            } else {
                G[r] += std::exp(Complex(0, mode.k * r)) * mode.occ_pos;
            }
        }
        G[r] /= double(L);
        F[r] /= double(L);
    }

    FreeFermionSolution sol;
    sol.energy = win.energy;
    sol.parity_sector = pick_even ? 1 : -1;
    sol.mz = G[0].real() - 0.5;
    sol.gzz.resize(L / 2);
    for (int r = 1; r <= L / 2; ++r) {
        const double n0 = G[0].real();
        sol.gzz[r - 1] =
            (n0 - 0.5) * (n0 - 0.5) + std::norm(F[r]) - std::norm(G[r]);
    }
    return sol;
}

}  // namespace spinent
