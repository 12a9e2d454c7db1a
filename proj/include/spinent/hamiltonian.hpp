#pragma once

#include <bit>
#include <cstdint>

#include "lattice.hpp"
#include "model.hpp"

namespace spinent {

// Z2 parity of the up-spin count.  The exchange term flips spins in pairs,
// so H never connects basis states of different parity.
inline int parity_of_basis_state(std::uint64_t index) {
    return (std::popcount(index) % 2 == 0) ? 1 : -1;
}

namespace detail {

// H = sum_<ij> [ s S^x_i S^x_j + s Dy S^y_i S^y_j + Dz S^z_i S^z_j ]
//     - h sum_i S^z_i,     s = +1 (Original) / -1 (Rotated).
//
// In the bit basis a bond (i,j) acts as:
//   bits anti-aligned: flip both, amplitude s (1+Dy)/4, diagonal -Dz/4
//   bits aligned:      flip both, amplitude s (1-Dy)/4, diagonal +Dz/4
// which is S^xS^x + Dy S^yS^y = (1+Dy)(S+S- + S-S+)/4 + (1-Dy)(S+S+ + S-S-)/4.
template <typename Scalar>
void apply_hamiltonian_impl(const ModelParams& p, const Lattice& lat,
                            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v,
                            Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& out) {
    const int n = lat.n_sites;
    const std::int64_t dim = std::int64_t(1) << n;
    if (v.size() != dim)
        throw std::invalid_argument("apply_hamiltonian: dimension mismatch");
    p.validate();

    const double sign = (p.frame == Frame::Original) ? 1.0 : -1.0;
    const double flip_anti = sign * (1.0 + p.delta_y) / 4.0;
    const double flip_aligned = sign * (1.0 - p.delta_y) / 4.0;
    const double zz = p.delta_z / 4.0;

    out.setZero(dim);
    for (std::int64_t s = 0; s < dim; ++s) {
        const Scalar amp = v[s];
        if (amp == Scalar(0.0)) continue;
        double diag = -p.h * (std::popcount(std::uint64_t(s)) - 0.5 * n);
        for (const auto& [i, j] : lat.bonds) {
            const bool bi = (s >> i) & 1, bj = (s >> j) & 1;
            const std::int64_t flipped = s ^ ((std::int64_t(1) << i) | (std::int64_t(1) << j));
            if (bi == bj) {
                diag += zz;
                out[flipped] += flip_aligned * amp;
            } else {
                diag -= zz;
                out[flipped] += flip_anti * amp;
            }
        }
        out[s] += diag * amp;
    }
}

}  // namespace detail

inline StateVector apply_hamiltonian(const ModelParams& p, const Lattice& lat,
                                     const StateVector& v) {
    StateVector out;
    detail::apply_hamiltonian_impl<Complex>(p, lat, v, out);
    return out;
}

inline RealVector apply_hamiltonian(const ModelParams& p, const Lattice& lat,
                                    const RealVector& v) {
    RealVector out;
    detail::apply_hamiltonian_impl<double>(p, lat, v, out);
    return out;
}

// Dense oracle for the matrix-free path, assembled bond by bond from the
// explicit two-site matrices in the (b_j b_i) product basis.  Real and
// symmetric because all couplings are real in the S^z basis.
inline Eigen::MatrixXd dense_hamiltonian(const ModelParams& p, const Lattice& lat) {
    const int n = lat.n_sites;
    if (n > 12) throw std::invalid_argument("dense_hamiltonian: N > 12");
    p.validate();
    const std::int64_t dim = std::int64_t(1) << n;

    const double sign = (p.frame == Frame::Original) ? 1.0 : -1.0;
    // local basis |b_j b_i> = {00, 01, 10, 11}, S = sigma/2
    double hb[4][4] = {};
    hb[0][3] = hb[3][0] = sign * (1.0 - p.delta_y) / 4.0;  // SxSx - SySy part
    hb[1][2] = hb[2][1] = sign * (1.0 + p.delta_y) / 4.0;  // SxSx + SySy part
    hb[0][0] = hb[3][3] = p.delta_z / 4.0;
    hb[1][1] = hb[2][2] = -p.delta_z / 4.0;

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& [i, j] : lat.bonds) {
        for (std::int64_t s = 0; s < dim; ++s) {
            const int col = int((s >> i) & 1) + 2 * int((s >> j) & 1);
            const std::int64_t rest = s & ~((std::int64_t(1) << i) | (std::int64_t(1) << j));
            for (int row = 0; row < 4; ++row) {
                if (hb[row][col] == 0.0) continue;
                const std::int64_t t =
                    rest | (std::int64_t(row & 1) << i) | (std::int64_t(row >> 1) << j);
                H(t, s) += hb[row][col];
            }
        }
    }
    for (std::int64_t s = 0; s < dim; ++s)
        H(s, s) += -p.h * (std::popcount(std::uint64_t(s)) - 0.5 * n);
    return H;
}

}  // namespace spinent
