#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace spinent {

// Basis convention used throughout: bit b of a basis index set means spin up
// (S^z = +1/2) at site b.  Amplitudes are stored complex so analytic product
// states with phases fit in the same container; Hamiltonian ground states are
// real in this basis and kept real inside the solver.
using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class Frame { Original, Rotated };

// Couplings of the anisotropic exchange model, J = 1 fixed as the energy
// unit, h the reduced field.  Original frame has antiferromagnetic x,y
// couplings; Rotated applies the site-alternating sign flip of S^x, S^y.
struct ModelParams {
    double delta_y = 1.0;
    double delta_z = 1.0;
    double h = 0.0;
    Frame frame = Frame::Original;

    void validate() const {
        if (delta_y < 0.0 || delta_y > 1.0)
            throw std::invalid_argument("delta_y must lie in [0, 1]");
        if (delta_z < 0.0 || delta_z > 1.0)
            throw std::invalid_argument("delta_z must lie in [0, 1]");
        if (h < 0.0) throw std::invalid_argument("h must be >= 0");
    }
};

inline double norm(const StateVector& v) { return v.norm(); }

// |<a|b>|, both vectors assumed normalized.
inline double overlap(const StateVector& a, const StateVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("overlap: dimension mismatch");
    return std::abs(a.dot(b));
}

}  // namespace spinent
