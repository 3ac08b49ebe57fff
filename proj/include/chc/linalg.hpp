#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>

namespace chc {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

// Standard Hermitian product on C^m, linear in the first argument,
// conjugate-linear in the second. This convention is fixed once here and
// used everywhere (it is what makes the Heisenberg group law reproduce the
// integer lattice of the punctured-disk bundle example with the right signs).
inline cplx hermitian_dot(const VecC& x, const VecC& y) {
    return y.dot(x);  // Eigen's dot conjugates its *this argument
}

inline double sq(double x) { return x * x; }

// Unitary matrix V with V e_1 = u, for a unit vector u. Householder-based;
// the phase of u_1 is peeled off first so the reflection stays Hermitian.
MatC unitary_completion(const VecC& u);

// Rank of the real span of a set of real vectors (columns), by SVD with a
// relative singular-value threshold.
int real_rank(const MatR& columns, double rel_tol = 1e-9);

// View a complex m-vector as a real 2m-vector (re_1, im_1, ..., re_m, im_m).
VecR realify(const VecC& v);

// Simultaneous unitary diagonalization of a pairwise-commuting family.
// Returns Q unitary with Q^* T_j Q diagonal for every j, within off_tol.
// A seeded random real-coefficient combination breaks eigenvalue ties; the
// basis is then refined block-by-block, and degenerate draws are retried.
// Throws std::runtime_error if no attempt reaches off_tol.
MatC simultaneous_diagonalize(const std::vector<MatC>& family, std::uint64_t seed,
                              double off_tol = 1e-8);

}  // namespace chc
