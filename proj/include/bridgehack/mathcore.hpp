#ifndef BRIDGEHACK_MATHCORE_HPP_
#define BRIDGEHACK_MATHCORE_HPP_

#include <Eigen/Dense>

#include "bridgehack/errors.hpp"

namespace bridgehack {

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

// Default threshold below which a divisor counts as zero.
inline constexpr double kDivEps = 1e-14;
// Relative eigenvalue floor: eigenvalues <= kRankEps * lambda_max are treated
// as rank deficiency wherever an inverse is required.
inline constexpr double kRankEps = 1e-12;
// Max-norm tolerance on m - m^dagger before a matrix is accepted as Hermitian
// and symmetrized.
inline constexpr double kHermTol = 1e-10;

struct SpectralDecomposition {
  RealVector eigenvalues;      // sorted descending
  ComplexMatrix eigenvectors;  // columns match eigenvalue order, unitary

  ComplexMatrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() *
           eigenvectors.adjoint();
  }
};

// a (.) b, elementwise. Throws std::invalid_argument on length mismatch.
RealVector hadamard_product(const RealVector& a, const RealVector& b);

// a (/) b, elementwise, with the support convention 0/0 = 0. Entries of b
// with |b_i| <= eps and a_i != 0 raise DivisionSingularity: the hacking
// equation is undefined there.
RealVector hadamard_divide(const RealVector& a, const RealVector& b,
                           double eps = kDivEps);

// Full spectral decomposition of a Hermitian matrix. The input is checked
// against kHermTol in max norm and symmetrized as (m + m^dagger)/2 before
// solving, which damps the asymmetry that fixed-point iterations accumulate.
SpectralDecomposition herm_eig(const ComplexMatrix& m);

// Principal square root of a Hermitian PSD matrix via spectral calculus.
// Eigenvalues within -kRankEps * lambda_max of zero are clipped to 0.
ComplexMatrix matrix_sqrt(const ComplexMatrix& m);

// Inverse square root. Throws RankDeficient when the smallest eigenvalue is
// not above kRankEps * lambda_max.
ComplexMatrix matrix_inv_sqrt(const ComplexMatrix& m);

// Inverse of a Hermitian positive definite matrix, same floor as inv_sqrt.
ComplexMatrix herm_inverse(const ComplexMatrix& m);

// Solves M N M = L for Hermitian positive definite N, L:
//   M = L^{1/2} (L^{-1/2} N^{-1} L^{-1/2})^{1/2} L^{1/2}.
// The returned M is Hermitian PSD. Throws RankDeficient on singular inputs.
ComplexMatrix solve_sandwich(const ComplexMatrix& n, const ComplexMatrix& l);

// -sum p log p in nats, with 0 log 0 = 0. Entries are assumed nonnegative.
double shannon_entropy(const RealVector& p);

// Tr rho^2 for a density matrix.
double purity(const ComplexMatrix& rho);

// Helpers shared across modules.
bool is_hermitian(const ComplexMatrix& m, double tol = kHermTol);
ComplexMatrix hermitize(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);

}  // namespace bridgehack

#endif  // BRIDGEHACK_MATHCORE_HPP_
