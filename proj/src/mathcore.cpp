#include "bridgehack/mathcore.hpp"

#include <algorithm>
#include <cmath>

namespace bridgehack {

RealVector hadamard_product(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hadamard_product: length mismatch");
  return a.cwiseProduct(b);
}

RealVector hadamard_divide(const RealVector& a, const RealVector& b,
                           double eps) {
  if (a.size() != b.size())
    throw std::invalid_argument("hadamard_divide: length mismatch");
  RealVector out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(b[i]) <= eps) {
      if (a[i] != 0.0)
        throw DivisionSingularity("hadamard_divide: nonzero over ~0 at index " +
                                  std::to_string(i));
      out[i] = 0.0;  // support convention: 0/0 = 0
    } else {
      out[i] = a[i] / b[i];
    }
  }
  return out;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

ComplexMatrix hermitize(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

double max_abs(const ComplexMatrix& m) {
  return m.cwiseAbs().maxCoeff();
}

SpectralDecomposition herm_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("herm_eig: matrix not square");
  if (!is_hermitian(m))
    throw NotHermitian("herm_eig: max |m - m^dagger| exceeds tolerance");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m));
  if (solver.info() != Eigen::Success)
    throw Error("herm_eig: eigensolver failed to converge");
  // Eigen returns ascending order; flip to descending.
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

namespace {

// Spectral function with an eigenvalue floor: entries below floor_rel *
// lambda_max either get clipped (clip_small) or are a hard error.
ComplexMatrix spectral_apply(const ComplexMatrix& m, double (*fn)(double),
                             bool needs_inverse, const char* who) {
  SpectralDecomposition eig = herm_eig(m);
  const double lmax = eig.eigenvalues.size() > 0 ? eig.eigenvalues[0] : 0.0;
  const double floor = kRankEps * std::max(lmax, 0.0);
  RealVector mapped(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    double lambda = eig.eigenvalues[i];
    if (lambda <= floor) {
      if (needs_inverse)
        throw RankDeficient(std::string(who) +
                            ": eigenvalue below rank floor");
      if (lambda < -floor - kRankEps)
        throw std::invalid_argument(std::string(who) +
                                    ": matrix is not PSD within tolerance");
      mapped[i] = 0.0;
    } else {
      mapped[i] = fn(lambda);
    }
  }
  return eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
}

double sqrt_fn(double x) { return std::sqrt(x); }
double inv_sqrt_fn(double x) { return 1.0 / std::sqrt(x); }
double inv_fn(double x) { return 1.0 / x; }

}  // namespace

ComplexMatrix matrix_sqrt(const ComplexMatrix& m) {
  return spectral_apply(m, sqrt_fn, false, "matrix_sqrt");
}

ComplexMatrix matrix_inv_sqrt(const ComplexMatrix& m) {
  return spectral_apply(m, inv_sqrt_fn, true, "matrix_inv_sqrt");
}

ComplexMatrix herm_inverse(const ComplexMatrix& m) {
  return spectral_apply(m, inv_fn, true, "herm_inverse");
}

ComplexMatrix solve_sandwich(const ComplexMatrix& n, const ComplexMatrix& l) {
  if (n.rows() != l.rows() || n.cols() != l.cols())
    throw std::invalid_argument("solve_sandwich: dimension mismatch");
  const ComplexMatrix l_half = matrix_sqrt(l);
  const ComplexMatrix l_inv_half = matrix_inv_sqrt(l);
  const ComplexMatrix n_inv = herm_inverse(n);
  const ComplexMatrix core =
      matrix_sqrt(hermitize(l_inv_half * n_inv * l_inv_half));
  return hermitize(l_half * core * l_half);
}

double shannon_entropy(const RealVector& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
  }
  return h;
}

double purity(const ComplexMatrix& rho) {
  return (rho * rho).trace().real();
}

}  // namespace bridgehack
