#ifndef BRIDGEHACK_TESTUTIL_HPP_
#define BRIDGEHACK_TESTUTIL_HPP_

#include <cmath>
#include <vector>

#include "bridgehack/classical.hpp"
#include "bridgehack/quantum.hpp"
#include "bridgehack/rng.hpp"

namespace testutil {

using namespace bridgehack;

// ---- independent oracles ----------------------------------------------
// These deliberately avoid the library code paths they are used to check.

// Plain-loop matrix-vector product.
inline std::vector<double> matvec_oracle(const RealMatrix& m,
                                         const RealVector& v) {
  std::vector<double> out(m.rows(), 0.0);
  for (Eigen::Index y = 0; y < m.rows(); ++y)
    for (Eigen::Index x = 0; x < m.cols(); ++x) out[y] += m(y, x) * v[x];
  return out;
}

// Reach-set mass-dominance feasibility by recursive subset enumeration over
// plain vectors (the library uses bitmask loops).
inline bool feasible_oracle(const RealMatrix& e, const RealVector& p,
                            const RealVector& q, double tol = 1e-12) {
  const int d = int(e.cols());
  std::vector<int> members;
  bool feasible = true;
  auto visit = [&](auto&& self, int next) -> void {
    if (!feasible) return;
    if (next == d) {
      if (members.empty()) return;
      std::vector<bool> in_x(d, false);
      for (int x : members) in_x[x] = true;
      std::vector<bool> reached(e.rows(), false);
      for (int x : members)
        for (Eigen::Index y = 0; y < e.rows(); ++y)
          if (e(y, x) > 0.0) reached[y] = true;
      double pm = 0.0, qm = 0.0;
      for (int x : members) pm += p[x];
      for (Eigen::Index y = 0; y < e.rows(); ++y)
        if (reached[y]) qm += q[y];
      bool decoupled = true;
      for (int x = 0; x < d && decoupled; ++x) {
        if (in_x[x]) continue;
        for (Eigen::Index y = 0; y < e.rows(); ++y)
          if (e(y, x) > 0.0 && reached[y]) {
            decoupled = false;
            break;
          }
      }
      if (qm < pm - tol) feasible = false;
      if (decoupled && std::abs(qm - pm) > tol) feasible = false;
      return;
    }
    self(self, next + 1);
    members.push_back(next);
    self(self, next + 1);
    members.pop_back();
  };
  visit(visit, 0);
  return feasible;
}

// Primitivity by saturating 0/1 integer matrix powers.
inline std::pair<bool, int> primitive_oracle(const RealMatrix& e) {
  const int d = int(e.rows());
  std::vector<std::vector<int>> base(d, std::vector<int>(d, 0)), cur;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) base[i][j] = e(i, j) > 0.0 ? 1 : 0;
  cur = base;
  const int bound = (d - 1) * (d - 1) + 1;
  for (int n = 1; n <= bound; ++n) {
    bool all = true;
    for (int i = 0; i < d && all; ++i)
      for (int j = 0; j < d && all; ++j)
        if (cur[i][j] == 0) all = false;
    if (all) return {true, n};
    std::vector<std::vector<int>> next(d, std::vector<int>(d, 0));
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        if (base[i][k])
          for (int j = 0; j < d; ++j)
            if (cur[k][j]) next[i][j] = 1;
    cur = std::move(next);
  }
  return {false, 0};
}

// ---- seeded generators --------------------------------------------------

inline ProbabilityVector random_dirichlet(Eigen::Index dim,
                                          std::uint64_t seed) {
  Rng rng(seed);
  return ProbabilityVector(rng.dirichlet(dim));
}

inline DensityMatrix random_density(Eigen::Index dim, std::uint64_t seed,
                                    double mix_floor = 0.0) {
  Rng rng(seed);
  ComplexMatrix g = rng.ginibre(dim, dim);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  if (mix_floor > 0.0) {
    rho = (1.0 - mix_floor) * rho +
          mix_floor * ComplexMatrix::Identity(dim, dim) / double(dim);
  }
  return DensityMatrix(hermitize(rho));
}

inline ComplexMatrix random_unitary(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix g = rng.ginibre(dim, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const std::complex<double> rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

// Masked random channel: zero pattern from a seeded coin per entry, columns
// kept nonempty, positive entries renormalized.
inline StochasticMatrix random_masked_channel(Eigen::Index out_dim,
                                              Eigen::Index in_dim,
                                              double keep_prob,
                                              std::uint64_t seed) {
  Rng rng(seed);
  RealMatrix m(out_dim, in_dim);
  for (Eigen::Index x = 0; x < in_dim; ++x) {
    double sum = 0.0;
    while (sum == 0.0) {
      for (Eigen::Index y = 0; y < out_dim; ++y) {
        const bool keep = rng.uniform() < keep_prob;
        m(y, x) = keep ? rng.uniform(0.1, 1.0) : 0.0;
      }
      sum = m.col(x).sum();
    }
    m.col(x) /= sum;
  }
  return StochasticMatrix(std::move(m));
}

// Classical channel embedded as a CPTP map: one Kraus operator
// sqrt(E(y|x)) |y><x| per transition.
inline KrausChannel embed_classical(const StochasticMatrix& e) {
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index y = 0; y < e.out_dim(); ++y)
    for (Eigen::Index x = 0; x < e.in_dim(); ++x) {
      if (e(y, x) <= 0.0) continue;
      ComplexMatrix k = ComplexMatrix::Zero(e.out_dim(), e.in_dim());
      k(y, x) = std::sqrt(e(y, x));
      ops.push_back(std::move(k));
    }
  return KrausChannel(std::move(ops));
}

inline double l1_diff(const RealVector& a, const RealVector& b) {
  return (a - b).lpNorm<1>();
}

inline double max_diff(const RealMatrix& a, const RealMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double fro_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm();
}

}  // namespace testutil

#endif  // BRIDGEHACK_TESTUTIL_HPP_
