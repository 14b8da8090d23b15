#include "bridgehack/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bridgehack/log.hpp"
#include "bridgehack/rng.hpp"

namespace bridgehack {

namespace {

using Complex = std::complex<double>;

double frobenius(const ComplexMatrix& m) { return m.norm(); }

// Clip eigenvalues at zero (rejecting anything below -clip_tol relative to
// scale) and optionally renormalize the trace. Damps the round-off that
// fixed-point iterations accumulate.
ComplexMatrix project_psd(const ComplexMatrix& m, double clip_tol) {
  SpectralDecomposition eig = herm_eig(m);
  const double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  RealVector clipped = eig.eigenvalues;
  for (Eigen::Index i = 0; i < clipped.size(); ++i) {
    if (clipped[i] < -clip_tol * scale)
      throw std::invalid_argument("project_psd: matrix is not PSD");
    if (clipped[i] < 0.0) clipped[i] = 0.0;
  }
  return eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.adjoint();
}

DensityMatrix sanitize_density(const ComplexMatrix& m, double psd_tol = 1e-10,
                               double trace_tol = 1e-9) {
  if (!is_hermitian(m))
    throw NotHermitian("density sanitize: not Hermitian within tolerance");
  ComplexMatrix h = project_psd(hermitize(m), psd_tol);
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > trace_tol)
    throw std::invalid_argument("density sanitize: trace deviates from 1");
  return DensityMatrix(h / tr);
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m = [] {
    ComplexMatrix s(2, 2);
    s << 0, 1, 1, 0;
    return s;
  }();
  return m;
}

const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m = [] {
    ComplexMatrix s(2, 2);
    s << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return s;
  }();
  return m;
}

const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m = [] {
    ComplexMatrix s(2, 2);
    s << 1, 0, 0, -1;
    return s;
  }();
  return m;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0)
    throw std::invalid_argument("DensityMatrix: not square");
  if (!m_.allFinite())
    throw std::invalid_argument("DensityMatrix: non-finite entry");
  if (!is_hermitian(m_))
    throw NotHermitian("DensityMatrix: not Hermitian within tolerance");
  m_ = hermitize(m_);
  if (std::abs(m_.trace().real() - 1.0) > kTraceTol)
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  SpectralDecomposition eig = herm_eig(m_);
  if (eig.eigenvalues.minCoeff() < -kPsdTol)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / double(dim));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& ket) {
  const double n = ket.norm();
  if (n < 1e-12) throw std::invalid_argument("DensityMatrix::pure: zero ket");
  Eigen::VectorXcd psi = ket / n;
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::from_bloch(const BlochVector& r) {
  if (r.norm() > 1.0 + 1e-10)
    throw std::invalid_argument("from_bloch: vector outside the Bloch ball");
  ComplexMatrix m = 0.5 * (ComplexMatrix::Identity(2, 2) + r.x * pauli_x() +
                           r.y * pauli_y() + r.z * pauli_z());
  // Rays numerically on the sphere can dip an eigenvalue just below zero.
  return sanitize_density(m);
}

DensityMatrix DensityMatrix::diagonal(const RealVector& populations) {
  ComplexMatrix m = ComplexMatrix::Zero(populations.size(), populations.size());
  for (Eigen::Index i = 0; i < populations.size(); ++i) m(i, i) = populations[i];
  return DensityMatrix(std::move(m));
}

BlochVector DensityMatrix::bloch_vector() const {
  if (dim() != 2)
    throw std::invalid_argument("bloch_vector: qubit states only");
  return {(m_ * pauli_x()).trace().real(), (m_ * pauli_y()).trace().real(),
          (m_ * pauli_z()).trace().real()};
}

PositiveOperator::PositiveOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0)
    throw std::invalid_argument("PositiveOperator: not square");
  if (!is_hermitian(m_))
    throw NotHermitian("PositiveOperator: not Hermitian within tolerance");
  m_ = hermitize(m_);
  SpectralDecomposition eig = herm_eig(m_);
  const double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  if (eig.eigenvalues.minCoeff() < -kPsdTol * scale)
    throw std::invalid_argument("PositiveOperator: negative eigenvalue");
}

PositiveOperator PositiveOperator::identity(Eigen::Index dim) {
  return PositiveOperator(ComplexMatrix::Identity(dim, dim));
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops, double tp_tol)
    : ops_(std::move(kraus_ops)) {
  if (ops_.empty())
    throw std::invalid_argument("KrausChannel: empty Kraus list");
  out_dim_ = ops_.front().rows();
  in_dim_ = ops_.front().cols();
  ComplexMatrix sum = ComplexMatrix::Zero(in_dim_, in_dim_);
  for (const auto& k : ops_) {
    if (k.rows() != out_dim_ || k.cols() != in_dim_)
      throw std::invalid_argument("KrausChannel: inconsistent operator shape");
    if (!k.allFinite())
      throw std::invalid_argument("KrausChannel: non-finite entry");
    sum += k.adjoint() * k;
  }
  tp_defect_ = max_abs(sum - ComplexMatrix::Identity(in_dim_, in_dim_));
  if (tp_defect_ > tp_tol)
    throw std::invalid_argument(
        "KrausChannel: sum K^dag K deviates from identity by " +
        std::to_string(tp_defect_));
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& x) const {
  if (x.rows() != in_dim_ || x.cols() != in_dim_)
    throw std::invalid_argument("KrausChannel::apply: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(out_dim_, out_dim_);
  for (const auto& k : ops_) out += k * x * k.adjoint();
  return out;
}

ComplexMatrix KrausChannel::apply_adjoint(const ComplexMatrix& x) const {
  if (x.rows() != out_dim_ || x.cols() != out_dim_)
    throw std::invalid_argument(
        "KrausChannel::apply_adjoint: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(in_dim_, in_dim_);
  for (const auto& k : ops_) out += k.adjoint() * x * k;
  return out;
}

ComplexMatrix KrausChannel::choi_matrix() const {
  const Eigen::Index n = in_dim_ * out_dim_;
  ComplexMatrix choi = ComplexMatrix::Zero(n, n);
  for (const auto& k : ops_) {
    Eigen::Map<const Eigen::VectorXcd> v(k.data(), n);
    choi += v * v.adjoint();
  }
  return choi;
}

std::string to_string(QuantumStatus s) {
  switch (s) {
    case QuantumStatus::Converged: return "converged";
    case QuantumStatus::MaxIterations: return "max_iterations";
    case QuantumStatus::RankDeficientIterate: return "rank_deficient";
  }
  return "unknown";
}

DensityMatrix apply_channel(const KrausChannel& e, const DensityMatrix& rho) {
  return sanitize_density(e.apply(rho.matrix()));
}

PositiveOperator apply_adjoint(const KrausChannel& e,
                               const PositiveOperator& x) {
  return PositiveOperator(hermitize(e.apply_adjoint(x.matrix())));
}

ComplexMatrix petz_apply(const KrausChannel& e, const ComplexMatrix& gamma,
                         const ComplexMatrix& x) {
  const ComplexMatrix eg_ih = matrix_inv_sqrt(e.apply(hermitize(gamma)));
  const ComplexMatrix g_h = matrix_sqrt(gamma);
  return g_h * e.apply_adjoint(eg_ih * x * eg_ih) * g_h;
}

DensityMatrix petz_map(const KrausChannel& e, const DensityMatrix& gamma,
                       const DensityMatrix& omega) {
  return sanitize_density(petz_apply(e, gamma.matrix(), omega.matrix()));
}

PositiveOperator gamma_operator(const KrausChannel& e,
                                const DensityMatrix& gamma,
                                const DensityMatrix& omega) {
  const ComplexMatrix eg_ih = matrix_inv_sqrt(e.apply(gamma.matrix()));
  return PositiveOperator(hermitize(eg_ih * omega.matrix() * eg_ih));
}

namespace {

// Shared plateau bookkeeping for the fixed-point solvers.
struct PlateauDetector {
  explicit PlateauDetector(int window, double rel) : window_(window), rel_(rel) {}

  bool stalled(double residual) {
    history_.push_back(residual);
    const int n = int(history_.size());
    if (n <= window_) return false;
    const double old = history_[n - 1 - window_];
    return old - residual < rel_ * old;
  }

  int window_;
  double rel_;
  std::vector<double> history_;
};

double rank_floor_ratio(const ComplexMatrix& m) {
  SpectralDecomposition eig = herm_eig(m);
  const double lmax = eig.eigenvalues.maxCoeff();
  if (lmax <= 0.0) return 0.0;
  return eig.eigenvalues.minCoeff() / lmax;
}

// Iterates of infeasible instances collapse toward the state-space boundary.
// Keeping their eigenvalues a decade above the rank floor lets such runs
// terminate through the plateau rule instead of aborting mid-iteration;
// genuinely full-rank solutions never feel the clamp.
constexpr double kIterateClampRel = 10.0 * kRankEps;

ComplexMatrix clamp_above_floor(const ComplexMatrix& m) {
  SpectralDecomposition eig = herm_eig(m);
  const double lo = kIterateClampRel * std::max(eig.eigenvalues.maxCoeff(), 0.0);
  RealVector clipped = eig.eigenvalues.cwiseMax(lo);
  return eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace

QuantumHackSolution quantum_prior_hack(const KrausChannel& e,
                                       const DensityMatrix& rho,
                                       const DensityMatrix& omega,
                                       const QuantumSolveOptions& opts) {
  if (e.in_dim() != rho.dim() || e.out_dim() != omega.dim())
    throw std::invalid_argument("quantum_prior_hack: dimension mismatch");
  if (opts.tol <= 0.0)
    throw std::invalid_argument("quantum_prior_hack: tol must be positive");
  // The update divides by sqrt(rho); a rank-deficient target is out of scope.
  if (rank_floor_ratio(rho.matrix()) <= kRankEps)
    throw RankDeficient("quantum_prior_hack: rho is rank deficient");

  const Eigen::Index d = e.in_dim();
  ComplexMatrix gamma;
  if (opts.seed.has_value()) {
    Rng rng(*opts.seed);
    ComplexMatrix g = rng.ginibre(d, d);
    gamma = g * g.adjoint();
    gamma /= gamma.trace().real();
  } else {
    gamma = ComplexMatrix::Identity(d, d) / double(d);
  }

  QuantumHackSolution out{DensityMatrix::maximally_mixed(d),
                          std::numeric_limits<double>::infinity(), 0,
                          QuantumStatus::MaxIterations};
  PlateauDetector plateau(opts.plateau_window, opts.plateau_rel_improvement);

  for (int it = 0;; ++it) {
    try {
      const ComplexMatrix eg_ih = matrix_inv_sqrt(e.apply(gamma));
      const ComplexMatrix big_gamma =
          hermitize(eg_ih * omega.matrix() * eg_ih);
      const ComplexMatrix back = hermitize(e.apply_adjoint(big_gamma));
      const ComplexMatrix g_h = matrix_sqrt(gamma);
      const ComplexMatrix petz = hermitize(g_h * back * g_h);
      const double residual = frobenius(petz - rho.matrix());

      out.prior = sanitize_density(gamma);
      out.residual = residual;
      out.iterations = it;
      if (residual < opts.tol) {
        out.status = QuantumStatus::Converged;
        return out;
      }
      if (plateau.stalled(residual)) {
        out.status = QuantumStatus::MaxIterations;
        log_debug("quantum_prior_hack: residual plateau after " +
                  std::to_string(it) + " iterations");
        return out;
      }
      if (it >= opts.max_iterations) {
        out.status = QuantumStatus::MaxIterations;
        return out;
      }

      // M E^dag[Gamma] M = rho, then gamma <- M^2.
      const ComplexMatrix m = solve_sandwich(back, rho.matrix());
      gamma = clamp_above_floor(hermitize(m * m));
      gamma /= gamma.trace().real();
    } catch (const RankDeficient&) {
      out.status = QuantumStatus::RankDeficientIterate;
      out.iterations = it;
      return out;
    }
  }
}

PositivityProbe positivity_improving_check(const KrausChannel& e,
                                           int n_samples, std::uint64_t seed) {
  if (n_samples < 1)
    throw std::invalid_argument("positivity_improving_check: n_samples >= 1");
  Rng rng(seed);
  double min_eig = std::numeric_limits<double>::infinity();
  auto probe = [&](const Eigen::VectorXcd& ket) {
    const ComplexMatrix output = e.apply(ket * ket.adjoint());
    min_eig = std::min(min_eig, herm_eig(output).eigenvalues.minCoeff());
  };
  // Basis kets first: the known failure modes (dephasing and damping fixed
  // points) sit exactly there and would be missed by generic sampling.
  for (Eigen::Index b = 0; b < e.in_dim(); ++b) {
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(e.in_dim());
    ket[b] = 1.0;
    probe(ket);
  }
  for (int i = 0; i < n_samples; ++i) {
    Eigen::VectorXcd ket(e.in_dim());
    for (Eigen::Index j = 0; j < e.in_dim(); ++j)
      ket[j] = rng.complex_gaussian();
    if (ket.norm() < 1e-12) {
      --i;
      continue;
    }
    ket.normalize();
    probe(ket);
  }
  return {min_eig, min_eig > kRankEps};
}

BridgeResult qsb_hermitian(const KrausChannel& e, const DensityMatrix& rho,
                           const DensityMatrix& omega,
                           const QuantumSolveOptions& opts) {
  if (e.in_dim() != rho.dim() || e.out_dim() != omega.dim())
    throw std::invalid_argument("qsb_hermitian: dimension mismatch");
  // The update divides by sqrt(omega).
  if (rank_floor_ratio(omega.matrix()) <= kRankEps)
    throw RankDeficient("qsb_hermitian: omega is rank deficient");

  const Eigen::Index dp = e.out_dim();
  ComplexMatrix xi_cap = ComplexMatrix::Identity(dp, dp);

  BridgeResult out;
  out.mode = BridgeMode::Hermitian;
  out.forward_residual = std::numeric_limits<double>::infinity();
  PlateauDetector plateau(opts.plateau_window, opts.plateau_rel_improvement);

  for (int it = 0;; ++it) {
    try {
      const ComplexMatrix back = hermitize(e.apply_adjoint(xi_cap));
      const ComplexMatrix back_ih = matrix_inv_sqrt(back);
      const ComplexMatrix xi = hermitize(back_ih * rho.matrix() * back_ih);
      const ComplexMatrix xi_cap_h = matrix_sqrt(xi_cap);

      const ComplexMatrix f_rho = hermitize(xi_cap_h * e.apply(xi) * xi_cap_h);
      const double fwd = frobenius(f_rho - omega.matrix());
      // Unitality of the induced bridge; exact up to the spectral solve.
      const ComplexMatrix unital = back_ih * back * back_ih;
      const double tp =
          frobenius(unital - ComplexMatrix::Identity(rho.dim(), rho.dim()));

      std::vector<ComplexMatrix> bridge_ops;
      bridge_ops.reserve(e.kraus_ops().size());
      for (const auto& k : e.kraus_ops())
        bridge_ops.push_back(xi_cap_h * k * back_ih);
      out.bridge.emplace(std::move(bridge_ops),
                         std::max(kTpTol, 2.0 * tp + 1e-12));
      out.potentials = {xi_cap, xi};
      out.forward_residual = fwd;
      out.tp_residual = tp;
      out.iterations = it;

      if (fwd < opts.tol && tp < opts.tol) {
        out.status = QuantumStatus::Converged;
        return out;
      }
      if (plateau.stalled(fwd)) {
        out.status = QuantumStatus::MaxIterations;
        log_debug("qsb_hermitian: residual plateau after " +
                  std::to_string(it) + " iterations");
        return out;
      }
      if (it >= opts.max_iterations) {
        out.status = QuantumStatus::MaxIterations;
        return out;
      }

      // M E[xi] M = omega, then Xi <- M^2, kept at trace d'.
      const ComplexMatrix m =
          solve_sandwich(hermitize(e.apply(xi)), omega.matrix());
      xi_cap = clamp_above_floor(hermitize(m * m));
      xi_cap *= double(dp) / xi_cap.trace().real();
    } catch (const RankDeficient&) {
      out.status = QuantumStatus::RankDeficientIterate;
      out.iterations = it;
      return out;
    }
  }
}

BridgeResult qsb_inference_consistent(const KrausChannel& e,
                                      const DensityMatrix& rho,
                                      const DensityMatrix& omega,
                                      const QuantumSolveOptions& opts) {
  BridgeResult out;
  out.mode = BridgeMode::InferenceConsistent;
  out.forward_residual = std::numeric_limits<double>::infinity();
  out.tp_residual = std::numeric_limits<double>::infinity();

  // The bridge's unitality defect scales with the hack residual, so solve
  // the prior-hacking stage tighter than the requested bridge tolerance.
  QuantumSolveOptions hack_opts = opts;
  hack_opts.tol = std::max(opts.tol * 1e-3, 1e-14);
  QuantumHackSolution hack = quantum_prior_hack(e, rho, omega, hack_opts);
  out.iterations = hack.iterations;
  if (hack.status != QuantumStatus::Converged) {
    out.status = hack.status;
    return out;
  }

  try {
    const ComplexMatrix gamma = hack.prior.matrix();
    const ComplexMatrix alpha =
        matrix_sqrt(rho.matrix()) * matrix_inv_sqrt(gamma);
    const ComplexMatrix alpha_inv =
        matrix_sqrt(gamma) * matrix_inv_sqrt(rho.matrix());
    const ComplexMatrix beta =
        matrix_sqrt(omega.matrix()) * matrix_inv_sqrt(e.apply(gamma));

    std::vector<ComplexMatrix> bridge_ops;
    bridge_ops.reserve(e.kraus_ops().size());
    ComplexMatrix tp_sum = ComplexMatrix::Zero(rho.dim(), rho.dim());
    for (const auto& k : e.kraus_ops()) {
      bridge_ops.push_back(beta * k * alpha_inv);
      tp_sum += bridge_ops.back().adjoint() * bridge_ops.back();
    }
    const double tp = frobenius(
        tp_sum - ComplexMatrix::Identity(rho.dim(), rho.dim()));
    KrausChannel bridge(std::move(bridge_ops),
                        std::max(kTpTol, 2.0 * tp + 1e-12));
    const double fwd = frobenius(bridge.apply(rho.matrix()) - omega.matrix());

    out.bridge.emplace(std::move(bridge));
    out.potentials = {alpha, beta, gamma};
    out.forward_residual = fwd;
    out.tp_residual = tp;
    out.status = (fwd < opts.tol && tp < opts.tol)
                     ? QuantumStatus::Converged
                     : QuantumStatus::MaxIterations;
  } catch (const RankDeficient&) {
    out.status = QuantumStatus::RankDeficientIterate;
  }
  return out;
}

double gamma_substitution_residual(const KrausChannel& e, const DensityMatrix& rho,
                          const DensityMatrix& omega,
                          const DensityMatrix& gamma) {
  const ComplexMatrix big_gamma = gamma_operator(e, gamma, omega).matrix();
  const ComplexMatrix back = hermitize(e.apply_adjoint(big_gamma));
  const ComplexMatrix back_ih = matrix_inv_sqrt(back);
  const ComplexMatrix g_h = matrix_sqrt(big_gamma);
  const ComplexMatrix f_rho =
      g_h * e.apply(back_ih * rho.matrix() * back_ih) * g_h;
  return frobenius(hermitize(f_rho) - omega.matrix());
}

namespace {

KrausChannel build_unitary(const UnitaryChannel& spec) {
  const Eigen::Index d = spec.u.rows();
  if (d == 0 || spec.u.cols() != d)
    throw std::invalid_argument("make_qubit_channel: unitary not square");
  if (max_abs(spec.u.adjoint() * spec.u - ComplexMatrix::Identity(d, d)) >
      1e-10)
    throw std::invalid_argument("make_qubit_channel: matrix is not unitary");
  return KrausChannel({spec.u});
}

KrausChannel build_erasure(const QuantumErasure& spec) {
  const Eigen::Index d = spec.target.dim();
  SpectralDecomposition eig = herm_eig(spec.target.matrix());
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double s = eig.eigenvalues[i];
    if (s <= kRankEps) continue;
    for (Eigen::Index j = 0; j < d; ++j) {
      ComplexMatrix k = ComplexMatrix::Zero(d, d);
      k.col(j) = std::sqrt(s) * eig.eigenvectors.col(i);
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel(std::move(ops));
}

void check_lambda(double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("make_qubit_channel: lambda outside [0, 1]");
}

KrausChannel build_depolarising(double lambda) {
  check_lambda(lambda);
  std::vector<ComplexMatrix> ops;
  ops.push_back(std::sqrt(1.0 - 0.75 * lambda) *
                ComplexMatrix::Identity(2, 2));
  const double c = std::sqrt(0.25 * lambda);
  if (c > 0.0) {
    ops.push_back(c * pauli_x());
    ops.push_back(c * pauli_y());
    ops.push_back(c * pauli_z());
  }
  return KrausChannel(std::move(ops));
}

KrausChannel build_dephasing(double lambda) {
  check_lambda(lambda);
  ComplexMatrix z0 = ComplexMatrix::Zero(2, 2);
  z0(0, 0) = 1.0;
  z0(1, 1) = std::sqrt(1.0 - lambda);
  ComplexMatrix z1 = ComplexMatrix::Zero(2, 2);
  z1(1, 1) = std::sqrt(lambda);
  std::vector<ComplexMatrix> ops{z0};
  if (lambda > 0.0) ops.push_back(z1);
  return KrausChannel(std::move(ops));
}

KrausChannel build_amplitude_damping(double lambda) {
  check_lambda(lambda);
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - lambda);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(lambda);
  std::vector<ComplexMatrix> ops{k0};
  if (lambda > 0.0) ops.push_back(k1);
  return KrausChannel(std::move(ops));
}

}  // namespace

KrausChannel make_qubit_channel(const QubitChannelSpec& spec) {
  return std::visit(
      [](const auto& s) -> KrausChannel {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UnitaryChannel>)
          return build_unitary(s);
        else if constexpr (std::is_same_v<T, QuantumErasure>)
          return build_erasure(s);
        else if constexpr (std::is_same_v<T, Depolarising>)
          return build_depolarising(s.lambda);
        else if constexpr (std::is_same_v<T, Dephasing>)
          return build_dephasing(s.lambda);
        else
          return build_amplitude_damping(s.lambda);
      },
      spec);
}

KrausChannel make_random_channel(Eigen::Index in_dim, Eigen::Index out_dim,
                                 Eigen::Index env_dim, std::uint64_t seed) {
  if (in_dim < 1 || out_dim < 1 || env_dim < 1 || out_dim * env_dim < in_dim)
    throw std::invalid_argument("make_random_channel: bad dimensions");
  Rng rng(seed);
  ComplexMatrix g = rng.ginibre(out_dim * env_dim, in_dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() *
                    ComplexMatrix::Identity(out_dim * env_dim, in_dim);
  // Fix the phase of R's diagonal so the isometry is a deterministic
  // function of the seed.
  ComplexMatrix r = qr.matrixQR().topRows(in_dim);
  for (Eigen::Index j = 0; j < in_dim; ++j) {
    const Complex rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(env_dim);
  for (Eigen::Index env = 0; env < env_dim; ++env)
    ops.push_back(q.middleRows(env * out_dim, out_dim));
  return KrausChannel(std::move(ops));
}

BlochVector depolarising_petz_bloch(const BlochVector& r, double s,
                                    double lambda) {
  check_lambda(lambda);
  const double rn = r.norm();
  if (rn > 1.0 + 1e-10 || std::abs(s) > 1.0 + 1e-10)
    throw std::invalid_argument(
        "depolarising_petz_bloch: Bloch arguments outside the ball");
  const double mu_p = 0.5 * (1.0 + rn);
  const double mu_m = 0.5 * (1.0 - rn);
  const double a_p = 0.5 * (1.0 + rn * (1.0 - lambda));
  const double a_m = 0.5 * (1.0 - rn * (1.0 - lambda));
  if (a_m <= kRankEps)
    throw RankDeficient(
        "depolarising_petz_bloch: degenerate at |r| = 1, lambda = 0");

  if (rn < 1e-15)
    return {0.0, 0.0, (1.0 - lambda) * s};

  const double nx = r.x / rn, ny = r.y / rn, nz = r.z / rn;
  const double root_diff =
      std::sqrt(mu_p / a_p) - std::sqrt(mu_m / a_m);
  const double c_n = 0.5 * (1.0 - lambda) *
                     ((mu_p / a_p - mu_m / a_m) + s * nz * root_diff * root_diff);
  const double c_z = (1.0 - lambda) * s * std::sqrt((mu_p * mu_m) / (a_p * a_m));
  double c_r = 0.0;
  if (lambda > 0.0) {
    const double shrink = 1.0 - lambda;
    c_r = lambda * (1.0 - rn * nz * s * shrink) /
          (1.0 - shrink * shrink * rn * rn);
  }
  return {c_n * nx + c_r * r.x, c_n * ny + c_r * r.y,
          c_n * nz + c_z + c_r * r.z};
}

bool dephasing_feasible(const DensityMatrix& rho, const DensityMatrix& omega) {
  if (rho.dim() != omega.dim())
    throw std::invalid_argument("dephasing_feasible: dimension mismatch");
  const ComplexMatrix& r = rho.matrix();
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j)
      if (i != j && std::abs(r(i, j)) > 1e-10)
        throw NotDecoherent("dephasing_feasible: rho has off-diagonal weight");
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    if (std::abs(r(i, i).real() - omega.matrix()(i, i).real()) > 1e-10)
      return false;
  return true;
}

std::vector<ComplexMatrix> hermitian_basis(Eigen::Index dim) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m(i, i) = 1.0;
    basis.push_back(std::move(m));
  }
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
      sym(i, j) = 1.0;
      sym(j, i) = 1.0;
      basis.push_back(std::move(sym));
      ComplexMatrix anti = ComplexMatrix::Zero(dim, dim);
      anti(i, j) = Complex(0.0, 1.0);
      anti(j, i) = Complex(0.0, -1.0);
      basis.push_back(std::move(anti));
    }
  return basis;
}

}  // namespace bridgehack
