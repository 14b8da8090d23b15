#ifndef BRIDGEHACK_QUANTUM_HPP_
#define BRIDGEHACK_QUANTUM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bridgehack/mathcore.hpp"

namespace bridgehack {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-12;
inline constexpr double kTpTol = 1e-10;

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

// Hermitian, PSD (eigenvalues >= -1e-12), unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix maximally_mixed(Eigen::Index dim);
  static DensityMatrix pure(const Eigen::VectorXcd& ket);
  static DensityMatrix from_bloch(const BlochVector& r);
  static DensityMatrix diagonal(const RealVector& populations);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

  BlochVector bloch_vector() const;  // qubits only

 private:
  ComplexMatrix m_;
};

// Hermitian PSD, no trace normalization. Houses Gamma, Xi, xi.
class PositiveOperator {
 public:
  explicit PositiveOperator(ComplexMatrix m);

  static PositiveOperator identity(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

// CPTP map as a finite Kraus list, sum K^dag K = I within tp_tol.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops,
                        double tp_tol = kTpTol);

  Eigen::Index in_dim() const { return in_dim_; }
  Eigen::Index out_dim() const { return out_dim_; }
  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }
  double tp_defect() const { return tp_defect_; }

  ComplexMatrix apply(const ComplexMatrix& x) const;          // sum K x K^dag
  ComplexMatrix apply_adjoint(const ComplexMatrix& x) const;  // sum K^dag x K

  // Choi matrix sum_k vec(K_k) vec(K_k)^dag with column-major vec; two
  // channels are equal as maps iff their Choi matrices agree.
  ComplexMatrix choi_matrix() const;

 private:
  Eigen::Index in_dim_ = 0;
  Eigen::Index out_dim_ = 0;
  std::vector<ComplexMatrix> ops_;
  double tp_defect_ = 0.0;
};

enum class QuantumStatus { Converged, MaxIterations, RankDeficientIterate };

std::string to_string(QuantumStatus s);

struct QuantumHackSolution {
  DensityMatrix prior;     // gamma, last iterate if not converged
  double residual = 0.0;   // ||Petz_gamma(omega) - rho||_F
  int iterations = 0;
  QuantumStatus status = QuantumStatus::MaxIterations;
};

enum class BridgeMode { Hermitian, InferenceConsistent };

struct BridgeResult {
  std::optional<KrausChannel> bridge;
  std::vector<ComplexMatrix> potentials;  // {Xi, xi} or {alpha, beta, gamma}
  double forward_residual = 0.0;          // ||F[rho] - omega||_F
  double tp_residual = 0.0;               // ||F^dag[I] - I||_F
  int iterations = 0;
  QuantumStatus status = QuantumStatus::MaxIterations;
  BridgeMode mode = BridgeMode::Hermitian;
};

struct QuantumSolveOptions {
  double tol = 1e-8;
  int max_iterations = 5000;
  std::optional<std::uint64_t> seed;  // unset: maximally mixed / identity init
  int plateau_window = 50;
  double plateau_rel_improvement = 1e-13;
};

DensityMatrix apply_channel(const KrausChannel& e, const DensityMatrix& rho);
PositiveOperator apply_adjoint(const KrausChannel& e,
                               const PositiveOperator& x);

// Petz transpose of e with reference prior gamma on an arbitrary operator:
//   sqrt(gamma) E^dag[(E[gamma])^{-1/2} x (E[gamma])^{-1/2}] sqrt(gamma).
// Throws RankDeficient when E[gamma] fails the eigenvalue floor.
ComplexMatrix petz_apply(const KrausChannel& e, const ComplexMatrix& gamma,
                         const ComplexMatrix& x);

DensityMatrix petz_map(const KrausChannel& e, const DensityMatrix& gamma,
                       const DensityMatrix& omega);

// Gamma = (E[gamma])^{-1/2} omega (E[gamma])^{-1/2}.
PositiveOperator gamma_operator(const KrausChannel& e,
                                const DensityMatrix& gamma,
                                const DensityMatrix& omega);

// Fixed-point iteration for the quantum hacking equation
// Petz_gamma(omega) = rho. Each sweep propagates gamma, rescales by omega,
// counter-propagates, and solves the sandwich equation M E^dag[Gamma] M = rho
// for M = sqrt(gamma). rho must be positive definite above the floor.
QuantumHackSolution quantum_prior_hack(const KrausChannel& e,
                                       const DensityMatrix& rho,
                                       const DensityMatrix& omega,
                                       const QuantumSolveOptions& opts = {});

struct PositivityProbe {
  double min_eigenvalue = 0.0;
  bool is_improving_heuristic = false;
};

// Samples Haar-random pure inputs and reports the smallest output eigenvalue
// seen. A positivity-improving channel keeps this bounded away from zero.
PositivityProbe positivity_improving_check(const KrausChannel& e,
                                           int n_samples, std::uint64_t seed);

// Hermitian-potential quantum Schroedinger bridge (Xi iteration, Xi_0 = I):
//   F[.] = sqrt(Xi) E[(E^dag[Xi])^{-1/2} . (E^dag[Xi])^{-1/2}] sqrt(Xi).
// omega must be full rank above the floor.
BridgeResult qsb_hermitian(const KrausChannel& e, const DensityMatrix& rho,
                           const DensityMatrix& omega,
                           const QuantumSolveOptions& opts = {});

// Inference-consistent bridge built from a converged quantum prior hack:
//   F[.] = beta E[alpha^{-1} . alpha^{-dag}] beta^dag,
//   alpha = sqrt(rho) gamma^{-1/2}, beta = sqrt(omega) (E[gamma])^{-1/2}.
// Its Petz transpose at prior rho coincides with the Petz transpose of e at
// the hacked prior gamma.
BridgeResult qsb_inference_consistent(const KrausChannel& e,
                                      const DensityMatrix& rho,
                                      const DensityMatrix& omega,
                                      const QuantumSolveOptions& opts = {});

// ||F^{Xi->Gamma}[rho] - omega||_F for the Hermitian bridge form evaluated at
// Gamma = gamma_operator(e, gamma, omega). Vanishes on commuting instances
// and is generically positive: the Hermitian bridge is not the
// inference-consistent one.
double gamma_substitution_residual(const KrausChannel& e, const DensityMatrix& rho,
                          const DensityMatrix& omega,
                          const DensityMatrix& gamma);

// Qubit channel families.
struct UnitaryChannel {
  ComplexMatrix u;
};
struct QuantumErasure {
  DensityMatrix target;
};
struct Depolarising {
  double lambda = 0.0;
};
struct Dephasing {
  double lambda = 0.0;
};
struct AmplitudeDamping {
  double lambda = 0.0;
};

using QubitChannelSpec = std::variant<UnitaryChannel, QuantumErasure,
                                      Depolarising, Dephasing, AmplitudeDamping>;

KrausChannel make_qubit_channel(const QubitChannelSpec& spec);

// Haar-random Stinespring channel with the given environment dimension.
KrausChannel make_random_channel(Eigen::Index in_dim, Eigen::Index out_dim,
                                 Eigen::Index env_dim, std::uint64_t seed);

// Closed form for the Petz output of the depolarising channel with prior
// Bloch vector r and z-axis evidence of length s:
//   mu_pm = (1 pm |r|)/2,  a_pm = (1 pm |r|(1 - lambda))/2.
BlochVector depolarising_petz_bloch(const BlochVector& r, double s,
                                    double lambda);

// For the completely dephasing channel and a decoherent conclusion rho:
// hacking is possible iff diag(rho) = diag(omega). Throws NotDecoherent when
// rho carries off-diagonal weight.
bool dephasing_feasible(const DensityMatrix& rho, const DensityMatrix& omega);

// Complete Hermitian operator basis of d x d matrices (d^2 elements):
// diagonal units, symmetric and antisymmetric pair combinations.
std::vector<ComplexMatrix> hermitian_basis(Eigen::Index dim);

const ComplexMatrix& pauli_x();
const ComplexMatrix& pauli_y();
const ComplexMatrix& pauli_z();

}  // namespace bridgehack

#endif  // BRIDGEHACK_QUANTUM_HPP_
