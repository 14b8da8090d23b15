#ifndef BRIDGEHACK_CLASSICAL_HPP_
#define BRIDGEHACK_CLASSICAL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bridgehack/mathcore.hpp"

namespace bridgehack {

// Validation tolerances for the classical value types.
inline constexpr double kProbSumTol = 1e-12;
inline constexpr double kCouplingSumTol = 1e-10;
// User-supplied entries below this are clamped to exact zero so the support
// pattern of a matrix is unambiguous.
inline constexpr double kZeroClamp = 1e-15;

// Column probability vector: nonnegative weights summing to 1.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(RealVector weights);

  static ProbabilityVector uniform(Eigen::Index dim);
  static ProbabilityVector delta(Eigen::Index dim, Eigen::Index x);

  Eigen::Index dim() const { return weights_.size(); }
  const RealVector& weights() const { return weights_; }
  double operator[](Eigen::Index i) const { return weights_[i]; }

 private:
  RealVector weights_;
};

// Forward scaling potential Gamma = q (/) (E gamma): nonnegative, nonzero.
// Entries vanish exactly where the evidence q does; elsewhere they are
// strictly positive.
class ScalingPotential {
 public:
  explicit ScalingPotential(RealVector weights);

  static ScalingPotential ones(Eigen::Index dim);

  Eigen::Index dim() const { return weights_.size(); }
  const RealVector& weights() const { return weights_; }
  double operator[](Eigen::Index i) const { return weights_[i]; }

 private:
  RealVector weights_;
};

// Column-stochastic transition matrix, entry (y, x) = E(y|x).
class StochasticMatrix {
 public:
  explicit StochasticMatrix(RealMatrix entries);

  static StochasticMatrix identity(Eigen::Index dim);

  Eigen::Index in_dim() const { return entries_.cols(); }
  Eigen::Index out_dim() const { return entries_.rows(); }
  const RealMatrix& entries() const { return entries_; }
  double operator()(Eigen::Index y, Eigen::Index x) const {
    return entries_(y, x);
  }

  bool strictly_positive() const { return entries_.minCoeff() > 0.0; }

 private:
  RealMatrix entries_;
};

// Joint distribution over input-output pairs, entry (x, y).
class Coupling {
 public:
  explicit Coupling(RealMatrix entries);

  Eigen::Index in_dim() const { return entries_.rows(); }
  Eigen::Index out_dim() const { return entries_.cols(); }
  const RealMatrix& entries() const { return entries_; }

  RealVector row_marginal() const { return entries_.rowwise().sum(); }
  RealVector col_marginal() const { return entries_.colwise().sum(); }

 private:
  RealMatrix entries_;
};

enum class SolveStatus { Converged, MaxIterations, Singular };

std::string to_string(SolveStatus s);

struct HackSolution {
  ProbabilityVector gamma;    // hacked prior (last iterate if not converged)
  ScalingPotential potential; // Gamma = q (/) (E gamma) at the final iterate
  double residual = 0.0;      // l1 norm of E-hat_gamma q - p
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIterations;
};

// Index subsets are reported as sorted lists.
struct SubsetPair {
  std::vector<int> inputs;   // X
  std::vector<int> outputs;  // Y = reach(X)
  double p_mass = 0.0;
  double q_mass = 0.0;
  bool decoupled = false;  // nothing outside X reaches into Y
};

struct FeasibilityVerdict {
  bool feasible = true;
  std::optional<SubsetPair> witness;  // lexicographically smallest violation
  std::vector<SubsetPair> equality_constraints;  // decoupled partitions
};

struct RasOptions {
  double tol = 1e-10;
  int max_iterations = 10000;
  // Unset: deterministic uniform start. Set: Dirichlet(1,...,1) start, used
  // for restart-agreement checks.
  std::optional<std::uint64_t> seed;
  // Plateau rule: stop with MaxIterations when the relative residual
  // improvement over this many consecutive iterations falls below
  // plateau_rel_improvement.
  int plateau_window = 50;
  double plateau_rel_improvement = 1e-13;
};

// [E p](y) = sum_x E(y|x) p(x).
ProbabilityVector apply_channel(const StochasticMatrix& e,
                                const ProbabilityVector& p);

// Bayes map E-hat_gamma = D_gamma E^T D^{-1}_{E gamma}. Throws Singular when
// some entry of E gamma vanishes.
StochasticMatrix bayes_inverse(const StochasticMatrix& e,
                               const ProbabilityVector& gamma);

// RAS fixed-point iteration for the prior-hacking equation
//   gamma = p (/) [E^T (q (/) (E gamma))],
// renormalizing gamma each step. Converged means
// ||bayes_inverse(e, gamma) q - p||_1 < tol.
HackSolution prior_hack_ras(const StochasticMatrix& e,
                            const ProbabilityVector& p,
                            const ProbabilityVector& q,
                            const RasOptions& opts = {});

// Exact feasibility of the hacking problem by subset enumeration: for every
// X subseteq inputs with reach set Y(X), require sum_{Y(X)} q >= sum_X p,
// with equality when no input outside X reaches into Y(X). in_dim is capped
// at 20; beyond that throws DimensionTooLarge.
FeasibilityVerdict check_feasibility(const StochasticMatrix& e,
                                     const ProbabilityVector& p,
                                     const ProbabilityVector& q);

// True iff every entry of E is strictly positive, i.e. prior hacking succeeds
// for every (p, q).
bool is_always_hackable(const StochasticMatrix& e);

// Smallest n with E^n strictly positive, searched up to the Wielandt bound
// (d-1)^2 + 1. Requires a square matrix.
struct PrimitivityResult {
  bool primitive = false;
  std::optional<int> exponent;
};
PrimitivityResult is_primitive(const StochasticMatrix& e);

// Single-step Schroedinger bridge F-bar = D_Gamma E D^{-1}_{E^T Gamma} from a
// converged hack solution for (e, p, q). Satisfies F-bar p = q and the
// duality bayes_inverse(F-bar, p) = bayes_inverse(e, gamma).
StochasticMatrix bridge_from_prior(const StochasticMatrix& e,
                                   const HackSolution& solution);

// B(x, y) = gamma(x) E(y|x) Gamma(y).
Coupling coupling_from(const StochasticMatrix& e,
                       const ProbabilityVector& gamma,
                       const ScalingPotential& potential);

// KL divergence sum b log(b/a) in nats with 0 log 0 = 0. Throws
// SupportViolation when b places mass outside the support of a.
double coupling_kl(const Coupling& b, const Coupling& a);

// Channel families used throughout the examples and figures.
struct Permutation {
  std::vector<int> map;  // x -> map[x]
};
struct Erasure {
  ProbabilityVector target;
};
struct Bistochastic {  // (1 - lambda) I + (lambda / d) * ones
  Eigen::Index dim = 0;
  double lambda = 0.0;
};
struct Absorber {
  Eigen::Index dim = 0;
  std::vector<int> absorbing;  // identity on these states
  double rate = 0.0;           // leak per step from transient states
};
struct BlockSymmetric {
  std::vector<std::vector<int>> blocks;
  double lambda = 0.0;  // within-block mixing
};
struct RandomPositive {
  Eigen::Index out_dim = 0;
  Eigen::Index in_dim = 0;
  std::uint64_t seed = 0;
};

using ChannelSpec = std::variant<Permutation, Erasure, Bistochastic, Absorber,
                                 BlockSymmetric, RandomPositive>;

StochasticMatrix make_channel(const ChannelSpec& spec);

}  // namespace bridgehack

#endif  // BRIDGEHACK_CLASSICAL_HPP_
