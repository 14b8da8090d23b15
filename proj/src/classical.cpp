#include "bridgehack/classical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "bridgehack/log.hpp"
#include "bridgehack/rng.hpp"

namespace bridgehack {

namespace {

// Clamp |v| < kZeroClamp to exact zero so support patterns are unambiguous.
// Negative entries beyond the clamp are a validation error, not noise.
int clamp_small(RealVector& v) {
  int clamped = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0 && std::abs(v[i]) < kZeroClamp) {
      v[i] = 0.0;
      ++clamped;
    }
  }
  return clamped;
}

int clamp_small(RealMatrix& m) {
  int clamped = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0 && std::abs(m(i, j)) < kZeroClamp) {
        m(i, j) = 0.0;
        ++clamped;
      }
  return clamped;
}

std::vector<int> bits_of(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

}  // namespace

ProbabilityVector::ProbabilityVector(RealVector weights)
    : weights_(std::move(weights)) {
  if (weights_.size() == 0)
    throw std::invalid_argument("ProbabilityVector: empty");
  int clamped = clamp_small(weights_);
  if (clamped > 0)
    log_info("ProbabilityVector: clamped " + std::to_string(clamped) +
              " entries below 1e-15 to zero");
  if (weights_.minCoeff() < 0.0)
    throw std::invalid_argument("ProbabilityVector: negative weight");
  if (!weights_.allFinite())
    throw std::invalid_argument("ProbabilityVector: non-finite weight");
  if (std::abs(weights_.sum() - 1.0) > kProbSumTol)
    throw std::invalid_argument("ProbabilityVector: weights do not sum to 1");
}

ProbabilityVector ProbabilityVector::uniform(Eigen::Index dim) {
  return ProbabilityVector(RealVector::Constant(dim, 1.0 / double(dim)));
}

ProbabilityVector ProbabilityVector::delta(Eigen::Index dim, Eigen::Index x) {
  if (x < 0 || x >= dim)
    throw std::invalid_argument("ProbabilityVector::delta: index out of range");
  RealVector w = RealVector::Zero(dim);
  w[x] = 1.0;
  return ProbabilityVector(std::move(w));
}

ScalingPotential::ScalingPotential(RealVector weights)
    : weights_(std::move(weights)) {
  if (weights_.size() == 0)
    throw std::invalid_argument("ScalingPotential: empty");
  if (!weights_.allFinite())
    throw std::invalid_argument("ScalingPotential: non-finite weight");
  // Zero entries are allowed exactly where the evidence vanishes; anything
  // negative is an error.
  if (weights_.minCoeff() < 0.0)
    throw std::invalid_argument("ScalingPotential: negative weight");
  if (weights_.maxCoeff() <= 0.0)
    throw std::invalid_argument("ScalingPotential: all weights vanish");
}

ScalingPotential ScalingPotential::ones(Eigen::Index dim) {
  return ScalingPotential(RealVector::Ones(dim));
}

StochasticMatrix::StochasticMatrix(RealMatrix entries)
    : entries_(std::move(entries)) {
  if (entries_.size() == 0)
    throw std::invalid_argument("StochasticMatrix: empty");
  int clamped = clamp_small(entries_);
  if (clamped > 0)
    log_info("StochasticMatrix: clamped " + std::to_string(clamped) +
              " entries below 1e-15 to zero");
  if (entries_.minCoeff() < 0.0)
    throw std::invalid_argument("StochasticMatrix: negative entry");
  if (!entries_.allFinite())
    throw std::invalid_argument("StochasticMatrix: non-finite entry");
  for (Eigen::Index x = 0; x < entries_.cols(); ++x) {
    if (std::abs(entries_.col(x).sum() - 1.0) > kProbSumTol)
      throw std::invalid_argument("StochasticMatrix: column " +
                                  std::to_string(x) + " does not sum to 1");
  }
}

StochasticMatrix StochasticMatrix::identity(Eigen::Index dim) {
  return StochasticMatrix(RealMatrix::Identity(dim, dim));
}

Coupling::Coupling(RealMatrix entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0) throw std::invalid_argument("Coupling: empty");
  if (entries_.minCoeff() < 0.0)
    throw std::invalid_argument("Coupling: negative entry");
  if (std::abs(entries_.sum() - 1.0) > kCouplingSumTol)
    throw std::invalid_argument("Coupling: total mass is not 1");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::Singular: return "singular";
  }
  return "unknown";
}

ProbabilityVector apply_channel(const StochasticMatrix& e,
                                const ProbabilityVector& p) {
  if (e.in_dim() != p.dim())
    throw std::invalid_argument("apply_channel: dimension mismatch");
  return ProbabilityVector(e.entries() * p.weights());
}

StochasticMatrix bayes_inverse(const StochasticMatrix& e,
                               const ProbabilityVector& gamma) {
  if (e.in_dim() != gamma.dim())
    throw std::invalid_argument("bayes_inverse: dimension mismatch");
  const RealVector eg = e.entries() * gamma.weights();
  if (eg.minCoeff() <= kDivEps)
    throw Singular("bayes_inverse: E gamma lacks full support");
  // E-hat(x|y) = gamma(x) E(y|x) / [E gamma](y)
  RealMatrix ehat(e.in_dim(), e.out_dim());
  for (Eigen::Index y = 0; y < e.out_dim(); ++y)
    for (Eigen::Index x = 0; x < e.in_dim(); ++x)
      ehat(x, y) = gamma[x] * e(y, x) / eg[y];
  return StochasticMatrix(std::move(ehat));
}

HackSolution prior_hack_ras(const StochasticMatrix& e,
                            const ProbabilityVector& p,
                            const ProbabilityVector& q,
                            const RasOptions& opts) {
  if (e.in_dim() != p.dim() || e.out_dim() != q.dim())
    throw std::invalid_argument("prior_hack_ras: dimension mismatch");
  if (opts.tol <= 0.0)
    throw std::invalid_argument("prior_hack_ras: tol must be positive");

  const RealMatrix& E = e.entries();
  RealVector gamma;
  if (opts.seed.has_value()) {
    Rng rng(*opts.seed);
    gamma = rng.dirichlet(e.in_dim());
  } else {
    gamma = RealVector::Constant(e.in_dim(), 1.0 / double(e.in_dim()));
  }

  RealVector potential = RealVector::Ones(e.out_dim());
  double residual = std::numeric_limits<double>::infinity();
  std::vector<double> residual_history;
  residual_history.reserve(std::min(opts.max_iterations + 1, 1 << 16));

  auto finish = [&](SolveStatus status, int iterations) {
    return HackSolution{ProbabilityVector(gamma / gamma.sum()),
                        ScalingPotential(potential), residual, iterations,
                        status};
  };

  for (int it = 0;; ++it) {
    try {
      // Exact-zero divisor test: structural support violations raise
      // DivisionSingularity, while iterates collapsing toward the boundary
      // on infeasible instances stay finite until the plateau rule fires.
      potential = hadamard_divide(q.weights(), E * gamma, 0.0);
      const RealVector back = E.transpose() * potential;
      if (!back.allFinite()) return finish(SolveStatus::Singular, it);
      // Residual of the current iterate: ||E-hat_gamma q - p||_1, where
      // E-hat_gamma q = gamma (.) E^T (q (/) E gamma).
      residual = (gamma.cwiseProduct(back) - p.weights()).lpNorm<1>();
      if (residual < opts.tol) return finish(SolveStatus::Converged, it);
      residual_history.push_back(residual);
      if (it >= opts.plateau_window) {
        const double old = residual_history[it - opts.plateau_window];
        if (old - residual < opts.plateau_rel_improvement * old) {
          log_debug("prior_hack_ras: residual plateau after " +
                    std::to_string(it) + " iterations");
          return finish(SolveStatus::MaxIterations, it);
        }
      }
      if (it >= opts.max_iterations)
        return finish(SolveStatus::MaxIterations, it);

      RealVector next = hadamard_divide(p.weights(), back, 0.0);
      if (!next.allFinite() || next.sum() <= 0.0)
        return finish(SolveStatus::Singular, it);
      gamma = next / next.sum();
    } catch (const DivisionSingularity&) {
      return finish(SolveStatus::Singular, it);
    }
  }
}

FeasibilityVerdict check_feasibility(const StochasticMatrix& e,
                                     const ProbabilityVector& p,
                                     const ProbabilityVector& q) {
  if (e.in_dim() != p.dim() || e.out_dim() != q.dim())
    throw std::invalid_argument("check_feasibility: dimension mismatch");
  const Eigen::Index d = e.in_dim();
  const Eigen::Index dp = e.out_dim();
  if (d > 20 || dp > 31)
    throw DimensionTooLarge("check_feasibility: enumeration bound is 20");

  constexpr double kMassTol = 1e-12;

  // reach({x}) as an output bitmask, per input.
  std::vector<std::uint32_t> col_reach(d, 0);
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < dp; ++y)
      if (e(y, x) > 0.0) col_reach[x] |= (1u << y);

  FeasibilityVerdict verdict;
  std::optional<std::vector<int>> best_witness;

  auto consider_witness = [&](std::uint32_t xmask, std::uint32_t ymask,
                              double p_mass, double q_mass, bool decoupled) {
    std::vector<int> xs = bits_of(xmask);
    if (!best_witness || std::lexicographical_compare(
                             xs.begin(), xs.end(), best_witness->begin(),
                             best_witness->end())) {
      best_witness = xs;
      verdict.witness = SubsetPair{std::move(xs), bits_of(ymask), p_mass,
                                   q_mass, decoupled};
    }
  };

  const std::uint32_t full = (d == 32) ? ~0u : ((1u << d) - 1u);
  for (std::uint32_t xmask = 1; xmask <= full; ++xmask) {
    std::uint32_t ymask = 0;
    double p_mass = 0.0;
    for (std::uint32_t m = xmask; m != 0; m &= m - 1) {
      const int x = std::countr_zero(m);
      ymask |= col_reach[x];
      p_mass += p[x];
    }
    double q_mass = 0.0;
    for (std::uint32_t m = ymask; m != 0; m &= m - 1)
      q_mass += q[std::countr_zero(m)];
    bool decoupled = true;
    for (std::uint32_t m = full & ~xmask; m != 0 && decoupled; m &= m - 1)
      if (col_reach[std::countr_zero(m)] & ymask) decoupled = false;

    if (q_mass < p_mass - kMassTol ||
        (decoupled && std::abs(q_mass - p_mass) > kMassTol)) {
      verdict.feasible = false;
      consider_witness(xmask, ymask, p_mass, q_mass, decoupled);
    }
  }

  // Decoupled partitions are exactly the connected components of the
  // bipartite support graph; they carry the equality constraints.
  std::vector<int> comp_in(d, -1), comp_out(dp, -1);
  int n_comp = 0;
  for (Eigen::Index x0 = 0; x0 < d; ++x0) {
    if (comp_in[x0] != -1) continue;
    const int c = n_comp++;
    std::vector<Eigen::Index> stack{x0};
    comp_in[x0] = c;
    while (!stack.empty()) {
      const Eigen::Index x = stack.back();
      stack.pop_back();
      for (Eigen::Index y = 0; y < dp; ++y) {
        if (e(y, x) <= 0.0 || comp_out[y] == c) continue;
        if (comp_out[y] == -1) comp_out[y] = c;
        for (Eigen::Index x2 = 0; x2 < d; ++x2)
          if (e(y, x2) > 0.0 && comp_in[x2] == -1) {
            comp_in[x2] = c;
            stack.push_back(x2);
          }
      }
    }
  }
  for (int c = 0; c < n_comp; ++c) {
    SubsetPair part;
    part.decoupled = true;
    for (Eigen::Index x = 0; x < d; ++x)
      if (comp_in[x] == c) {
        part.inputs.push_back(int(x));
        part.p_mass += p[x];
      }
    for (Eigen::Index y = 0; y < dp; ++y)
      if (comp_out[y] == c) {
        part.outputs.push_back(int(y));
        part.q_mass += q[y];
      }
    verdict.equality_constraints.push_back(std::move(part));
  }
  // Outputs unreachable from every input: q must vanish there.
  SubsetPair isolated;
  isolated.decoupled = true;
  for (Eigen::Index y = 0; y < dp; ++y)
    if (comp_out[y] == -1) {
      isolated.outputs.push_back(int(y));
      isolated.q_mass += q[y];
    }
  if (!isolated.outputs.empty())
    verdict.equality_constraints.push_back(std::move(isolated));

  return verdict;
}

bool is_always_hackable(const StochasticMatrix& e) {
  return e.strictly_positive();
}

PrimitivityResult is_primitive(const StochasticMatrix& e) {
  if (e.in_dim() != e.out_dim())
    throw std::invalid_argument("is_primitive: matrix not square");
  const Eigen::Index d = e.in_dim();
  if (d > 31) throw DimensionTooLarge("is_primitive: dimension bound is 31");
  const std::uint32_t full = (1u << d) - 1u;

  // Boolean row masks of the support pattern; powers track reachability.
  std::vector<std::uint32_t> base(d, 0), power(d, 0);
  for (Eigen::Index y = 0; y < d; ++y)
    for (Eigen::Index x = 0; x < d; ++x)
      if (e(y, x) > 0.0) base[y] |= (1u << x);
  power = base;

  const int wielandt = int((d - 1) * (d - 1) + 1);
  for (int n = 1; n <= wielandt; ++n) {
    bool all_positive = true;
    for (Eigen::Index y = 0; y < d && all_positive; ++y)
      if (power[y] != full) all_positive = false;
    if (all_positive) return {true, n};
    // power <- base * power (boolean)
    std::vector<std::uint32_t> next(d, 0);
    for (Eigen::Index y = 0; y < d; ++y)
      for (std::uint32_t m = base[y]; m != 0; m &= m - 1)
        next[y] |= power[std::countr_zero(m)];
    power = std::move(next);
  }
  return {false, std::nullopt};
}

StochasticMatrix bridge_from_prior(const StochasticMatrix& e,
                                   const HackSolution& solution) {
  if (solution.status != SolveStatus::Converged)
    throw std::invalid_argument(
        "bridge_from_prior: requires a converged hack solution");
  const RealVector& potential = solution.potential.weights();
  if (potential.size() != e.out_dim())
    throw std::invalid_argument("bridge_from_prior: potential dimension");
  const RealVector back = e.entries().transpose() * potential;
  if (back.minCoeff() <= kDivEps)
    throw Singular("bridge_from_prior: E^T Gamma has a vanishing entry");
  // F-bar = D_Gamma E D^{-1}_{E^T Gamma}
  RealMatrix f(e.out_dim(), e.in_dim());
  for (Eigen::Index y = 0; y < e.out_dim(); ++y)
    for (Eigen::Index x = 0; x < e.in_dim(); ++x)
      f(y, x) = potential[y] * e(y, x) / back[x];
  return StochasticMatrix(std::move(f));
}

Coupling coupling_from(const StochasticMatrix& e,
                       const ProbabilityVector& gamma,
                       const ScalingPotential& potential) {
  if (e.in_dim() != gamma.dim() || e.out_dim() != potential.dim())
    throw std::invalid_argument("coupling_from: dimension mismatch");
  RealMatrix b(e.in_dim(), e.out_dim());
  for (Eigen::Index x = 0; x < e.in_dim(); ++x)
    for (Eigen::Index y = 0; y < e.out_dim(); ++y)
      b(x, y) = gamma[x] * e(y, x) * potential[y];
  return Coupling(std::move(b));
}

double coupling_kl(const Coupling& b, const Coupling& a) {
  if (b.in_dim() != a.in_dim() || b.out_dim() != a.out_dim())
    throw std::invalid_argument("coupling_kl: dimension mismatch");
  double kl = 0.0;
  for (Eigen::Index x = 0; x < b.in_dim(); ++x)
    for (Eigen::Index y = 0; y < b.out_dim(); ++y) {
      const double bv = b.entries()(x, y);
      if (bv == 0.0) continue;
      const double av = a.entries()(x, y);
      if (av <= 0.0)
        throw SupportViolation("coupling_kl: mass outside reference support");
      kl += bv * std::log(bv / av);
    }
  return kl;
}

namespace {

StochasticMatrix build_permutation(const Permutation& spec) {
  const Eigen::Index d = Eigen::Index(spec.map.size());
  std::vector<bool> seen(spec.map.size(), false);
  for (int y : spec.map) {
    if (y < 0 || y >= d || seen[y])
      throw std::invalid_argument("make_channel: not a permutation");
    seen[y] = true;
  }
  RealMatrix m = RealMatrix::Zero(d, d);
  for (Eigen::Index x = 0; x < d; ++x) m(spec.map[x], x) = 1.0;
  return StochasticMatrix(std::move(m));
}

StochasticMatrix build_erasure(const Erasure& spec) {
  const Eigen::Index d = spec.target.dim();
  RealMatrix m(d, d);
  for (Eigen::Index x = 0; x < d; ++x) m.col(x) = spec.target.weights();
  return StochasticMatrix(std::move(m));
}

StochasticMatrix build_bistochastic(const Bistochastic& spec) {
  if (spec.dim < 1 || spec.lambda < 0.0 || spec.lambda > 1.0)
    throw std::invalid_argument("make_channel: bad bistochastic parameters");
  RealMatrix m = RealMatrix::Constant(spec.dim, spec.dim,
                                      spec.lambda / double(spec.dim));
  m.diagonal().array() += 1.0 - spec.lambda;
  return StochasticMatrix(std::move(m));
}

StochasticMatrix build_absorber(const Absorber& spec) {
  if (spec.dim < 1 || spec.absorbing.empty() || spec.rate < 0.0 ||
      spec.rate > 1.0)
    throw std::invalid_argument("make_channel: bad absorber parameters");
  std::vector<bool> absorbing(spec.dim, false);
  for (int a : spec.absorbing) {
    if (a < 0 || a >= spec.dim || absorbing[a])
      throw std::invalid_argument("make_channel: bad absorbing state");
    absorbing[a] = true;
  }
  RealMatrix m = RealMatrix::Zero(spec.dim, spec.dim);
  const double leak = spec.rate / double(spec.absorbing.size());
  for (Eigen::Index x = 0; x < spec.dim; ++x) {
    if (absorbing[x]) {
      m(x, x) = 1.0;
    } else {
      m(x, x) = 1.0 - spec.rate;
      for (int a : spec.absorbing) m(a, x) += leak;
    }
  }
  return StochasticMatrix(std::move(m));
}

StochasticMatrix build_block_symmetric(const BlockSymmetric& spec) {
  Eigen::Index d = 0;
  for (const auto& block : spec.blocks) d += Eigen::Index(block.size());
  if (d == 0 || spec.lambda < 0.0 || spec.lambda > 1.0)
    throw std::invalid_argument("make_channel: bad block parameters");
  std::vector<bool> seen(d, false);
  RealMatrix m = RealMatrix::Zero(d, d);
  for (const auto& block : spec.blocks) {
    for (int x : block) {
      if (x < 0 || x >= d || seen[x])
        throw std::invalid_argument("make_channel: blocks must partition");
      seen[x] = true;
    }
    const double mix = spec.lambda / double(block.size());
    for (int x : block) {
      m(x, x) += 1.0 - spec.lambda;
      for (int y : block) m(y, x) += mix;
    }
  }
  return StochasticMatrix(std::move(m));
}

StochasticMatrix build_random_positive(const RandomPositive& spec) {
  if (spec.out_dim < 1 || spec.in_dim < 1)
    throw std::invalid_argument("make_channel: bad random dimensions");
  Rng rng(spec.seed);
  RealMatrix m(spec.out_dim, spec.in_dim);
  for (Eigen::Index x = 0; x < spec.in_dim; ++x) {
    for (Eigen::Index y = 0; y < spec.out_dim; ++y)
      m(y, x) = rng.uniform(0.1, 1.0);
    m.col(x) /= m.col(x).sum();
  }
  return StochasticMatrix(std::move(m));
}

}  // namespace

StochasticMatrix make_channel(const ChannelSpec& spec) {
  return std::visit(
      [](const auto& s) -> StochasticMatrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Permutation>)
          return build_permutation(s);
        else if constexpr (std::is_same_v<T, Erasure>)
          return build_erasure(s);
        else if constexpr (std::is_same_v<T, Bistochastic>)
          return build_bistochastic(s);
        else if constexpr (std::is_same_v<T, Absorber>)
          return build_absorber(s);
        else if constexpr (std::is_same_v<T, BlockSymmetric>)
          return build_block_symmetric(s);
        else
          return build_random_positive(s);
      },
      spec);
}

}  // namespace bridgehack
