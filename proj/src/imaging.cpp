#include "bridgehack/imaging.hpp"

#include <algorithm>
#include <cmath>

#include "bridgehack/rng.hpp"

namespace bridgehack {

std::string to_string(SampleFlag f) {
  switch (f) {
    case SampleFlag::Ok: return "ok";
    case SampleFlag::Singular: return "singular";
    case SampleFlag::RankDeficient: return "rank_deficient";
  }
  return "unknown";
}

namespace {

constexpr double kEntropyBisectTol = 1e-12;

// Entropy is strictly decreasing along a ray out of the uniform center
// (h'(0) = 0, h'' < 0), so bisection on the segment is exact. `active` holds
// the support indices; `dir` is a sum-zero direction over them.
RealVector sample_on_support(const std::vector<Eigen::Index>& active,
                             RealVector dir, double target, Eigen::Index dim,
                             Rng& rng) {
  const Eigen::Index k = Eigen::Index(active.size());
  RealVector point = RealVector::Zero(dim);
  if (k == 1) {
    point[active[0]] = 1.0;
    return point;
  }
  // Entropy is flat to second order at the center, so bisection cannot pin
  // the unique maximizer; hand it back exactly.
  if (target >= std::log(double(k)) - kEntropyBisectTol) {
    for (Eigen::Index i = 0; i < k; ++i) point[active[i]] = 1.0 / double(k);
    return point;
  }

  // Project onto the sum-zero subspace and normalize; degenerate directions
  // get redrawn from the stream.
  while (true) {
    dir.array() -= dir.mean();
    const double norm = dir.norm();
    if (norm > 1e-12) {
      dir /= norm;
      break;
    }
    for (Eigen::Index i = 0; i < k; ++i) dir[i] = rng.gaussian();
  }

  const double center = 1.0 / double(k);
  double t_max = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < k; ++i)
    if (dir[i] < 0.0) t_max = std::min(t_max, -center / dir[i]);

  auto entropy_at = [&](double t) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double w = std::max(0.0, center + t * dir[i]);
      if (w > 0.0) h -= w * std::log(w);
    }
    return h;
  };

  const double boundary_entropy = entropy_at(t_max);
  if (boundary_entropy > target + kEntropyBisectTol) {
    // The ray leaves the simplex above the target shell; descend into the
    // face that was hit and keep going there. The limiting coordinate always
    // drops out, so the support strictly shrinks.
    Eigen::Index limiting = 0;
    double w_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < k; ++i) {
      const double w = center + t_max * dir[i];
      if (w < w_min) {
        w_min = w;
        limiting = i;
      }
    }
    std::vector<Eigen::Index> next_active;
    RealVector next_dir(k);
    Eigen::Index m = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double w = center + t_max * dir[i];
      if (i == limiting || w <= 1e-12) continue;
      next_active.push_back(active[i]);
      next_dir[m++] = dir[i];
    }
    next_dir.conservativeResize(m);
    return sample_on_support(next_active, next_dir, target, dim, rng);
  }

  double lo = 0.0, hi = t_max;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (entropy_at(mid) > target)
      lo = mid;
    else
      hi = mid;
    if (std::abs(entropy_at(0.5 * (lo + hi)) - target) < kEntropyBisectTol)
      break;
  }
  const double t = 0.5 * (lo + hi);
  for (Eigen::Index i = 0; i < k; ++i)
    point[active[i]] = std::max(0.0, center + t * dir[i]);
  point /= point.sum();
  return point;
}

}  // namespace

std::vector<ProbabilityVector> entropy_shell_sample(Eigen::Index dim,
                                                    double entropy, int n,
                                                    std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("entropy_shell_sample: dim >= 2");
  const double h_max = std::log(double(dim));
  if (entropy < 0.0 || entropy > h_max + 1e-12)
    throw std::invalid_argument("entropy_shell_sample: entropy out of range");
  if (n < 0) throw std::invalid_argument("entropy_shell_sample: n >= 0");

  Rng rng(seed);
  std::vector<ProbabilityVector> out;
  out.reserve(n);
  std::vector<Eigen::Index> all(dim);
  for (Eigen::Index i = 0; i < dim; ++i) all[i] = i;
  for (int i = 0; i < n; ++i) {
    RealVector dir = rng.gaussian_vector(dim);
    out.emplace_back(
        sample_on_support(all, std::move(dir), entropy, dim, rng));
  }
  return out;
}

std::vector<ClassicalImageSample> hack_image_classical(
    const StochasticMatrix& e, const ProbabilityVector& q, double entropy,
    int n, std::uint64_t seed) {
  std::vector<ProbabilityVector> shell =
      entropy_shell_sample(e.in_dim(), entropy, n, seed);
  std::vector<ClassicalImageSample> out;
  out.reserve(shell.size());
  for (auto& gamma : shell) {
    ClassicalImageSample sample{gamma, std::nullopt, shannon_entropy(
                                    gamma.weights()), SampleFlag::Ok};
    try {
      const StochasticMatrix ehat = bayes_inverse(e, gamma);
      sample.output = ProbabilityVector(ehat.entries() * q.weights());
    } catch (const Singular&) {
      sample.flag = SampleFlag::Singular;
    }
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<DensityMatrix> purity_shell_sample(double purity, int n,
                                               std::uint64_t seed) {
  if (purity < 0.5 - 1e-12 || purity > 1.0 + 1e-12)
    throw std::invalid_argument("purity_shell_sample: purity outside [1/2, 1]");
  if (n < 0) throw std::invalid_argument("purity_shell_sample: n >= 0");
  const double radius = std::sqrt(std::max(0.0, 2.0 * purity - 1.0));
  Rng rng(seed);
  std::vector<DensityMatrix> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d dir = rng.unit_sphere();
    out.push_back(DensityMatrix::from_bloch(
        {radius * dir[0], radius * dir[1], radius * dir[2]}));
  }
  return out;
}

std::vector<QuantumImageSample> hack_image_quantum(const KrausChannel& e,
                                                   const DensityMatrix& omega,
                                                   double purity, int n,
                                                   std::uint64_t seed) {
  if (e.in_dim() != 2 || e.out_dim() != 2)
    throw std::invalid_argument("hack_image_quantum: qubit channels only");
  std::vector<DensityMatrix> shell = purity_shell_sample(purity, n, seed);
  std::vector<QuantumImageSample> out;
  out.reserve(shell.size());
  for (const auto& gamma : shell) {
    QuantumImageSample sample{gamma.bloch_vector(), std::nullopt,
                              bridgehack::purity(gamma.matrix()),
                              SampleFlag::Ok};
    try {
      sample.output = petz_map(e, gamma, omega).bloch_vector();
    } catch (const RankDeficient&) {
      sample.flag = SampleFlag::RankDeficient;
    }
    out.push_back(std::move(sample));
  }
  return out;
}

std::pair<double, double> simplex_coords(const ProbabilityVector& p) {
  if (p.dim() != 3)
    throw std::invalid_argument("simplex_coords: trit distributions only");
  // Vertices: delta_0 -> (0, 0), delta_1 -> (1, 0), delta_2 -> (1/2, sqrt3/2).
  const double x = p[1] + 0.5 * p[2];
  const double y = 0.5 * std::sqrt(3.0) * p[2];
  return {x, y};
}

}  // namespace bridgehack
