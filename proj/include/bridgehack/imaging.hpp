#ifndef BRIDGEHACK_IMAGING_HPP_
#define BRIDGEHACK_IMAGING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bridgehack/classical.hpp"
#include "bridgehack/quantum.hpp"

namespace bridgehack {

enum class SampleFlag { Ok, Singular, RankDeficient };

std::string to_string(SampleFlag f);

struct ClassicalImageSample {
  ProbabilityVector input;
  std::optional<ProbabilityVector> output;  // absent when flagged
  double entropy = 0.0;
  SampleFlag flag = SampleFlag::Ok;
};

struct QuantumImageSample {
  BlochVector input;
  std::optional<BlochVector> output;
  double purity = 0.0;
  SampleFlag flag = SampleFlag::Ok;
};

// n probability vectors with the requested Shannon entropy, found by
// bisection along seeded random rays from the uniform center. When a ray
// exits the simplex before reaching the target entropy, sampling continues
// on the face it hit, so low-entropy shells (down to the vertices at
// entropy 0) stay reachable.
std::vector<ProbabilityVector> entropy_shell_sample(Eigen::Index dim,
                                                    double entropy, int n,
                                                    std::uint64_t seed);

// Image of gamma -> bayes_inverse(e, gamma) q over an entropy shell.
// Per-sample singularities are flagged, not fatal.
std::vector<ClassicalImageSample> hack_image_classical(
    const StochasticMatrix& e, const ProbabilityVector& q, double entropy,
    int n, std::uint64_t seed);

// n qubit states of the given purity: Bloch radius sqrt(2 purity - 1),
// directions uniform on the sphere.
std::vector<DensityMatrix> purity_shell_sample(double purity, int n,
                                               std::uint64_t seed);

// Image of gamma -> petz_map(e, gamma, omega) over a purity shell.
std::vector<QuantumImageSample> hack_image_quantum(const KrausChannel& e,
                                                   const DensityMatrix& omega,
                                                   double purity, int n,
                                                   std::uint64_t seed);

// Equilateral-triangle embedding of the 2-simplex: vertices at (0,0), (1,0),
// (1/2, sqrt(3)/2).
std::pair<double, double> simplex_coords(const ProbabilityVector& p);

}  // namespace bridgehack

#endif  // BRIDGEHACK_IMAGING_HPP_
