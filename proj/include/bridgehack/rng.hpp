#ifndef BRIDGEHACK_RNG_HPP_
#define BRIDGEHACK_RNG_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace bridgehack {

// Seeded random source. mt19937_64 output is fixed by the standard; the
// variate mappings below are written out explicitly instead of going through
// std distributions, whose streams differ between standard libraries. Golden
// files depend on this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53 bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1], safe as a log() argument.
  double uniform_pos() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; one fresh pair per call, second value discarded.
  double gaussian() {
    double u = uniform_pos();
    double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  }

  std::complex<double> complex_gaussian() {
    double u = uniform_pos();
    double v = uniform();
    double r = std::sqrt(-std::log(u));
    return {r * std::cos(2.0 * M_PI * v), r * std::sin(2.0 * M_PI * v)};
  }

  Eigen::VectorXd gaussian_vector(Eigen::Index n) {
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = gaussian();
    return out;
  }

  // Dirichlet(1, ..., 1): normalized iid exponentials.
  Eigen::VectorXd dirichlet(Eigen::Index n) {
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = -std::log(uniform_pos());
    out /= out.sum();
    return out;
  }

  Eigen::MatrixXcd ginibre(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = complex_gaussian();
    return g;
  }

  // Uniform on S^2.
  Eigen::Vector3d unit_sphere() {
    while (true) {
      Eigen::Vector3d v{gaussian(), gaussian(), gaussian()};
      double n = v.norm();
      if (n > 1e-12) return v / n;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace bridgehack

#endif  // BRIDGEHACK_RNG_HPP_
