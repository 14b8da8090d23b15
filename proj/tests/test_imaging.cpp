#include <doctest.h>

#include "bridgehack/imaging.hpp"
#include "testutil.hpp"

using namespace bridgehack;
using namespace testutil;

TEST_CASE("entropy shell sampling hits the target entropy") {
  const double target = std::log(2.0);
  auto shell = entropy_shell_sample(3, target, 50, 5);
  REQUIRE(shell.size() == 50);
  for (const auto& p : shell)
    CHECK(std::abs(shannon_entropy(p.weights()) - target) < 1e-9);
}

TEST_CASE("entropy shell extremes: uniform center and vertices") {
  for (const auto& p : entropy_shell_sample(3, std::log(3.0), 10, 6))
    CHECK(l1_diff(p.weights(), ProbabilityVector::uniform(3).weights()) <
          1e-7);

  for (const auto& p : entropy_shell_sample(3, 0.0, 25, 7)) {
    CHECK(shannon_entropy(p.weights()) < 1e-9);
    CHECK(p.weights().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(entropy_shell_sample(3, std::log(3.0) + 0.1, 1, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(entropy_shell_sample(3, -0.1, 1, 8), std::invalid_argument);
}

TEST_CASE("entropy shell sampling is reproducible bit for bit") {
  auto a = entropy_shell_sample(4, 0.9, 20, 99);
  auto b = entropy_shell_sample(4, 0.9, 20, 99);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK((a[i].weights() - b[i].weights()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("classical hack image of an erasure is the shell itself") {
  StochasticMatrix e = make_channel(Erasure{ProbabilityVector::uniform(3)});
  ProbabilityVector q = random_dirichlet(3, 11);
  auto image = hack_image_classical(e, q, 0.7, 30, 12);
  for (const auto& sample : image) {
    REQUIRE(sample.flag == SampleFlag::Ok);
    CHECK(l1_diff(sample.output->weights(), sample.input.weights()) < 1e-12);
  }
}

TEST_CASE("classical hack image at entropy 0 covers the vertices") {
  StochasticMatrix e = make_channel(RandomPositive{3, 3, 13});
  ProbabilityVector q = random_dirichlet(3, 14);
  auto image = hack_image_classical(e, q, 0.0, 60, 15);
  std::vector<bool> vertex_seen(3, false);
  for (const auto& sample : image) {
    REQUIRE(sample.flag == SampleFlag::Ok);
    for (int v = 0; v < 3; ++v)
      if (l1_diff(sample.output->weights(),
                  ProbabilityVector::delta(3, v).weights()) < 1e-9)
        vertex_seen[v] = true;
  }
  CHECK(vertex_seen[0]);
  CHECK(vertex_seen[1]);
  CHECK(vertex_seen[2]);
}

TEST_CASE("classical hack image of a permutation is prior independent") {
  StochasticMatrix e = make_channel(Permutation{{1, 2, 0}});
  ProbabilityVector q = random_dirichlet(3, 21);
  RealVector expected = e.entries().transpose() * q.weights();
  auto image = hack_image_classical(e, q, 0.8, 20, 22);
  for (const auto& sample : image) {
    REQUIRE(sample.flag == SampleFlag::Ok);
    CHECK(l1_diff(sample.output->weights(), expected) < 1e-12);
  }
}

TEST_CASE("purity shell radii") {
  for (const auto& rho : purity_shell_sample(1.0, 10, 31)) {
    BlochVector r = rho.bloch_vector();
    CHECK(r.norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
  for (const auto& rho : purity_shell_sample(0.5, 5, 32)) {
    CHECK(rho.bloch_vector().norm() < 1e-12);
  }
  for (const auto& rho : purity_shell_sample(0.75, 5, 33)) {
    CHECK(rho.bloch_vector().norm() ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(purity(rho.matrix()) == doctest::Approx(0.75).epsilon(1e-12));
  }
  CHECK_THROWS_AS(purity_shell_sample(0.4, 1, 34), std::invalid_argument);
  CHECK_THROWS_AS(purity_shell_sample(1.1, 1, 34), std::invalid_argument);
}

TEST_CASE("quantum hack image: boundary identity on improving channels") {
  KrausChannel dep = make_qubit_channel(Depolarising{0.5});
  DensityMatrix omega = random_density(2, 41);
  auto image = hack_image_quantum(dep, omega, 1.0, 40, 42);
  for (const auto& sample : image) {
    REQUIRE(sample.flag == SampleFlag::Ok);
    CHECK(std::abs(sample.output->x - sample.input.x) < 1e-9);
    CHECK(std::abs(sample.output->y - sample.input.y) < 1e-9);
    CHECK(std::abs(sample.output->z - sample.input.z) < 1e-9);
  }
}

TEST_CASE("quantum hack image collapses to omega-prime at zero purity") {
  const double lambda = 0.65;
  KrausChannel dep = make_qubit_channel(Depolarising{lambda});
  const double s = 0.58;
  DensityMatrix omega = DensityMatrix::from_bloch({0, 0, s});
  auto image = hack_image_quantum(dep, omega, 0.5, 15, 43);
  for (const auto& sample : image) {
    REQUIRE(sample.flag == SampleFlag::Ok);
    CHECK(std::abs(sample.output->x) < 1e-10);
    CHECK(std::abs(sample.output->y) < 1e-10);
    CHECK(sample.output->z == doctest::Approx((1 - lambda) * s).epsilon(1e-9));
  }
}

TEST_CASE("quantum hack image of the dephasing channel matches the diagonal-sandwich oracle") {
  // For Z-diagonal Kraus operators the Petz map factors through diagonal
  // scalings: sqrt(gamma) D Z[omega] D sqrt(gamma), D = (Z[gamma])^{-1/2}.
  KrausChannel z = make_qubit_channel(Dephasing{1.0});
  DensityMatrix omega = random_density(2, 51);
  auto image = hack_image_quantum(z, omega, 0.8, 20, 52);
  const ComplexMatrix z_omega = z.apply(omega.matrix());
  for (const auto& sample : image) {
    REQUIRE(sample.flag == SampleFlag::Ok);
    DensityMatrix gamma = DensityMatrix::from_bloch(sample.input);
    ComplexMatrix d = matrix_inv_sqrt(z.apply(gamma.matrix()));
    ComplexMatrix g_h = matrix_sqrt(gamma.matrix());
    ComplexMatrix expected = g_h * d * z_omega * d * g_h;
    BlochVector eb = DensityMatrix(hermitize(expected)).bloch_vector();
    CHECK(std::abs(sample.output->x - eb.x) < 1e-10);
    CHECK(std::abs(sample.output->y - eb.y) < 1e-10);
    CHECK(std::abs(sample.output->z - eb.z) < 1e-10);
  }
}

TEST_CASE("image outputs stay inside the state space") {
  KrausChannel ad = make_qubit_channel(AmplitudeDamping{0.4});
  DensityMatrix omega = random_density(2, 61);
  for (double purity_level : {0.6, 0.9, 1.0}) {
    auto image = hack_image_quantum(ad, omega, purity_level, 25, 62);
    for (const auto& sample : image) {
      if (sample.flag != SampleFlag::Ok) continue;
      CHECK(sample.output->norm() <= 1.0 + 1e-9);
    }
  }

  StochasticMatrix e = make_channel(Absorber{3, {2}, 0.5});
  ProbabilityVector q = random_dirichlet(3, 63);
  for (const auto& sample : hack_image_classical(e, q, 0.4, 25, 64)) {
    if (sample.flag != SampleFlag::Ok) continue;
    CHECK(sample.output->weights().minCoeff() >= 0.0);
    CHECK(std::abs(sample.output->weights().sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("simplex planar embedding") {
  auto [x0, y0] = simplex_coords(ProbabilityVector::delta(3, 0));
  CHECK(x0 == 0.0);
  CHECK(y0 == 0.0);

  auto [cx, cy] = simplex_coords(ProbabilityVector::uniform(3));
  CHECK(cx == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cy == doctest::Approx(std::sqrt(3.0) / 6.0).epsilon(1e-15));

  RealVector edge(3);
  edge << 0.5, 0.5, 0.0;
  auto [ex, ey] = simplex_coords(ProbabilityVector(edge));
  CHECK(ex == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ey == 0.0);

  CHECK_THROWS_AS(simplex_coords(ProbabilityVector::uniform(4)),
                  std::invalid_argument);
}

TEST_CASE("entropy shells work on bit spaces") {
  for (const auto& p : entropy_shell_sample(2, 0.3, 20, 71))
    CHECK(std::abs(shannon_entropy(p.weights()) - 0.3) < 1e-9);
}
