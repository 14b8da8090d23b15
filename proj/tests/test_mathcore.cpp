#include <doctest.h>

#include "bridgehack/mathcore.hpp"
#include "bridgehack/rng.hpp"
#include "testutil.hpp"

using namespace bridgehack;

TEST_CASE("hadamard product basics") {
  RealVector a(3), ones(3), b(2), c(2);
  a << 1, 2, 3;
  ones << 1, 1, 1;
  b << 0.5, 0.5;
  c << 0.2, 0.8;

  CHECK((hadamard_product(a, ones) - a).norm() == 0.0);
  RealVector expected(2);
  expected << 0.1, 0.4;
  CHECK((hadamard_product(b, c) - expected).norm() < 1e-16);
  CHECK_THROWS_AS(hadamard_product(a, b), std::invalid_argument);
}

TEST_CASE("hadamard product equals diagonal scaling") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    RealVector a = rng.gaussian_vector(5);
    RealVector b = rng.gaussian_vector(5);
    RealVector via_diag = a.asDiagonal() * b;
    CHECK((hadamard_product(a, b) - via_diag).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("hadamard divide inverts product and handles 0/0") {
  RealVector num(2), den(2);
  num << 0.1, 0.4;
  den << 0.2, 0.8;
  RealVector expected(2);
  expected << 0.5, 0.5;
  CHECK((hadamard_divide(num, den) - expected).cwiseAbs().maxCoeff() < 1e-16);

  RealVector zz_num(2), zz_den(2);
  zz_num << 0.0, 0.3;
  zz_den << 0.0, 0.7;
  RealVector quotient = hadamard_divide(zz_num, zz_den);
  CHECK(quotient[0] == 0.0);
  CHECK(quotient[1] == doctest::Approx(3.0 / 7.0).epsilon(1e-15));

  RealVector bad_num(2), bad_den(2);
  bad_num << 0.3, 0.7;
  bad_den << 0.0, 1.0;
  CHECK_THROWS_AS(hadamard_divide(bad_num, bad_den), DivisionSingularity);
}

TEST_CASE("hadamard divide round trip where divisor is nonzero") {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    RealVector a = rng.gaussian_vector(6);
    RealVector b(6);
    for (int i = 0; i < 6; ++i) b[i] = rng.uniform(0.3, 2.0);
    RealVector back = hadamard_product(hadamard_divide(a, b), b);
    CHECK((back - a).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("herm_eig spectra and reconstruction") {
  SpectralDecomposition id2 = herm_eig(ComplexMatrix::Identity(2, 2));
  CHECK(id2.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(id2.eigenvalues[1] == doctest::Approx(1.0));

  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 4.0;
  diag(1, 1) = 9.0;
  SpectralDecomposition d = herm_eig(diag);
  CHECK(d.eigenvalues[0] == doctest::Approx(9.0));
  CHECK(d.eigenvalues[1] == doctest::Approx(4.0));

  Rng rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    ComplexMatrix g = rng.ginibre(4, 4);
    ComplexMatrix h = hermitize(g);
    SpectralDecomposition eig = herm_eig(h);
    CHECK((eig.reconstruct() - h).norm() / h.norm() < 1e-12);
    CHECK((eig.eigenvectors.adjoint() * eig.eigenvectors -
           ComplexMatrix::Identity(4, 4))
              .norm() < 1e-12);
    for (Eigen::Index i = 0; i + 1 < eig.eigenvalues.size(); ++i)
      CHECK(eig.eigenvalues[i] >= eig.eigenvalues[i + 1]);
  }

  ComplexMatrix skew(2, 2);
  skew << 1.0, 2.0, 3.0, 1.0;
  CHECK_THROWS_AS(herm_eig(skew), NotHermitian);
}

TEST_CASE("matrix sqrt and inverse sqrt") {
  CHECK((matrix_sqrt(ComplexMatrix::Identity(3, 3)) -
         ComplexMatrix::Identity(3, 3))
            .norm() < 1e-14);

  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 4.0;
  diag(1, 1) = 9.0;
  ComplexMatrix root = matrix_sqrt(diag);
  CHECK(std::abs(root(0, 0).real() - 2.0) < 1e-14);
  CHECK(std::abs(root(1, 1).real() - 3.0) < 1e-14);

  Rng rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    ComplexMatrix g = rng.ginibre(3, 3);
    ComplexMatrix psd = g * g.adjoint();
    ComplexMatrix r = matrix_sqrt(psd);
    CHECK((r * r - psd).norm() / psd.norm() < 1e-10);

    ComplexMatrix pd = psd + 0.1 * ComplexMatrix::Identity(3, 3);
    CHECK((matrix_inv_sqrt(pd) * matrix_sqrt(pd) -
           ComplexMatrix::Identity(3, 3))
              .norm() < 1e-10);
  }

  ComplexMatrix singular = ComplexMatrix::Zero(2, 2);
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(matrix_inv_sqrt(singular), RankDeficient);
}

TEST_CASE("solve_sandwich satisfies M N M = L") {
  Rng rng(51);
  ComplexMatrix g = rng.ginibre(3, 3);
  ComplexMatrix l = g * g.adjoint() + 0.2 * ComplexMatrix::Identity(3, 3);

  SUBCASE("n = identity gives sqrt(l)") {
    ComplexMatrix m = solve_sandwich(ComplexMatrix::Identity(3, 3), l);
    CHECK((m - matrix_sqrt(l)).norm() < 1e-10);
  }
  SUBCASE("l = n gives identity") {
    ComplexMatrix m = solve_sandwich(l, l);
    CHECK((m - ComplexMatrix::Identity(3, 3)).norm() < 1e-10);
  }
  SUBCASE("random PD pair, multiply back") {
    for (int trial = 0; trial < 5; ++trial) {
      ComplexMatrix gn = rng.ginibre(3, 3);
      ComplexMatrix n = gn * gn.adjoint() + 0.1 * ComplexMatrix::Identity(3, 3);
      ComplexMatrix m = solve_sandwich(n, l);
      CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(herm_eig(m).eigenvalues.minCoeff() > -1e-10);
      CHECK((m * n * m - l).norm() / l.norm() < 1e-9);
    }
  }
  SUBCASE("singular input is rejected") {
    ComplexMatrix singular = ComplexMatrix::Zero(3, 3);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(solve_sandwich(singular, l), RankDeficient);
  }
}

TEST_CASE("entropy and purity") {
  RealVector uniform = RealVector::Constant(3, 1.0 / 3.0);
  CHECK(shannon_entropy(uniform) == doctest::Approx(std::log(3.0)).epsilon(1e-14));

  RealVector pure = RealVector::Zero(4);
  pure[2] = 1.0;
  CHECK(shannon_entropy(pure) == 0.0);

  RealVector half(3);
  half << 0.5, 0.5, 0.0;
  CHECK(shannon_entropy(half) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  // permutation invariance
  RealVector perm(3);
  perm << 0.0, 0.5, 0.5;
  CHECK(shannon_entropy(half) == shannon_entropy(perm));

  ComplexMatrix pure_state = ComplexMatrix::Zero(2, 2);
  pure_state(0, 0) = 1.0;
  CHECK(purity(pure_state) == doctest::Approx(1.0));
  CHECK(purity(ComplexMatrix::Identity(4, 4) / 4.0) ==
        doctest::Approx(0.25).epsilon(1e-14));

  Rng rng(61);
  ComplexMatrix g = rng.ginibre(3, 3);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  const double p = purity(rho);
  CHECK(p >= 1.0 / 3.0 - 1e-12);
  CHECK(p <= 1.0 + 1e-12);
}
