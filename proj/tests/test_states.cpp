#include <doctest.h>

#include "test_helpers.hpp"

using namespace psw;

TEST_CASE("squeezed thermal construction and critical squeezing") {
  GaussianState vac = make_squeezed_thermal(1.0, 0.0, 0.0, {0.0, 0.0});
  CHECK(vac.critical_squeezing() == doctest::Approx(0.0));

  GaussianState thermal = make_squeezed_thermal(0.5, 0.0, 0.0, {0.0, 0.0});
  CHECK(thermal.critical_squeezing() == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));

  CHECK(make_squeezed_thermal(0.86, 0.0, 0.0, {0.0, 0.0}).critical_squeezing() ==
        doctest::Approx(0.075411444870).epsilon(1e-9));

  CHECK_THROWS_AS(make_squeezed_thermal(0.0, 0.0, 0.0, {0.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(make_squeezed_thermal(1.2, 0.0, 0.0, {0.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(make_squeezed_thermal(0.5, -0.1, 0.0, {0.0, 0.0}), std::domain_error);
}

TEST_CASE("density matrix invariants are enforced") {
  Eigen::MatrixXcd bad_trace = Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS((void)FockDensityMatrix(bad_trace), std::domain_error);

  Eigen::MatrixXcd non_hermitian = Eigen::MatrixXcd::Zero(2, 2);
  non_hermitian(0, 0) = 1.0;
  non_hermitian(0, 1) = 0.1;
  CHECK_THROWS_AS((void)FockDensityMatrix(non_hermitian), std::domain_error);

  Eigen::MatrixXcd indefinite = Eigen::MatrixXcd::Zero(2, 2);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS((void)FockDensityMatrix(indefinite), std::domain_error);
}

TEST_CASE("loss channel on Fock states") {
  const FockDensityMatrix one = fock_state(1, 4);

  SUBCASE("single photon splits binomially") {
    const double eta = 0.3;
    FockDensityMatrix lossy = apply_loss(one, eta);
    CHECK(lossy(0, 0).real() == doctest::Approx(1.0 - eta).epsilon(1e-12));
    CHECK(lossy(1, 1).real() == doctest::Approx(eta).epsilon(1e-12));
  }

  SUBCASE("unit transmittance is the identity channel") {
    FockDensityMatrix same = apply_loss(one, 1.0);
    CHECK((same.entries() - one.entries()).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("two photons at eta = 1/2") {
    FockDensityMatrix lossy = apply_loss(fock_state(2, 4), 0.5);
    CHECK(lossy(0, 0).real() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(lossy(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(lossy(2, 2).real() == doctest::Approx(0.25).epsilon(1e-12));
  }

  SUBCASE("out of range transmittance") {
    CHECK_THROWS_AS(apply_loss(one, -0.1), std::domain_error);
    CHECK_THROWS_AS(apply_loss(one, 1.1), std::domain_error);
  }
}

TEST_CASE("loss channel composes and scales the mean photon number") {
  const FockDensityMatrix rho = test::random_density_matrix(5, 17);
  const double eta1 = 0.7, eta2 = 0.4;
  FockDensityMatrix twice = apply_loss(apply_loss(rho, eta1), eta2);
  FockDensityMatrix once = apply_loss(rho, eta1 * eta2);
  CHECK((twice.entries() - once.entries()).cwiseAbs().maxCoeff() < 1e-10);

  CHECK(mean_photon_number(apply_loss(rho, eta1)) ==
        doctest::Approx(eta1 * mean_photon_number(rho)).epsilon(1e-10));
}

TEST_CASE("mean photon number") {
  CHECK(mean_photon_number(make_squeezed_thermal(1.0, 0.0, 0.0, {0.0, 0.0})) ==
        doctest::Approx(0.0));
  CHECK(mean_photon_number(fock_state(2, 5)) == doctest::Approx(2.0));

  const double r = 0.5;
  GaussianState squeezed = make_squeezed_thermal(1.0, r, 0.0, {0.0, 0.0});
  CHECK(mean_photon_number(squeezed) ==
        doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-12));

  // Independent check: second moment of the Wigner function by quadrature.
  const double by_quad = test::quad2d(
      [&](double q, double p) {
        return (q * q + p * p - 0.5) * wigner_gaussian(squeezed, {q, p});
      },
      7.0, 0.02);
  CHECK(by_quad == doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-6));

  GaussianState displaced = make_squeezed_thermal(0.8, 0.3, 0.7, {0.5, -0.25});
  const double by_quad2 = test::quad2d(
      [&](double q, double p) {
        return (q * q + p * p - 0.5) * wigner_gaussian(displaced, {q, p});
      },
      8.0, 0.02);
  CHECK(mean_photon_number(displaced) == doctest::Approx(by_quad2).epsilon(1e-6));
}

TEST_CASE("Gaussian purity invariance: pi * integral of W^2 equals purity") {
  for (double mu : {1.0, 0.6, 0.35}) {
    GaussianState g = make_squeezed_thermal(mu, 0.4, 0.0, {0.2, 0.1});
    const double integral = test::quad2d(
        [&](double q, double p) {
          const double w = wigner_gaussian(g, {q, p});
          return w * w;
        },
        7.0, 0.02);
    CHECK(pi * integral == doctest::Approx(mu).epsilon(1e-6));
  }
}

TEST_CASE("squeezed two-photon mixture") {
  SUBCASE("endpoints") {
    QuantumState vac = make_squeezed_two_photon_mixture(0.0, 0.0);
    CHECK(std::get<FockDensityMatrix>(vac)(0, 0).real() == doctest::Approx(1.0));
    QuantumState two = make_squeezed_two_photon_mixture(1.0, 0.0);
    CHECK(std::get<FockDensityMatrix>(two)(2, 2).real() == doctest::Approx(1.0));
  }

  SUBCASE("mean photon number closed form") {
    const double f = 0.3, r = 0.5;
    QuantumState state = make_squeezed_two_photon_mixture(f, r);
    const double expected = 2.0 * f * std::cosh(2.0 * r) + std::sinh(r) * std::sinh(r);
    CHECK(mean_photon_number(state) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(1.1973886982967682).epsilon(1e-12));
  }

  SUBCASE("matches the Fock-basis squeeze operator at high truncation") {
    const double f = 0.3, r = 0.5;
    const int dim = 48;
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(dim, dim);
    rho0(0, 0) = 1.0 - f;
    rho0(2, 2) = f;
    const Eigen::MatrixXcd s = test::squeeze_operator(r, dim);
    const Eigen::MatrixXcd squeezed = s * rho0 * s.adjoint();
    double energy = 0.0;
    for (int m = 0; m < dim; ++m) energy += m * squeezed(m, m).real();
    CHECK(energy == doctest::Approx(mean_photon_number(
                        make_squeezed_two_photon_mixture(f, r))).epsilon(1e-9));
  }
}

TEST_CASE("displacement operator is unitary on the bulk of the truncation") {
  const complexd alpha{0.6, -0.4};
  const int dim = 30;
  Eigen::MatrixXcd d = displacement_operator(alpha, dim);
  Eigen::MatrixXcd gram = d.adjoint() * d;
  // Truncation spoils the last rows; the low-index block must be identity.
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      CHECK(std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) < 1e-10);

  // D(alpha)|0> has Poissonian photon statistics.
  Eigen::VectorXcd coherent = d.col(0);
  for (int m = 0; m < 8; ++m) {
    const double expected = std::exp(-std::norm(alpha)) * std::pow(std::norm(alpha), m) /
                            std::tgamma(m + 1.0);
    CHECK(std::norm(coherent(m)) == doctest::Approx(expected).epsilon(1e-9));
  }
}
