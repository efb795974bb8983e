#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>

#include "psw/psw.hpp"

namespace psw::test {

/// Matrix exponential by scaling-and-squaring with a Taylor series.
/// Test oracle only; fine for the moderate norms used here.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m) {
  int squarings = 0;
  double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  const Eigen::MatrixXcd scaled = m / std::pow(2.0, squarings);
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  Eigen::MatrixXcd term = result;
  for (int k = 1; k <= 24; ++k) {
    term = term * scaled / double(k);
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

/// Fock-basis squeeze operator S(r) = exp((r/2)(a^dag^2 - a^2)), truncated.
inline Eigen::MatrixXcd squeeze_operator(double r, int dim) {
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n + 2 < dim; ++n) {
    const double c = std::sqrt(double(n + 1) * double(n + 2));
    gen(n + 2, n) += 0.5 * r * c;   // a^dag^2 part
    gen(n, n + 2) -= 0.5 * r * c;   // a^2 part
  }
  return expm(gen);
}

/// Midpoint-rule quadrature of f over [-L, L]^2 with step h.
inline double quad2d(const std::function<double(double, double)>& f, double box,
                     double step) {
  double acc = 0.0;
  for (double q = -box + 0.5 * step; q < box; q += step)
    for (double p = -box + 0.5 * step; p < box; p += step) acc += f(q, p);
  return acc * step * step;
}

/// Laguerre polynomial by the factorial series; oracle for small degree.
inline double laguerre_series(int n, int m, double x) {
  double acc = 0.0;
  for (int l = 0; l <= n; ++l) {
    double term = std::exp(psw::log_factorial(n + m) - psw::log_factorial(n - l) -
                           psw::log_factorial(m + l) - psw::log_factorial(l));
    acc += term * std::pow(-x, l);
  }
  return acc;
}

/// Smallest root of the characteristic polynomial of a Hermitian matrix,
/// located by bisection on det(M - t I).
inline double char_poly_min_eigenvalue(const Eigen::MatrixXcd& m) {
  const int n = int(m.rows());
  auto det_at = [&](double t) {
    Eigen::MatrixXcd shifted = m - t * Eigen::MatrixXcd::Identity(n, n);
    return shifted.determinant().real();
  };
  // Bracket below the smallest eigenvalue via the Gershgorin bound.
  double lo = 0.0;
  for (int i = 0; i < n; ++i) {
    double radius = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) radius += std::abs(m(i, j));
    lo = std::min(lo, m(i, i).real() - radius);
  }
  lo -= 1.0;
  // The sign of det(M - tI) for t below every eigenvalue is fixed; walk up
  // until the first sign change.
  const double sign_lo = det_at(lo) >= 0.0 ? 1.0 : -1.0;
  double hi = lo;
  double step = 0.25;
  while (det_at(hi) * sign_lo > 0.0) hi += step;
  double lo2 = hi - step;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo2 + hi);
    if (det_at(mid) * sign_lo > 0.0)
      lo2 = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo2 + hi);
}

/// Deterministic random density matrix on dim Fock levels.
inline psw::FockDensityMatrix random_density_matrix(int dim, std::uint64_t seed) {
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      g(i, j) = psw::complexd(psw::counter_uniform(seed, 2 * (i * dim + j)) - 0.5,
                              psw::counter_uniform(seed, 2 * (i * dim + j) + 1) - 0.5);
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return psw::FockDensityMatrix(rho);
}

}  // namespace psw::test
