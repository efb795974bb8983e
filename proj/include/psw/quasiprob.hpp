#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <variant>

#include "psw/math.hpp"
#include "psw/states.hpp"

namespace psw {

inline void check_ordering(double s) {
  if (!(s < 1.0)) throw std::domain_error("ordering parameter must satisfy s < 1");
}

namespace detail {

/// Rotate/translate a phase-space point into the state's own frame
/// (squeezed axis along q).
inline complexd to_state_frame(const GaussianState& g, complexd point) {
  return (point - g.displacement) * std::exp(complexd(0.0, -g.phase));
}

/// Gaussian exponents of the s-parametrized distribution of an x-squeezed
/// thermal state: a = 2/(e^{-2(r-r_c)} - s), b = 2/(e^{2(r+r_c)} - s).
inline std::pair<double, double> gaussian_exponents(const GaussianState& g, double s) {
  check_ordering(s);
  const double rc = g.critical_squeezing();
  const double qa = std::exp(-2.0 * (g.squeezing - rc)) - s;
  const double pa = std::exp(2.0 * (g.squeezing + rc)) - s;
  if (!(qa > 0.0))
    throw std::domain_error(
        "s-parametrized Gaussian undefined: e^{-2(r-r_c)} - s <= 0 on the q axis");
  if (!(pa > 0.0))
    throw std::domain_error(
        "s-parametrized Gaussian undefined: e^{2(r+r_c)} - s <= 0 on the p axis");
  return {2.0 / qa, 2.0 / pa};
}

}  // namespace detail

/// s-parametrized quasiprobability of a Gaussian state, split as
/// mantissa * exp(log_scale) so downstream determinants can compare
/// magnitudes that underflow a plain double.
inline ScaledReal sparam_gaussian_scaled(const GaussianState& state, complexd point,
                                         double s) {
  auto [a, b] = detail::gaussian_exponents(state, s);
  const complexd z = detail::to_state_frame(state, point);
  const double q = z.real(), p = z.imag();
  return {std::sqrt(a * b) / pi, -a * q * q - b * p * p};
}

inline double sparam_gaussian(const GaussianState& state, complexd point, double s) {
  return sparam_gaussian_scaled(state, point, s).value();
}

inline double wigner_gaussian(const GaussianState& state, complexd point) {
  return sparam_gaussian(state, point, 0.0);
}

namespace detail {

/// Polynomial part of the s-ordered |j><k| kernel (j >= k), i.e. the kernel
/// with the factor (2/(pi(1-s))) exp(-2|alpha|^2/(1-s)) divided out.
/// The prefactor ((s+1)/(s-1))^k is a real number of sign (-1)^k for
/// s in (-1,1); it is evaluated as sign * magnitude, and near s = -1 the
/// product with the Laguerre polynomial is expanded term by term to avoid
/// the 0 * inf form at s = -1 exactly.
inline complexd fock_kernel_poly(int j, int k, complexd alpha, double s) {
  const double one_minus_s = 1.0 - s;
  const double t = (s + 1.0) / (s - 1.0);
  const double u = 4.0 * std::norm(alpha) / (one_minus_s * one_minus_s);
  const double log_coeff = 0.5 * (log_factorial(k) - log_factorial(j));
  const complexd displaced = std::pow(2.0 * alpha / one_minus_s, j - k);

  double poly;
  if (std::abs(t) >= 0.5) {
    // t^k L_k^{(j-k)}(4|alpha|^2/(1-s^2)); note -u/t = 4|alpha|^2/(1-s^2).
    const double sign = (t < 0.0 && (k % 2 == 1)) ? -1.0 : 1.0;
    poly = sign * std::exp(k * std::log(std::abs(t))) * laguerre(k, j - k, -u / t);
  } else {
    // sum_l C(j, k-l) t^{k-l} u^l / l!, finite and stable for small |t|.
    poly = 0.0;
    double u_pow = 1.0;  // u^l / l!
    for (int l = 0; l <= k; ++l) {
      poly += binomial(j, k - l) * std::pow(t, k - l) * u_pow;
      u_pow *= u / (l + 1.0);
    }
  }
  return std::exp(log_coeff) * displaced * poly;
}

}  // namespace detail

/// s-ordered phase-space kernel W_{|j><k|}(alpha; s); at s = 0 this is the
/// Wigner function of the operator |j><k|.
inline complexd fock_kernel(int j, int k, complexd alpha, double s) {
  if (j < 0 || k < 0) throw std::invalid_argument("fock_kernel: negative index");
  check_ordering(s);
  if (j < k) return std::conj(fock_kernel(k, j, alpha, s));
  const double one_minus_s = 1.0 - s;
  const double scale = (2.0 / (pi * one_minus_s)) *
                       std::exp(-2.0 * std::norm(alpha) / one_minus_s);
  // W_{|j><k|} = tr[|j><k| T(alpha;s)]/pi-normalization = <k|T|j>, the
  // conjugate of the j >= k matrix element.
  return scale * std::conj(detail::fock_kernel_poly(j, k, alpha, s));
}

namespace detail {

inline ScaledReal fock_quasiprob_scaled(const FockDensityMatrix& state, complexd alpha,
                                        double s) {
  check_ordering(s);
  const double one_minus_s = 1.0 - s;
  complexd sum{0.0, 0.0};
  for (int j = 0; j < state.dim(); ++j)
    for (int k = 0; k < state.dim(); ++k) {
      if (state(j, k) == complexd(0.0, 0.0)) continue;
      // rho_jk multiplies <k|T|j>; fock_kernel_poly gives <j|T|k> for j >= k
      // and the element for j < k follows by Hermiticity of T.
      sum += state(j, k) * (j >= k ? std::conj(fock_kernel_poly(j, k, alpha, s))
                                   : fock_kernel_poly(k, j, alpha, s));
    }
  sum *= 2.0 / (pi * one_minus_s);
  if (std::abs(sum.imag()) > 1e-10 * std::max(1.0, std::abs(sum.real())))
    throw std::domain_error("quasiprob: non-negligible imaginary part (non-Hermitian input?)");
  return {sum.real(), -2.0 * std::norm(alpha) / one_minus_s};
}

}  // namespace detail

/// Scaled evaluation, used where products of W values at distant points must
/// keep their sign after the shared exponential factors underflow.
inline ScaledReal quasiprob_scaled(const QuantumState& state, complexd point, double s) {
  struct Visitor {
    complexd point;
    double s;
    ScaledReal operator()(const GaussianState& g) const {
      return sparam_gaussian_scaled(g, point, s);
    }
    ScaledReal operator()(const FockDensityMatrix& f) const {
      return detail::fock_quasiprob_scaled(f, point, s);
    }
    ScaledReal operator()(const ScaledFockState& sf) const {
      if (s != 0.0)
        throw std::domain_error(
            "quasiprob: coordinate-scaled states support only s = 0");
      const complexd scaled(std::exp(sf.scale) * point.real(),
                            std::exp(-sf.scale) * point.imag());
      return detail::fock_quasiprob_scaled(sf.base, scaled, 0.0);
    }
  };
  return std::visit(Visitor{point, s}, state);
}

/// s-parametrized quasiprobability W_rho(alpha; s).
inline double quasiprob(const QuantumState& state, complexd point, double s) {
  return quasiprob_scaled(state, point, s).value();
}

inline double wigner(const QuantumState& state, complexd point) {
  return quasiprob(state, point, 0.0);
}

}  // namespace psw
