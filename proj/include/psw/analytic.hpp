#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "psw/math.hpp"
#include "psw/quasiprob.hpp"
#include "psw/states.hpp"
#include "psw/witness.hpp"

namespace psw {

struct GaussianWitnessOptimum {
  double lambda_min = 0.0;
  std::optional<std::pair<complexd, complexd>> optimal_points;
  double kernel_a = 0.0, kernel_b = 0.0, kernel_c = 0.0;
};

/// Minimum lowest eigenvalue of the 2x2 kernel matrix built from
/// F(x, y) = exp(-a x^2 - b y^2) with Gaussian test kernel exponent c,
/// valid for a > c > b > 0:
///   lambda_min = -(1 - c/a) (c/a)^{c/(a-c)}, at x = +-sqrt(ln(a/c)/(a-c)).
inline GaussianWitnessOptimum appendix_a_lambda_min(double a, double b, double c) {
  if (!(a > c)) throw std::domain_error("appendix_a_lambda_min: requires a > c");
  if (!(c > b)) throw std::domain_error("appendix_a_lambda_min: requires c > b");
  if (!(b > 0.0)) throw std::domain_error("appendix_a_lambda_min: requires b > 0");
  const double log_ratio = std::log1p(-(a - c) / a);  // ln(c/a), stable for a ~ c
  const double lambda = -(-std::expm1(log_ratio)) * std::exp(c / (a - c) * log_ratio);
  const double x = std::sqrt(-log_ratio / (a - c));
  GaussianWitnessOptimum opt;
  opt.lambda_min = lambda;
  opt.optimal_points = {complexd(x, 0.0), complexd(-x, 0.0)};
  opt.kernel_a = a;
  opt.kernel_b = b;
  opt.kernel_c = c;
  return opt;
}

/// Closed-form minimum eigenvalue of M^{(s,2)} over all point pairs for a
/// Gaussian state; 0 for classical Gaussians (r <= r_c). The optimal points
/// are returned in lab coordinates (rotated by the state's phase, shifted by
/// its displacement).
inline GaussianWitnessOptimum gaussian_lambda_min(const GaussianState& state, double s) {
  check_ordering(s);
  const double rc = state.critical_squeezing();
  const double delta = state.squeezing - rc;
  auto [a, b] = detail::gaussian_exponents(state, s);
  const double c = 2.0 / (1.0 - s);
  GaussianWitnessOptimum opt;
  opt.kernel_a = a;
  opt.kernel_b = b;
  opt.kernel_c = c;
  if (delta <= 0.0) return opt;  // classical: lambda_min = 0, no optimum

  const double prefactor = 0.5 * (1.0 - s) * std::sqrt(a * b);
  if (delta < 1e-6) {
    // Removable singularity of the exponent at a -> c; first-order value.
    opt.lambda_min = -prefactor * (a - c) / a * std::exp(-1.0);
    const double x = std::sqrt(1.0 / a);
    const complexd rot = std::exp(complexd(0.0, state.phase));
    opt.optimal_points = {x * rot + state.displacement, -x * rot + state.displacement};
    return opt;
  }
  GaussianWitnessOptimum inner = appendix_a_lambda_min(a, b, c);
  opt.lambda_min = prefactor * inner.lambda_min;
  const double x = inner.optimal_points->first.real();
  const complexd rot = std::exp(complexd(0.0, state.phase));
  opt.optimal_points = {x * rot + state.displacement, -x * rot + state.displacement};
  return opt;
}

/// Quantum non-Gaussianity bound: the most negative lambda_min any Gaussian
/// state of mean photon number E can reach,
///   B(E) = -2 sqrt(E) / (sqrt(E+1) + sqrt(E))^{sqrt(1 + 1/E)}.
inline double qng_bound(double mean_photon) {
  if (mean_photon < 0.0) throw std::domain_error("qng_bound: mean photon number < 0");
  if (mean_photon < 1e-12) return 0.0;
  const double e = mean_photon;
  const double log_base = std::log(std::sqrt(e + 1.0) + std::sqrt(e));
  return -2.0 * std::sqrt(e) * std::exp(-std::sqrt(1.0 + 1.0 / e) * log_base);
}

struct QngReport {
  double lambda_min = 0.0;
  double mean_photon = 0.0;
  double bound = 0.0;
  double delta = 0.0;  // B(E) - lambda_min; positive flags non-Gaussianity
  bool quantum_non_gaussian = false;
  WitnessReport witness;
};

/// lambda_min (n = 2, s = 0) against the energy-constrained Gaussian bound.
inline QngReport certify_qng(const QuantumState& state, const SearchConfig& config = {}) {
  QngReport report;
  report.witness = optimize_points(state, 2, 0.0, config);
  report.lambda_min = report.witness.min_eigenvalue;
  report.mean_photon = mean_photon_number(state);
  report.bound = qng_bound(report.mean_photon);
  report.delta = report.bound - report.lambda_min;
  report.quantum_non_gaussian = report.delta > config.negativity_tol;
  return report;
}

/// Largest delta = B(E) - lambda_min over the squeezed two-photon mixture
/// family at fixed squeezing, f scanned over (0, 1/2) at the given step.
inline double two_photon_mixture_max_delta(double squeezing, double f_step = 1e-3,
                                           const SearchConfig& config = {}) {
  double best = -std::numeric_limits<double>::infinity();
  // Scan from f near 1/2 downward; detection onsets there first.
  for (double f = 0.5 - f_step; f > 0.0; f -= f_step) {
    QuantumState state = make_squeezed_two_photon_mixture(f, squeezing);
    QngReport rep = certify_qng(state, config);
    best = std::max(best, rep.delta);
    if (best > 0.0) break;
  }
  return best;
}

/// Smallest squeezing at which the two-photon mixture family becomes
/// detectably quantum non-Gaussian at some f < 1/2 (bisection on r).
inline double two_photon_mixture_qng_threshold(double r_lo = 0.1, double r_hi = 0.4,
                                               double r_tol = 2e-3, double f_step = 1e-3,
                                               const SearchConfig& config = {}) {
  auto detects = [&](double r) { return two_photon_mixture_max_delta(r, f_step, config) > 0.0; };
  if (detects(r_lo)) return r_lo;
  if (!detects(r_hi)) throw std::runtime_error("qng threshold: no detection below r_hi");
  while (r_hi - r_lo > r_tol) {
    const double mid = 0.5 * (r_lo + r_hi);
    (detects(mid) ? r_hi : r_lo) = mid;
  }
  return 0.5 * (r_lo + r_hi);
}

}  // namespace psw
