#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "psw/math.hpp"
#include "psw/quasiprob.hpp"
#include "psw/states.hpp"
#include "psw/witness.hpp"

namespace psw {

/// An array of N on-off detectors, each with efficiency eta.
struct ArraySpec {
  int detectors = 1;
  double efficiency = 1.0;
};

inline void validate(const ArraySpec& spec) {
  if (spec.detectors < 1) throw std::domain_error("ArraySpec: need at least one detector");
  if (!(spec.efficiency > 0.0) || spec.efficiency > 1.0)
    throw std::domain_error("ArraySpec: efficiency must be in (0,1]");
}

/// Probability vector for observing 0..N clicks on the displaced state.
struct ClickDistribution {
  std::vector<double> probs;
  ArraySpec spec;
  complexd displacement{0.0, 0.0};
};

/// Lower-triangular map between click probabilities and the quasiprobability
/// values W_rho(alpha; S_m), with orderings S_m = 1 - 2N/((N-m) eta).
struct TriangularMap {
  Eigen::MatrixXd entries;        // (N+1) x (N+1)
  std::vector<double> orderings;  // S_0 .. S_{N-1}
};

/// T_km = C(N,k) C(k,m) (-1)^{k-m} N pi / ((N-m) eta) for m <= k, with
/// T_NN = 1; the last row otherwise follows the same binomial expression.
inline TriangularMap build_triangular_map(const ArraySpec& spec) {
  validate(spec);
  const int n = spec.detectors;
  const double eta = spec.efficiency;
  TriangularMap map;
  map.entries = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k)
    for (int m = 0; m <= k; ++m) {
      if (k == n && m == n) {
        map.entries(k, m) = 1.0;
      } else {
        const double sign = ((k - m) % 2 == 0) ? 1.0 : -1.0;
        map.entries(k, m) =
            binomial(n, k) * binomial(k, m) * sign * n * pi / ((n - m) * eta);
      }
    }
  map.orderings.resize(n);
  for (int m = 0; m < n; ++m) map.orderings[m] = 1.0 - 2.0 * n / ((n - m) * eta);
  return map;
}

namespace detail {

/// Fock route: p_k of the displaced matrix via the normally-ordered
/// eigenvalue rule :e^{-x nhat}: |m> -> (1-x)^m |m>, binomially expanded.
/// Alternating signs are summed in long double (compensation for N ~ 10).
inline std::vector<double> clicks_from_fock(const FockDensityMatrix& state,
                                            complexd displacement, const ArraySpec& spec) {
  const int n = spec.detectors;
  const double eta = spec.efficiency;
  const Eigen::MatrixXcd displaced = displace_frame(state, displacement);
  const int d = int(displaced.rows());

  // moments[i] = tr[rho_displaced :e^{-eta (N-i) nhat / N}:]
  std::vector<long double> moments(n + 1, 0.0L);
  for (int i = 0; i <= n; ++i) {
    const long double base = 1.0L - (long double)(eta) * (n - i) / n;
    long double pw = 1.0L, acc = 0.0L;
    for (int m = 0; m < d; ++m) {
      acc += (long double)(displaced(m, m).real()) * pw;
      pw *= base;
    }
    moments[i] = acc;
  }

  std::vector<double> probs(n + 1);
  for (int k = 0; k <= n; ++k) {
    long double acc = 0.0L;
    for (int i = 0; i <= k; ++i) {
      const long double sign = ((k - i) % 2 == 0) ? 1.0L : -1.0L;
      acc += sign * (long double)binomial(k, i) * moments[i];
    }
    probs[k] = double((long double)binomial(n, k) * acc);
  }
  const long double trace = moments[n];  // i = n: identity moment = tr rho_displaced
  if (std::abs(double(trace) - 1.0) > 1e-8)
    throw std::runtime_error(
        "click_probabilities: truncation too small for this displacement");
  return probs;
}

/// Gaussian route: p_k = sum_m T_km W(alpha; S_m) (+1 on the last row);
/// the S_m all lie below -1, where the Gaussian closed form is always valid.
inline std::vector<double> clicks_from_gaussian(const GaussianState& state,
                                                complexd displacement,
                                                const ArraySpec& spec) {
  const int n = spec.detectors;
  const TriangularMap map = build_triangular_map(spec);
  std::vector<double> w(n);
  for (int m = 0; m < n; ++m)
    w[m] = sparam_gaussian(state, displacement, map.orderings[m]);
  std::vector<double> probs(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    long double acc = (k == n) ? 1.0L : 0.0L;
    for (int m = 0; m < std::min(k + 1, n); ++m)
      acc += (long double)map.entries(k, m) * w[m];
    probs[k] = double(acc);
  }
  return probs;
}

}  // namespace detail

inline ClickDistribution click_probabilities(const QuantumState& state,
                                             complexd displacement,
                                             const ArraySpec& spec) {
  validate(spec);
  struct Visitor {
    complexd displacement;
    const ArraySpec& spec;
    std::vector<double> operator()(const GaussianState& g) const {
      return detail::clicks_from_gaussian(g, displacement, spec);
    }
    std::vector<double> operator()(const FockDensityMatrix& f) const {
      return detail::clicks_from_fock(f, displacement, spec);
    }
    std::vector<double> operator()(const ScaledFockState& s) const {
      if (s.scale != 0.0)
        throw std::domain_error(
            "click_probabilities: coordinate-scaled states are not supported");
      return detail::clicks_from_fock(s.base, displacement, spec);
    }
  };
  return {std::visit(Visitor{displacement, spec}, state), spec, displacement};
}

/// Parity-weighted click sum (2/pi) sum_k (-1)^k p_k. A Wigner look-alike;
/// feeding it into the witness matrix directly can flag classical states.
inline double wigner_like(const QuantumState& state, complexd displacement,
                          const ArraySpec& spec) {
  const ClickDistribution clicks = click_probabilities(state, displacement, spec);
  long double acc = 0.0L;
  for (size_t k = 0; k < clicks.probs.size(); ++k)
    acc += ((k % 2 == 0) ? 1.0L : -1.0L) * clicks.probs[k];
  return double(2.0L / pi * acc);
}

/// Invert the triangular system by forward substitution, recovering
/// W_rho(alpha; S_m) for m = 0..N-1 from the click probabilities.
inline std::vector<std::pair<double, double>> recover_quasiprobs(
    const ClickDistribution& clicks) {
  validate(clicks.spec);
  const int n = clicks.spec.detectors;
  if (int(clicks.probs.size()) != n + 1)
    throw std::invalid_argument("recover_quasiprobs: probability vector size mismatch");
  const TriangularMap map = build_triangular_map(clicks.spec);
  std::vector<std::pair<double, double>> out(n);
  std::vector<double> w(n);
  for (int m = 0; m < n; ++m) {
    double acc = clicks.probs[m];
    for (int j = 0; j < m; ++j) acc -= map.entries(m, j) * w[j];
    w[m] = acc / map.entries(m, m);
    out[m] = {map.orderings[m], w[m]};
  }
  return out;
}

/// Multinomial sampling of click outcomes; every variate is a pure function
/// of (seed, shot index), so runs are reproducible across platforms.
/// Returns empirical frequencies and per-bin standard errors.
inline std::pair<ClickDistribution, std::vector<double>> simulate_shots(
    const QuantumState& state, complexd displacement, const ArraySpec& spec,
    std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("simulate_shots: shots must be >= 1");
  const ClickDistribution exact = click_probabilities(state, displacement, spec);
  const int n = spec.detectors;
  std::vector<double> cdf(n + 1);
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    acc += std::max(0.0, exact.probs[k]);
    cdf[k] = acc;
  }
  std::vector<std::int64_t> counts(n + 1, 0);
  for (std::int64_t i = 0; i < shots; ++i) {
    const double u = counter_uniform(seed, std::uint64_t(i)) * acc;
    int k = int(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (k > n) k = n;
    ++counts[k];
  }
  ClickDistribution empirical{{}, spec, displacement};
  std::vector<double> stderrs(n + 1);
  empirical.probs.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double p = double(counts[k]) / double(shots);
    empirical.probs[k] = p;
    stderrs[k] = std::sqrt(p * (1.0 - p) / double(shots));
  }
  return {std::move(empirical), std::move(stderrs)};
}

/// End-to-end pipeline: measure clicks at every midpoint (exactly, or with
/// finite shots), recover the quasiprobability at ordering S_m, and assemble
/// the witness matrix M^{(S_m, n)}.
inline WitnessReport witness_from_clicks(const QuantumState& state,
                                         const std::vector<complexd>& points,
                                         const ArraySpec& spec, int m,
                                         std::optional<std::int64_t> shots = std::nullopt,
                                         std::uint64_t seed = 0,
                                         double negativity_tol = 1e-9) {
  validate(spec);
  if (points.empty()) throw std::invalid_argument("witness_from_clicks: empty point set");
  if (m < 0 || m >= spec.detectors)
    throw std::invalid_argument("witness_from_clicks: need 0 <= m < N");
  const TriangularMap map = build_triangular_map(spec);
  const double s = map.orderings[m];
  const double one_minus_s = 1.0 - s;
  const int n = int(points.size());

  Eigen::MatrixXcd matrix(n, n);
  std::uint64_t midpoint_index = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const complexd mid = 0.5 * (points[i] + points[j]);
      ClickDistribution clicks = click_probabilities(state, mid, spec);
      if (shots)
        clicks = simulate_shots(state, mid, spec, *shots,
                                hash_combine(seed, midpoint_index)).first;
      ++midpoint_index;
      const double w = recover_quasiprobs(clicks)[m].second;
      const double kernel = std::exp(-std::norm(points[i] - points[j]) / (2.0 * one_minus_s));
      matrix(i, j) = 0.5 * pi * one_minus_s * w * kernel;
      matrix(j, i) = matrix(i, j);
    }

  auto [lambda, vec] = min_eigenvalue(matrix);
  const double norm = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  WitnessReport report;
  report.min_eigenvalue = lambda;
  report.eigenvector = vec;
  report.points = PhasePointSet{points, s};
  report.nonclassical = lambda < -negativity_tol * norm;
  report.distance_bound = distance_lower_bound(lambda, n);
  report.metadata = "witness_from_clicks N=" + std::to_string(spec.detectors) +
                    " eta=" + std::to_string(spec.efficiency) + " m=" + std::to_string(m) +
                    (shots ? " shots=" + std::to_string(*shots) : " exact") +
                    " seed=" + std::to_string(seed);
  return report;
}

}  // namespace psw
