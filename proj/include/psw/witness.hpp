#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "psw/math.hpp"
#include "psw/quasiprob.hpp"
#include "psw/states.hpp"

namespace psw {

/// Ordered phase-space points beta_1..beta_n together with the ordering
/// parameter of the quasiprobability they are probed with.
struct PhasePointSet {
  std::vector<complexd> points;
  double s = 0.0;
};

struct WitnessMatrix {
  Eigen::MatrixXcd entries;
  PhasePointSet generator;
};

struct WitnessReport {
  double min_eigenvalue = 0.0;
  Eigen::VectorXcd eigenvector;
  PhasePointSet points;
  bool nonclassical = false;
  double distance_bound = 0.0;
  std::string metadata;
};

/// M_ij = (pi(1-s)/2) W_rho((b_i+b_j)/2; s) exp(-|b_i-b_j|^2 / (2(1-s))).
/// At s = 0 this is the base hierarchy matrix.
inline WitnessMatrix build_witness(const QuantumState& state, const PhasePointSet& set) {
  if (set.points.empty()) throw std::invalid_argument("build_witness: empty point set");
  check_ordering(set.s);
  const int n = int(set.points.size());
  const double one_minus_s = 1.0 - set.s;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const complexd mid = 0.5 * (set.points[i] + set.points[j]);
      const double w = quasiprob(state, mid, set.s);
      const double kernel =
          std::exp(-std::norm(set.points[i] - set.points[j]) / (2.0 * one_minus_s));
      m(i, j) = 0.5 * pi * one_minus_s * w * kernel;
      m(j, i) = m(i, j);
    }
  return {std::move(m), set};
}

/// Smallest eigenvalue and a unit eigenvector of a Hermitian matrix.
/// Closed 2x2 formula for n <= 2, dense Hermitian solve otherwise.
inline std::pair<double, Eigen::VectorXcd> min_eigenvalue(const Eigen::MatrixXcd& m) {
  const int n = int(m.rows());
  if (n < 1 || m.cols() != n) throw std::invalid_argument("min_eigenvalue: not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("min_eigenvalue: matrix is not Hermitian");
  if (n == 1) {
    Eigen::VectorXcd v(1);
    v(0) = 1.0;
    return {m(0, 0).real(), v};
  }
  if (n == 2) {
    const double a = m(0, 0).real(), c = m(1, 1).real();
    const complexd b = m(0, 1);
    const double half_tr = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(b));
    const double lambda = half_tr - rad;
    Eigen::VectorXcd v(2);
    if (std::abs(b) + std::abs(lambda - a) < 1e-300) {
      v << (a <= c ? 1.0 : 0.0), (a <= c ? 0.0 : 1.0);
    } else {
      v << b, complexd(lambda - a);
      v.normalize();
    }
    return {lambda, v};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

inline std::pair<double, Eigen::VectorXcd> min_eigenvalue(const WitnessMatrix& m) {
  return min_eigenvalue(m.entries);
}

inline double distance_lower_bound(double lambda_min, int n) {
  if (n < 1) throw std::invalid_argument("distance_lower_bound: n must be >= 1");
  return std::max(0.0, -lambda_min / (2.0 * n));
}

struct SearchConfig {
  double grid_radius = 4.0;   // coarse seeding box half-width, quadrature units
  int grid_points = 9;        // per-axis coarse grid resolution
  int multistarts = 16;       // simplex refinements from the best seeds
  double simplex_tol = 1e-8;  // convergence: simplex diameter below this
  int max_simplex_iters = 4000;
  double negativity_tol = 1e-9;  // verdict threshold, scaled by max(1, ||M||)
  std::uint64_t seed = 0;
  double scan_cap = 6.0;     // radius cap for detection-radius scans
  double scan_step = 1e-2;   // coarse step for detection-radius scans
};

namespace detail {

/// Standard Nelder-Mead on R^dim; deterministic for a fixed start.
inline std::pair<Eigen::VectorXd, double> nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd start,
    double step, double tol, int max_iters) {
  const int dim = int(start.size());
  std::vector<Eigen::VectorXd> xs(dim + 1, start);
  std::vector<double> fs(dim + 1);
  for (int i = 0; i < dim; ++i) xs[i + 1](i) += step;
  for (int i = 0; i <= dim; ++i) fs[i] = f(xs[i]);

  auto order = [&] {
    std::vector<int> idx(dim + 1);
    for (int i = 0; i <= dim; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    std::vector<Eigen::VectorXd> xs2(dim + 1);
    std::vector<double> fs2(dim + 1);
    for (int i = 0; i <= dim; ++i) {
      xs2[i] = xs[idx[i]];
      fs2[i] = fs[idx[i]];
    }
    xs.swap(xs2);
    fs.swap(fs2);
  };

  for (int iter = 0; iter < max_iters; ++iter) {
    order();
    double diameter = 0.0;
    for (int i = 1; i <= dim; ++i) diameter = std::max(diameter, (xs[i] - xs[0]).norm());
    if (diameter < tol) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i) centroid += xs[i];
    centroid /= dim;

    Eigen::VectorXd xr = centroid + (centroid - xs[dim]);
    double fr = f(xr);
    if (fr < fs[0]) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[dim]);
      double fe = f(xe);
      if (fe < fr) {
        xs[dim] = xe;
        fs[dim] = fe;
      } else {
        xs[dim] = xr;
        fs[dim] = fr;
      }
    } else if (fr < fs[dim - 1]) {
      xs[dim] = xr;
      fs[dim] = fr;
    } else {
      Eigen::VectorXd xc = centroid + 0.5 * ((fr < fs[dim] ? xr : xs[dim]) - centroid);
      double fc = f(xc);
      if (fc < std::min(fr, fs[dim])) {
        xs[dim] = xc;
        fs[dim] = fc;
      } else {
        for (int i = 1; i <= dim; ++i) {
          xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  order();
  return {xs[0], fs[0]};
}

inline std::vector<complexd> coords_to_points(const Eigen::VectorXd& x) {
  std::vector<complexd> pts(x.size() / 2);
  for (size_t i = 0; i < pts.size(); ++i) pts[i] = complexd(x(2 * i), x(2 * i + 1));
  return pts;
}

inline bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i) - 1e-15) return true;
    if (a(i) > b(i) + 1e-15) return false;
  }
  return false;
}

}  // namespace detail

/// Minimize the smallest witness eigenvalue over the 2n point coordinates:
/// coarse grid seeding plus multi-start Nelder-Mead. A collinear pre-scan
/// runs first for n = 2, where the Gaussian optimum is known to be collinear
/// and the finite-dimensional construction is collinear as well.
/// Deterministic for a fixed config.
inline WitnessReport optimize_points(const QuantumState& state, int n, double s,
                                     const SearchConfig& config = {}) {
  if (n < 1) throw std::invalid_argument("optimize_points: n must be >= 1");
  check_ordering(s);

  auto objective = [&](const Eigen::VectorXd& x) -> double {
    PhasePointSet set{detail::coords_to_points(x), s};
    return min_eigenvalue(build_witness(state, set)).first;
  };

  const double R = config.grid_radius;
  const int G = std::max(2, config.grid_points);
  auto grid_value = [&](int i) { return -R + 2.0 * R * i / (G - 1); };

  struct Candidate {
    Eigen::VectorXd x;
    double f;
  };
  std::vector<Candidate> seeds;

  if (n == 1) {
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j) {
        Eigen::VectorXd x(2);
        x << grid_value(i), grid_value(j);
        seeds.push_back({x, objective(x)});
      }
  } else if (n == 2) {
    // Collinear scan: beta_1 = u e^{i theta}, beta_2 = v e^{i theta}.
    for (int it = 0; it < 8; ++it) {
      const double theta = it * pi / 8.0;
      const complexd dir = std::exp(complexd(0.0, theta));
      for (int i = 0; i < G; ++i)
        for (int j = 0; j < G; ++j) {
          const complexd b1 = grid_value(i) * dir, b2 = grid_value(j) * dir;
          Eigen::VectorXd x(4);
          x << b1.real(), b1.imag(), b2.real(), b2.imag();
          seeds.push_back({x, objective(x)});
        }
    }
  } else {
    // Random seeding within the box, derived deterministically from the seed.
    const int count = std::max(64, 8 * config.multistarts);
    for (int c = 0; c < count; ++c) {
      Eigen::VectorXd x(2 * n);
      for (int i = 0; i < 2 * n; ++i)
        x(i) = -R + 2.0 * R * counter_uniform(config.seed, std::uint64_t(c) * 2 * n + i);
      seeds.push_back({x, objective(x)});
    }
    Eigen::VectorXd origin = Eigen::VectorXd::Zero(2 * n);
    seeds.push_back({origin, objective(origin)});
  }

  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const Candidate& a, const Candidate& b) { return a.f < b.f; });

  Eigen::VectorXd best_x;
  double best_f = std::numeric_limits<double>::infinity();
  const int starts = std::min<int>(config.multistarts, int(seeds.size()));
  const double step = std::max(0.05, R / (G - 1) * 0.5);
  for (int k = 0; k < starts; ++k) {
    auto [x, fx] = detail::nelder_mead(objective, seeds[k].x, step, config.simplex_tol,
                                       config.max_simplex_iters);
    if (fx < best_f - 1e-12 || (std::abs(fx - best_f) <= 1e-12 &&
                                (best_x.size() == 0 || detail::lex_less(x, best_x)))) {
      best_f = fx;
      best_x = x;
    }
  }

  PhasePointSet best_set{detail::coords_to_points(best_x), s};
  WitnessMatrix m = build_witness(state, best_set);
  auto [lambda, vec] = min_eigenvalue(m);
  const double norm = std::max(1.0, m.entries.cwiseAbs().maxCoeff());

  WitnessReport report;
  report.min_eigenvalue = lambda;
  report.eigenvector = vec;
  report.points = best_set;
  report.nonclassical = lambda < -config.negativity_tol * norm;
  report.distance_bound = distance_lower_bound(lambda, n);
  report.metadata = "optimize_points n=" + std::to_string(n) + " s=" + std::to_string(s) +
                    " seed=" + std::to_string(config.seed) +
                    " negativity_tol=" + std::to_string(config.negativity_tol);
  return report;
}

struct DetectionRadius {
  bool detected = false;
  double radius = 0.0;         // smallest r with det M^{(s,2)} < 0, if detected
  bool level1_negative = false;  // W(0; s) <= 0: level n = 1 already certifies
};

namespace detail {

/// Sign of det M^{(s,2)} for beta_1 = 2r e^{i phi}, beta_2 = 0. The shared
/// exponential factors cancel between the two determinant terms, so the sign
/// is computed from scaled mantissas and never underflows.
inline double fds_det_sign(const QuantumState& state, double r, double phi, double s) {
  const complexd dir = std::exp(complexd(0.0, phi));
  const ScaledReal w2r = quasiprob_scaled(state, 2.0 * r * dir, s);
  const ScaledReal w0 = quasiprob_scaled(state, complexd(0.0, 0.0), s);
  const ScaledReal wr = quasiprob_scaled(state, r * dir, s);
  const ScaledReal cross{wr.mantissa * wr.mantissa,
                         2.0 * wr.log_scale - 4.0 * r * r / (1.0 - s)};
  return scaled_difference_sign(w2r * w0, cross);
}

}  // namespace detail

/// Scan the collinear construction beta = {2r e^{i phi}, 0} for the smallest
/// radius where det M^{(s,2)} turns negative, refined by bisection.
inline DetectionRadius fds_detection_radius(const QuantumState& state, double phi,
                                            double s, const SearchConfig& config = {}) {
  check_ordering(s);
  DetectionRadius result;
  result.level1_negative = quasiprob(state, complexd(0.0, 0.0), s) <= 0.0;

  double prev = config.scan_step;
  double prev_sign = detail::fds_det_sign(state, prev, phi, s);
  if (prev_sign < 0.0) {
    result.detected = true;
    result.radius = prev;
    return result;
  }
  for (double r = prev + config.scan_step; r <= config.scan_cap + 1e-12;
       r += config.scan_step) {
    const double sign = detail::fds_det_sign(state, r, phi, s);
    if (sign < 0.0) {
      double lo = prev, hi = r;
      for (int it = 0; it < 60 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        (detail::fds_det_sign(state, mid, phi, s) < 0.0 ? hi : lo) = mid;
      }
      result.detected = true;
      result.radius = hi;
      return result;
    }
    prev = r;
    prev_sign = sign;
  }
  return result;  // not detected within scan range
}

}  // namespace psw
