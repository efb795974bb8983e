#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <variant>

#include "psw/math.hpp"

namespace psw {

/// Displaced squeezed thermal state. Every single-mode Gaussian state is
/// parametrized this way: purity mu, squeezing strength r, orientation of the
/// squeezed axis, and a phase-space displacement.
struct GaussianState {
  double purity = 1.0;
  double squeezing = 0.0;
  double phase = 0.0;
  complexd displacement{0.0, 0.0};

  /// r_c = -(1/2) ln(mu); squeezing beyond this makes the state nonclassical.
  double critical_squeezing() const { return -0.5 * std::log(purity); }
};

inline GaussianState make_squeezed_thermal(double purity, double squeezing,
                                           double phase, complexd displacement) {
  if (!(purity > 0.0) || purity > 1.0)
    throw std::domain_error("make_squeezed_thermal: purity must be in (0,1]");
  if (squeezing < 0.0)
    throw std::domain_error("make_squeezed_thermal: squeezing must be >= 0");
  phase = std::fmod(phase, 2.0 * pi);
  if (phase < 0.0) phase += 2.0 * pi;
  return GaussianState{purity, squeezing, phase, displacement};
}

inline GaussianState coherent_state(complexd amplitude) {
  return GaussianState{1.0, 0.0, 0.0, amplitude};
}

/// Thermal state of mean photon number nbar (purity 1/(2 nbar + 1)).
inline GaussianState thermal_state(double mean_photons) {
  if (mean_photons < 0.0) throw std::domain_error("thermal_state: mean_photons < 0");
  return GaussianState{1.0 / (2.0 * mean_photons + 1.0), 0.0, 0.0, {0.0, 0.0}};
}

/// Density matrix on the truncated Fock space {|0>, ..., |dim-1>}.
class FockDensityMatrix {
 public:
  explicit FockDensityMatrix(Eigen::MatrixXcd entries) : rho_(std::move(entries)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() < 1)
      throw std::invalid_argument("FockDensityMatrix: entries must be square");
    validate();
  }

  int dim() const { return int(rho_.rows()); }
  const Eigen::MatrixXcd& entries() const { return rho_; }
  complexd operator()(int j, int k) const { return rho_(j, k); }

 private:
  void validate() const {
    double scale = std::max(1.0, rho_.cwiseAbs().maxCoeff());
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw std::domain_error("FockDensityMatrix: not Hermitian");
    if (std::abs(rho_.trace().real() - 1.0) > 1e-10 ||
        std::abs(rho_.trace().imag()) > 1e-10)
      throw std::domain_error("FockDensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw std::domain_error("FockDensityMatrix: negative eigenvalue");
  }

  Eigen::MatrixXcd rho_;
};

/// |n><n| embedded in a truncated Fock space.
inline FockDensityMatrix fock_state(int n, int dim) {
  if (n < 0 || n >= dim) throw std::invalid_argument("fock_state: need 0 <= n < dim");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(n, n) = 1.0;
  return FockDensityMatrix(rho);
}

/// Fock-diagonal mixture after coordinate-scaling the Wigner function by
/// squeezing strength r: W(q, p) = W_base(e^r q, e^{-r} p). Exact at any r,
/// with no truncation error from a Fock-basis squeeze operator.
struct ScaledFockState {
  FockDensityMatrix base;
  double scale = 0.0;  // squeezing strength r of the scaling
};

using QuantumState = std::variant<GaussianState, FockDensityMatrix, ScaledFockState>;

/// Pure-loss channel with transmittance eta, via the beam-splitter Kraus
/// operators <m-k| A_k |m> = sqrt(C(m,k) eta^{m-k} (1-eta)^k).
inline FockDensityMatrix apply_loss(const FockDensityMatrix& state, double transmittance) {
  if (transmittance < 0.0 || transmittance > 1.0)
    throw std::domain_error("apply_loss: transmittance must be in [0,1]");
  const int d = state.dim();
  const double eta = transmittance;
  if (eta == 1.0) return state;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    Eigen::MatrixXcd kraus = Eigen::MatrixXcd::Zero(d, d);
    for (int m = k; m < d; ++m)
      kraus(m - k, m) = std::sqrt(binomial(m, k) * std::pow(eta, m - k) *
                                  std::pow(1.0 - eta, k));
    out += kraus * state.entries() * kraus.adjoint();
  }
  return FockDensityMatrix(out);
}

/// <q^2> and <p^2> of a Fock-basis state, q = (a + a^dag)/2.
inline std::pair<double, double> quadrature_second_moments(const FockDensityMatrix& state) {
  const int d = state.dim();
  // q^2 = (a^2 + a^dag^2 + 2n + 1)/4, p^2 = (-a^2 - a^dag^2 + 2n + 1)/4
  complexd aa{0.0, 0.0};
  double n_part = 0.0;
  for (int m = 0; m < d; ++m) {
    n_part += (2.0 * m + 1.0) * state(m, m).real();
    if (m + 2 < d)
      aa += state(m + 2, m) * std::sqrt(double(m + 1)) * std::sqrt(double(m + 2));
  }
  double cross = 2.0 * aa.real();  // tr[rho (a^2 + adag^2)]
  return {(n_part + cross) / 4.0, (n_part - cross) / 4.0};
}

inline double mean_photon_number(const QuantumState& state) {
  struct Visitor {
    double operator()(const GaussianState& g) const {
      const double rc = g.critical_squeezing();
      const double var_q = std::exp(-2.0 * (g.squeezing - rc)) / 4.0;
      const double var_p = std::exp(2.0 * (g.squeezing + rc)) / 4.0;
      return var_q + var_p - 0.5 + std::norm(g.displacement);
    }
    double operator()(const FockDensityMatrix& f) const {
      double e = 0.0;
      for (int j = 0; j < f.dim(); ++j) e += j * f(j, j).real();
      return e;
    }
    double operator()(const ScaledFockState& s) const {
      auto [q2, p2] = quadrature_second_moments(s.base);
      return std::exp(-2.0 * s.scale) * q2 + std::exp(2.0 * s.scale) * p2 - 0.5;
    }
  };
  return std::visit(Visitor{}, state);
}

/// Squeezed two-photon mixture S(r) { f |2><2| + (1-f) |0><0| } S^dag(r).
inline QuantumState make_squeezed_two_photon_mixture(double fraction, double squeezing) {
  if (fraction < 0.0 || fraction > 1.0)
    throw std::domain_error("make_squeezed_two_photon_mixture: fraction must be in [0,1]");
  if (squeezing < 0.0)
    throw std::domain_error("make_squeezed_two_photon_mixture: squeezing must be >= 0");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
  rho(0, 0) = 1.0 - fraction;
  rho(2, 2) = fraction;
  FockDensityMatrix base(rho);
  if (squeezing == 0.0) return base;
  return ScaledFockState{std::move(base), squeezing};
}

/// Truncated displacement operator, <m|D(alpha)|n> in closed form.
inline Eigen::MatrixXcd displacement_operator(complexd alpha, int dim) {
  Eigen::MatrixXcd d(dim, dim);
  const double a2 = std::norm(alpha);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n <= m; ++n) {
      const double log_mag = 0.5 * (log_factorial(n) - log_factorial(m)) - 0.5 * a2;
      const complexd amp = std::pow(alpha, m - n);
      d(m, n) = std::exp(log_mag) * amp * laguerre(n, m - n, a2);
      if (m != n) {
        // <n|D|m> = conj(<m|D^dag|n>) with D^dag(alpha) = D(-alpha)
        const complexd amp2 = std::pow(-std::conj(alpha), m - n);
        d(n, m) = std::exp(log_mag) * amp2 * laguerre(n, m - n, a2);
      }
    }
  }
  return d;
}

/// D^dag(alpha) rho D(alpha) on the truncated space. Exact only up to
/// truncation; callers should size dim with margin over |alpha|^2.
inline Eigen::MatrixXcd displace_frame(const FockDensityMatrix& state, complexd alpha) {
  Eigen::MatrixXcd d = displacement_operator(-alpha, state.dim());
  return d * state.entries() * d.adjoint();
}

}  // namespace psw
