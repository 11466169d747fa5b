#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dd/common.hpp"
#include "dd/fit.hpp"
#include "dd/rng.hpp"
#include "dd/sequence.hpp"

namespace dd {

/// Largest |eigenvalue| of a Hermitian matrix; the operator norm.
inline double operator_norm(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Eigen::MatrixXcd& h, double tol = 1e-12) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// A dephasing Hamiltonian pair H+- = X0 +- X1 with no commutation assumption
/// between X0 and X1.
struct DephasingModel {
  Eigen::MatrixXcd x0;
  Eigen::MatrixXcd x1;
  std::string label;

  int dim() const { return static_cast<int>(x0.rows()); }

  void validate(double tol = 1e-12) const {
    if (x0.rows() != x0.cols() || x1.rows() != x1.cols() || x0.rows() != x1.rows())
      throw std::invalid_argument("DephasingModel: dimension mismatch");
    if (!is_hermitian(x0, tol) || !is_hermitian(x1, tol))
      throw std::invalid_argument("DephasingModel: operators must be Hermitian");
  }
};

/// Seed-deterministic Hermitian pair: i.i.d. complex Gaussian entries,
/// symmetrized, then rescaled so both operator norms equal `norm_bound`.
inline DephasingModel random_dephasing_model(int dim, std::uint64_t seed,
                                             double norm_bound = 1.0) {
  if (dim < 2) throw std::invalid_argument("random_dephasing_model: dim must be >= 2");
  if (!(norm_bound > 0.0)) throw std::invalid_argument("random_dephasing_model: bad norm bound");
  GaussianSampler rng(seed);
  auto draw = [&]() {
    Eigen::MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian()) / std::sqrt(2.0);
    Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());
    h *= norm_bound / operator_norm(h);
    return h;
  };
  DephasingModel model;
  model.x0 = draw();
  model.x1 = draw();
  model.label = "gaussian-dim" + std::to_string(dim) + "-seed" + std::to_string(seed);
  return model;
}

struct DeltaCheck {
  double re_w = 0.0;         // Re<W> computed directly from Tr(U-^dag U+)
  double delta_route = 0.0;  // 1 - <Delta^dag Delta>/2 from Delta = U+ - U-
};

struct EchoPoint {
  double t = 0.0;
  double v_e = 0.0;
};
using EchoCurve = std::vector<EchoPoint>;

/// Evolves a dephasing model under pulse sequences. The two conditional
/// Hamiltonians are eigendecomposed once, so interval exponentials are exact
/// unitaries up to roundoff and a t-grid costs only matrix products.
class DephasingEvolver {
 public:
  explicit DephasingEvolver(DephasingModel model) : model_(std::move(model)) {
    model_.validate();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> plus(model_.x0 + model_.x1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> minus(model_.x0 - model_.x1);
    basis_plus_ = plus.eigenvectors();
    basis_minus_ = minus.eigenvectors();
    eigs_plus_ = plus.eigenvalues();
    eigs_minus_ = minus.eigenvalues();
  }

  const DephasingModel& model() const { return model_; }

  /// Ordered product of interval exponentials; `leading_sign` +1 gives U+,
  /// -1 gives U-. The first interval acts first (rightmost factor).
  Eigen::MatrixXcd propagator(const std::vector<double>& intervals, int leading_sign) const {
    const int d = model_.dim();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
    int sign = leading_sign;
    for (const double tau : intervals) {
      u = interval_exponential(tau, sign) * u;
      sign = -sign;
    }
    return u;
  }

  std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> propagators(const PulseSequence& seq) const {
    return {propagator(seq.intervals, +1), propagator(seq.intervals, -1)};
  }

  /// <W> = sum_i w_i (U-^dag U+)_ii; uniform weights when none are given.
  std::complex<double> averaged_w(const PulseSequence& seq,
                                  const std::vector<double>* weights = nullptr) const {
    const auto [up, um] = propagators(seq);
    const Eigen::MatrixXcd w = um.adjoint() * up;
    if (!weights) return w.trace() / static_cast<double>(model_.dim());
    if (static_cast<int>(weights->size()) != model_.dim())
      throw std::invalid_argument("echo: weight count != dimension");
    double total = 0.0;
    for (double wi : *weights) {
      if (wi < 0.0) throw std::invalid_argument("echo: negative weight");
      total += wi;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("echo: weights not normalized");
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < model_.dim(); ++i)
      acc += (*weights)[static_cast<std::size_t>(i)] * w(i, i);
    return acc;
  }

  /// Pulse sequence echo v_E = |<W>|.
  double echo(const PulseSequence& seq, const std::vector<double>* weights = nullptr) const {
    return std::abs(averaged_w(seq, weights));
  }

  /// 1 - v_E for uniform weights, computed without cancellation: Re<W> comes
  /// from the operator identity Re<W> = 1 - <Delta^dag Delta>/2, so the
  /// deficit stays accurate far below double-epsilon of 1.
  double echo_deficit(const PulseSequence& seq) const {
    const auto [up, um] = propagators(seq);
    const double d = static_cast<double>(model_.dim());
    const double half_delta = 0.5 * (up - um).squaredNorm() / d;  // <Delta^dag Delta>/2
    const double im_w = ((um.adjoint() * up).trace()).imag() / d;
    // 1 - sqrt((1-a)^2 + b^2) with a = half_delta, b = im_w
    const double v = std::hypot(1.0 - half_delta, im_w);
    return (2.0 * half_delta - half_delta * half_delta - im_w * im_w) / (1.0 + v);
  }

  /// Re<W> along two independent routes; they agree to ~1e-10 when the
  /// propagators are unitary.
  DeltaCheck delta_check(const PulseSequence& seq) const {
    const auto [up, um] = propagators(seq);
    const double d = static_cast<double>(model_.dim());
    DeltaCheck out;
    out.re_w = ((um.adjoint() * up).trace()).real() / d;
    out.delta_route = 1.0 - 0.5 * (up - um).squaredNorm() / d;
    return out;
  }

 private:
  Eigen::MatrixXcd interval_exponential(double tau, int sign) const {
    const auto& basis = (sign > 0) ? basis_plus_ : basis_minus_;
    const auto& eigs = (sign > 0) ? eigs_plus_ : eigs_minus_;
    Eigen::VectorXcd phases(eigs.size());
    for (int i = 0; i < eigs.size(); ++i)
      phases(i) = std::exp(std::complex<double>(0.0, -eigs(i) * tau));
    return basis * phases.asDiagonal() * basis.adjoint();
  }

  DephasingModel model_;
  Eigen::MatrixXcd basis_plus_, basis_minus_;
  Eigen::VectorXd eigs_plus_, eigs_minus_;
};

inline std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> sequence_propagators(
    const DephasingModel& model, const PulseSequence& seq) {
  return DephasingEvolver(model).propagators(seq);
}

inline double echo(const DephasingModel& model, const PulseSequence& seq) {
  return DephasingEvolver(model).echo(seq);
}

inline DeltaCheck delta_check(const DephasingModel& model, const PulseSequence& seq) {
  return DephasingEvolver(model).delta_check(seq);
}

struct ScalingResult {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  std::vector<double> t_used;  // grid points above the noise floor
  EchoCurve curve;             // full (t, v_E) curve
  std::vector<double> deficit;  // 1 - v_E per grid point
};

/// Fits the power p in 1 - v_E ~ t^p over a time grid, discarding points
/// whose deficit sits below `noise_floor` (double precision cannot resolve
/// steep high-order slopes under ~1e-13).
inline ScalingResult fidelity_scaling(const DephasingModel& model, SequenceKind kind, int order,
                                      const std::vector<double>& t_grid,
                                      double noise_floor = 1e-13) {
  if (t_grid.size() < 2) throw std::invalid_argument("fidelity_scaling: need >= 2 grid points");
  DephasingEvolver evolver(model);
  ScalingResult result;
  std::vector<double> log_t, log_deficit;
  for (const double t : t_grid) {
    const PulseSequence seq = make_sequence(kind, order, t);
    const double deficit = evolver.echo_deficit(seq);
    result.curve.push_back({t, 1.0 - deficit});
    result.deficit.push_back(deficit);
    if (deficit > noise_floor) {
      log_t.push_back(std::log(t));
      log_deficit.push_back(std::log(deficit));
      result.t_used.push_back(t);
    }
  }
  if (log_t.size() < 2)
    throw UnderflowError(
        "fidelity_scaling: all echo deficits below the noise floor; increase t_max");
  const LineFit fit = least_squares_line(log_t, log_deficit);
  result.slope = fit.slope;
  result.intercept = fit.intercept;
  result.rms_residual = fit.rms_residual;
  return result;
}

}  // namespace dd
