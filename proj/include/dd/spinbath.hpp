#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dd/common.hpp"
#include "dd/fit.hpp"
#include "dd/propagator.hpp"
#include "dd/rng.hpp"
#include "dd/sequence.hpp"

namespace dd {

/// Synthetic spin-1/2 bath configuration: occupied sites of a cubic lattice
/// inside a Gaussian hyperfine envelope, with secular dipolar intra-bath
/// couplings. A stand-in for material-specific models; units are arbitrary
/// but consistent (couplings in angular frequency, times in its inverse).
struct BathConfig {
  int max_sites = 0;             // keep the closest sites when exceeded; 0 = no cap
  int extent = 6;                // half-extent of the candidate lattice cube
  double lattice_spacing = 1.0;
  double envelope_width = 4.0;   // w in A_n = A0 exp(-|r - r_c|^2 / w^2)
  Eigen::Vector3d envelope_center = Eigen::Vector3d::Zero();  // r_c, lattice units
  double hyperfine_max = 1.0;    // A0
  double dipolar_strength = 0.02;  // b0 in b_nm = b0 (1 - 3 cos^2 theta)/r^3
  double ising_ratio = -4.0;     // c_nm = ratio * b_nm (secular dipolar value)
  double occupancy = 0.15;       // site occupation probability
  std::uint64_t seed = 1;
};

/// N spin-1/2 nuclei around a central spin at the origin. b and c are
/// symmetric with zero diagonal.
struct SpinBathModel {
  std::vector<Eigen::Vector3d> positions;
  std::vector<double> hyperfine;  // A_n
  Eigen::MatrixXd flipflop;       // b_nm
  Eigen::MatrixXd ising;          // c_nm

  int size() const { return static_cast<int>(positions.size()); }
};

/// Couplings from explicit site positions: Gaussian envelope hyperfine and
/// dipolar-form intra-bath couplings. The angular factor is computed as
/// (r^2 - 3 z^2)/r^2 so magic-angle lattice vectors give an exact zero.
/// An off-lattice envelope center lifts the hyperfine degeneracy of sites at
/// equal radius.
inline SpinBathModel bath_from_positions(const std::vector<Eigen::Vector3d>& positions,
                                         double hyperfine_max, double envelope_width,
                                         double dipolar_strength, double ising_ratio,
                                         const Eigen::Vector3d& envelope_center =
                                             Eigen::Vector3d::Zero()) {
  const int n = static_cast<int>(positions.size());
  if (n < 2) throw std::invalid_argument("bath_from_positions: need at least 2 sites");
  SpinBathModel model;
  model.positions = positions;
  model.hyperfine.reserve(static_cast<std::size_t>(n));
  for (const auto& r : positions)
    model.hyperfine.push_back(
        hyperfine_max *
        std::exp(-(r - envelope_center).squaredNorm() / (envelope_width * envelope_width)));
  model.flipflop = Eigen::MatrixXd::Zero(n, n);
  model.ising = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Eigen::Vector3d d = positions[static_cast<std::size_t>(i)] -
                                positions[static_cast<std::size_t>(j)];
      const double r2 = d.squaredNorm();
      if (r2 <= 0.0) throw std::invalid_argument("bath_from_positions: coincident sites");
      const double r = std::sqrt(r2);
      const double b = dipolar_strength * (r2 - 3.0 * d.z() * d.z()) / (r2 * r2 * r);
      model.flipflop(i, j) = model.flipflop(j, i) = b;
      model.ising(i, j) = model.ising(j, i) = ising_ratio * b;
    }
  }
  return model;
}

/// Occupies lattice sites with the configured probability (seed
/// deterministic), optionally keeping only the sites closest to the origin.
inline SpinBathModel build_bath(const BathConfig& config) {
  if (config.extent < 1) throw std::invalid_argument("build_bath: extent must be >= 1");
  if (!(config.occupancy > 0.0) || config.occupancy > 1.0)
    throw std::invalid_argument("build_bath: occupancy must be in (0, 1]");
  GaussianSampler rng(config.seed);
  std::vector<Eigen::Vector3d> sites;
  for (int i = -config.extent; i <= config.extent; ++i)
    for (int j = -config.extent; j <= config.extent; ++j)
      for (int k = -config.extent; k <= config.extent; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;  // central spin site
        const double u = rng.uniform();
        if (u <= config.occupancy)
          sites.emplace_back(config.lattice_spacing * i, config.lattice_spacing * j,
                             config.lattice_spacing * k);
      }
  if (config.max_sites > 0 && static_cast<int>(sites.size()) > config.max_sites) {
    std::vector<std::size_t> idx(sites.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return sites[a].squaredNorm() < sites[b].squaredNorm();
    });
    idx.resize(static_cast<std::size_t>(config.max_sites));
    std::sort(idx.begin(), idx.end());
    std::vector<Eigen::Vector3d> kept;
    kept.reserve(idx.size());
    for (std::size_t i : idx) kept.push_back(sites[i]);
    sites = std::move(kept);
  }
  if (sites.size() < 2)
    throw std::invalid_argument("build_bath: fewer than 2 occupied sites; raise occupancy");
  return bath_from_positions(sites, config.hyperfine_max, config.envelope_width,
                             config.dipolar_strength, config.ising_ratio,
                             config.lattice_spacing * config.envelope_center);
}

/// A flip-flop connected nucleus pair; the lowest nontrivial cluster.
struct PairCluster {
  int n = 0;
  int m = 0;
  double hyperfine_n = 0.0;
  double hyperfine_m = 0.0;
  double flipflop = 0.0;
  double ising = 0.0;
};

/// All pairs with nonzero flip-flop coupling within the distance cutoff
/// (cutoff <= 0 means no distance restriction).
inline std::vector<PairCluster> enumerate_pairs(const SpinBathModel& model,
                                                double distance_cutoff = 0.0) {
  std::vector<PairCluster> pairs;
  for (int i = 0; i < model.size(); ++i) {
    for (int j = i + 1; j < model.size(); ++j) {
      if (model.flipflop(i, j) == 0.0) continue;
      if (distance_cutoff > 0.0) {
        const double dist = (model.positions[static_cast<std::size_t>(i)] -
                             model.positions[static_cast<std::size_t>(j)])
                                .norm();
        if (dist > distance_cutoff) continue;
      }
      pairs.push_back({i, j, model.hyperfine[static_cast<std::size_t>(i)],
                       model.hyperfine[static_cast<std::size_t>(j)], model.flipflop(i, j),
                       model.ising(i, j)});
    }
  }
  return pairs;
}

/// Smallest pair distance cutoff whose excluded tail carries at most
/// `tail_fraction` of the total sum of b_nm^2.
inline double auto_pair_cutoff(const SpinBathModel& model, double tail_fraction = 0.01) {
  std::vector<std::pair<double, double>> dist_b2;  // (distance, b^2)
  double total = 0.0;
  for (int i = 0; i < model.size(); ++i) {
    for (int j = i + 1; j < model.size(); ++j) {
      const double b = model.flipflop(i, j);
      if (b == 0.0) continue;
      const double dist = (model.positions[static_cast<std::size_t>(i)] -
                           model.positions[static_cast<std::size_t>(j)])
                              .norm();
      dist_b2.emplace_back(dist, b * b);
      total += b * b;
    }
  }
  if (dist_b2.empty()) return 0.0;
  std::sort(dist_b2.begin(), dist_b2.end());
  double captured = 0.0;
  for (const auto& [dist, b2] : dist_b2) {
    captured += b2;
    if (captured >= (1.0 - tail_fraction) * total) return dist;
  }
  return dist_b2.back().first;
}

/// The two-nucleus dephasing model of a pair: X1 holds the conditional
/// hyperfine fields, X0 the intra-bath flip-flop and Ising terms (both
/// ordered-sum terms of the pair, hence the factor 2 on Ising).
inline DephasingModel pair_dephasing_model(const PairCluster& pair) {
  using Eigen::MatrixXcd;
  // basis |s_n s_m> = (uu, ud, du, dd)
  MatrixXcd x0 = MatrixXcd::Zero(4, 4);
  MatrixXcd x1 = MatrixXcd::Zero(4, 4);
  const double zn[4] = {0.5, 0.5, -0.5, -0.5};
  const double zm[4] = {0.5, -0.5, 0.5, -0.5};
  for (int s = 0; s < 4; ++s) {
    x1(s, s) = 0.5 * (pair.hyperfine_n * zn[s] + pair.hyperfine_m * zm[s]);
    x0(s, s) = 2.0 * pair.ising * zn[s] * zm[s];
  }
  x0(1, 2) = x0(2, 1) = pair.flipflop;
  return {x0, x1, "pair"};
}

/// <W>_pair - 1 with equal weights over the 4 product basis states. The real
/// part comes from the identity Re<W> = 1 - <Delta^dag Delta>/2, so tiny
/// contributions are not lost to cancellation against 1.
class PairEvolver {
 public:
  explicit PairEvolver(const PairCluster& pair) : evolver_(pair_dephasing_model(pair)) {}

  std::complex<double> contribution(const PulseSequence& seq) const {
    const auto [up, um] = evolver_.propagators(seq);
    const double re = -0.125 * (up - um).squaredNorm();  // -<D^dag D>/2 over d = 4
    const double im = ((um.adjoint() * up).trace()).imag() / 4.0;
    return {re, im};
  }

 private:
  DephasingEvolver evolver_;
};

inline std::complex<double> pair_contribution(const PairCluster& pair,
                                              const PulseSequence& seq) {
  return PairEvolver(pair).contribution(seq);
}

/// Pair-cluster approximation of the bath echo:
/// v_E = exp(sum over pairs of Re{<W>_pair - 1}). Pair evolvers are built
/// once and reused across a time grid; contributions are reduced in pair
/// index order, so results do not depend on evaluation order.
///
/// distance_cutoff: > 0 uses the given pair distance; 0 picks the smallest
/// cutoff keeping >= 99% of sum b^2 (the documented default); < 0 keeps every
/// coupled pair, which oracle comparisons on small baths require.
class ClusterExpansion {
 public:
  explicit ClusterExpansion(const SpinBathModel& model, double distance_cutoff = 0.0)
      : cutoff_(distance_cutoff == 0.0 ? auto_pair_cutoff(model)
                                       : std::max(distance_cutoff, 0.0)) {
    pairs_ = enumerate_pairs(model, cutoff_);
    evolvers_.reserve(pairs_.size());
    for (const auto& pair : pairs_) evolvers_.emplace_back(pair);
    double total = 0.0, captured = 0.0;
    for (int i = 0; i < model.size(); ++i)
      for (int j = i + 1; j < model.size(); ++j) total += model.flipflop(i, j) * model.flipflop(i, j);
    for (const auto& pair : pairs_) captured += pair.flipflop * pair.flipflop;
    captured_b2_fraction_ = (total > 0.0) ? captured / total : 1.0;
  }

  /// ln v_E = sum of Re contributions; exact within the pair approximation.
  double log_echo(const PulseSequence& seq) const {
    double acc = 0.0;
    for (const auto& evolver : evolvers_) acc += evolver.contribution(seq).real();
    return acc;
  }

  double echo(const PulseSequence& seq) const { return std::exp(log_echo(seq)); }

  EchoCurve echo_curve(SequenceKind kind, int order, const std::vector<double>& t_grid) const {
    EchoCurve curve;
    curve.reserve(t_grid.size());
    for (const double t : t_grid) curve.push_back({t, echo(make_sequence(kind, order, t))});
    return curve;
  }

  std::size_t pair_count() const { return pairs_.size(); }
  double cutoff() const { return cutoff_; }
  double captured_b2_fraction() const { return captured_b2_fraction_; }
  const std::vector<PairCluster>& pairs() const { return pairs_; }

 private:
  double cutoff_ = 0.0;
  double captured_b2_fraction_ = 1.0;
  std::vector<PairCluster> pairs_;
  std::vector<PairEvolver> evolvers_;
};

inline double cluster_echo(const SpinBathModel& model, const PulseSequence& seq,
                           double distance_cutoff = 0.0) {
  return ClusterExpansion(model, distance_cutoff).echo(seq);
}

/// Exact 2^N evolution of the full bath Hamiltonian. The flip-flop terms
/// conserve total magnetization, so the Hilbert space splits into popcount
/// sectors that are eigendecomposed independently; N = 12 means a largest
/// block of 924 rather than a 4096-dimensional dense problem.
class ExactBathEvolver {
 public:
  static constexpr int kMaxSites = 12;

  explicit ExactBathEvolver(const SpinBathModel& model) : sites_(model.size()) {
    if (model.size() > kMaxSites)
      throw ResourceError("exact bath echo limited to " + std::to_string(kMaxSites) +
                          " nuclei (2^N state space)");
    if (model.size() < 1) throw std::invalid_argument("exact bath: empty model");
    const int n = model.size();
    const std::size_t dim = std::size_t{1} << n;
    std::vector<std::vector<int>> sector_states(static_cast<std::size_t>(n) + 1);
    for (std::size_t s = 0; s < dim; ++s)
      sector_states[static_cast<std::size_t>(__builtin_popcountll(s))].push_back(
          static_cast<int>(s));

    for (const auto& states : sector_states) {
      if (states.empty()) continue;
      const int d = static_cast<int>(states.size());
      Eigen::MatrixXd x0 = Eigen::MatrixXd::Zero(d, d);
      Eigen::MatrixXd x1 = Eigen::MatrixXd::Zero(d, d);
      std::vector<int> index_of(dim, -1);
      for (int a = 0; a < d; ++a) index_of[static_cast<std::size_t>(states[static_cast<std::size_t>(a)])] = a;
      for (int a = 0; a < d; ++a) {
        const int s = states[static_cast<std::size_t>(a)];
        double hz = 0.0, hzz = 0.0;
        for (int i = 0; i < n; ++i) {
          const double zi = (s >> i & 1) ? 0.5 : -0.5;
          hz += model.hyperfine[static_cast<std::size_t>(i)] * zi;
          for (int j = i + 1; j < n; ++j) {
            const double zj = (s >> j & 1) ? 0.5 : -0.5;
            hzz += 2.0 * model.ising(i, j) * zi * zj;
          }
        }
        x1(a, a) = 0.5 * hz;
        x0(a, a) = hzz;
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            if (((s >> i) & 1) == ((s >> j) & 1)) continue;
            const double b = model.flipflop(i, j);
            if (b == 0.0) continue;
            const int flipped = s ^ (1 << i) ^ (1 << j);
            x0(index_of[static_cast<std::size_t>(flipped)], a) += b;
          }
        }
      }
      Sector sector;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> plus(x0 + x1);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> minus(x0 - x1);
      sector.basis_plus = plus.eigenvectors();
      sector.basis_minus = minus.eigenvectors();
      sector.eigs_plus = plus.eigenvalues();
      sector.eigs_minus = minus.eigenvalues();
      sectors_.push_back(std::move(sector));
    }
  }

  int sites() const { return sites_; }

  double echo(const PulseSequence& seq) const { return std::exp(log_echo(seq)); }

  /// ln v_E computed cancellation-free from the Delta route:
  /// ln |<W>| = log1p(-2a + a^2 + b^2)/2 with a = <D^dag D>/2, b = Im<W>.
  double log_echo(const PulseSequence& seq) const {
    const double dim = std::pow(2.0, sites_);
    double delta_sq = 0.0;
    std::complex<double> trace(0.0, 0.0);
    for (const auto& sector : sectors_) {
      const auto up = sector_propagator(sector, seq.intervals, +1);
      const auto um = sector_propagator(sector, seq.intervals, -1);
      delta_sq += (up - um).squaredNorm();
      trace += (um.adjoint() * up).trace();
    }
    const double a = 0.5 * delta_sq / dim;
    const double im = trace.imag() / dim;
    return 0.5 * std::log1p(-2.0 * a + a * a + im * im);
  }

 private:
  struct Sector {
    Eigen::MatrixXd basis_plus, basis_minus;
    Eigen::VectorXd eigs_plus, eigs_minus;
  };

  Eigen::MatrixXcd sector_propagator(const Sector& sector, const std::vector<double>& intervals,
                                     int leading_sign) const {
    const auto dim = sector.eigs_plus.size();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    int sign = leading_sign;
    for (const double tau : intervals) {
      const auto& basis = (sign > 0) ? sector.basis_plus : sector.basis_minus;
      const auto& eigs = (sign > 0) ? sector.eigs_plus : sector.eigs_minus;
      Eigen::VectorXcd phases(dim);
      for (Eigen::Index i = 0; i < dim; ++i)
        phases(i) = std::exp(std::complex<double>(0.0, -eigs(i) * tau));
      u = basis * (phases.asDiagonal() * (basis.transpose() * u));
      sign = -sign;
    }
    return u;
  }

  int sites_;
  std::vector<Sector> sectors_;
};

inline double exact_bath_echo(const SpinBathModel& model, const PulseSequence& seq) {
  return ExactBathEvolver(model).echo(seq);
}

struct ExponentFit {
  double exponent = 0.0;
  double rms_residual = 0.0;
  std::size_t points_used = 0;
};

/// Fits p in ln v_E ~ -(t/T)^p over the high-fidelity part of a curve.
inline ExponentFit short_time_exponent(const EchoCurve& curve, double v_min = 0.9,
                                       double floor = 1e-12) {
  std::vector<double> log_t, log_decay;
  bool saw_flat = false;
  for (const auto& point : curve) {
    if (!(point.v_e > v_min) || !(point.v_e < 1.0)) continue;
    const double decay = -std::log(point.v_e);
    if (decay <= floor) {
      saw_flat = true;
      continue;
    }
    log_t.push_back(std::log(point.t));
    log_decay.push_back(std::log(decay));
  }
  if (log_t.size() < 5) {
    if (saw_flat)
      throw UnderflowError("short_time_exponent: curve too flat (-ln v below floor)");
    throw std::invalid_argument("short_time_exponent: need >= 5 points with v_E in (v_min, 1)");
  }
  const LineFit fit = least_squares_line(log_t, log_decay);
  return {fit.slope, fit.rms_residual, log_t.size()};
}

}  // namespace dd
