#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dd/cyclotomic.hpp"

namespace dd {

enum class SequenceKind { Free, Hahn, Periodic, Udd, Cdd };

inline std::string to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::Free: return "free";
    case SequenceKind::Hahn: return "hahn";
    case SequenceKind::Periodic: return "periodic";
    case SequenceKind::Udd: return "udd";
    case SequenceKind::Cdd: return "cdd";
  }
  throw std::logic_error("unreachable");
}

inline SequenceKind sequence_kind_from_string(const std::string& s) {
  if (s == "free") return SequenceKind::Free;
  if (s == "hahn") return SequenceKind::Hahn;
  if (s == "periodic") return SequenceKind::Periodic;
  if (s == "udd") return SequenceKind::Udd;
  if (s == "cdd") return SequenceKind::Cdd;
  throw std::invalid_argument("unknown sequence kind: " + s);
}

/// A pulse sequence stored as the strictly positive delay intervals
/// tau_1..tau_{n+1} between ideal pi pulses; pulse times are derived.
/// A trailing pulse at the very end of the sequence flips the final state
/// but leaves the echo magnitude unchanged, so it is kept as metadata.
struct PulseSequence {
  SequenceKind kind = SequenceKind::Free;
  int order = 0;  // pulse count for udd/periodic, concatenation level for cdd
  double total_time = 0.0;
  std::vector<double> intervals;
  bool trailing_pulse = false;

  int pulse_count() const { return static_cast<int>(intervals.size()) - 1; }

  /// Normalized interior pulse instants in (0,1), plus 1 if a trailing pulse
  /// is present; strictly increasing.
  std::vector<double> pulse_times() const {
    std::vector<double> times;
    times.reserve(intervals.size());
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < intervals.size(); ++j) {
      acc += intervals[j];
      times.push_back(acc / total_time);
    }
    if (trailing_pulse) times.push_back(1.0);
    return times;
  }

  void validate() const {
    if (total_time <= 0.0) throw std::invalid_argument("PulseSequence: total_time must be > 0");
    if (intervals.empty()) throw std::invalid_argument("PulseSequence: no intervals");
    double sum = 0.0;
    for (double tau : intervals) {
      if (!(tau > 0.0)) throw std::invalid_argument("PulseSequence: intervals must be > 0");
      sum += tau;
    }
    if (std::abs(sum - total_time) > 1e-12 * total_time)
      throw std::invalid_argument("PulseSequence: intervals do not sum to total_time");
  }
};

/// Intervals of the n-pulse UDD sequence,
/// tau_j = [cos(pi (j-1)/(n+1)) - cos(pi j/(n+1))] * t / 2.
inline PulseSequence udd_intervals(int n, double t) {
  if (n < 0) throw std::invalid_argument("udd_intervals: pulse count must be >= 0");
  if (!(t > 0.0)) throw std::invalid_argument("udd_intervals: total time must be > 0");
  PulseSequence seq;
  seq.kind = SequenceKind::Udd;
  seq.order = n;
  seq.total_time = t;
  seq.intervals.reserve(static_cast<std::size_t>(n) + 1);
  for (int j = 1; j <= n + 1; ++j) {
    const double a = M_PI * (j - 1) / (n + 1);
    const double b = M_PI * j / (n + 1);
    seq.intervals.push_back(0.5 * (std::cos(a) - std::cos(b)) * t);
  }
  return seq;
}

/// CPMG-style symmetric placement (t/2n, t/n, ..., t/n, t/2n); the negative
/// control against UDD in optimality experiments.
inline PulseSequence periodic_intervals(int n, double t) {
  if (n < 1) throw std::invalid_argument("periodic_intervals: pulse count must be >= 1");
  if (!(t > 0.0)) throw std::invalid_argument("periodic_intervals: total time must be > 0");
  PulseSequence seq;
  seq.kind = SequenceKind::Periodic;
  seq.order = n;
  seq.total_time = t;
  seq.intervals.assign(static_cast<std::size_t>(n) + 1, t / n);
  seq.intervals.front() = t / (2.0 * n);
  seq.intervals.back() = t / (2.0 * n);
  return seq;
}

inline PulseSequence hahn_sequence(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("hahn_sequence: total time must be > 0");
  PulseSequence seq;
  seq.kind = SequenceKind::Hahn;
  seq.order = 1;
  seq.total_time = t;
  seq.intervals = {0.5 * t, 0.5 * t};
  return seq;
}

inline PulseSequence free_evolution(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("free_evolution: total time must be > 0");
  PulseSequence seq;
  seq.kind = SequenceKind::Free;
  seq.order = 0;
  seq.total_time = t;
  seq.intervals = {t};
  return seq;
}

namespace detail {

/// Literal CDD recursion p_l = p_{l-1} pi p_{l-1} pi over [lo, hi), emitting
/// pulse times (with multiplicity, nondecreasing) into out.
inline void cdd_literal_pulses(int level, const mpq_class& lo, const mpq_class& hi,
                               std::vector<mpq_class>& out) {
  if (level == 0) return;
  const mpq_class mid = (lo + hi) / 2;
  cdd_literal_pulses(level - 1, lo, mid, out);
  out.push_back(mid);
  cdd_literal_pulses(level - 1, mid, hi, out);
  out.push_back(hi);
}

}  // namespace detail

/// Interior pulse times of CDD level l as exact fractions of t, after
/// cancelling adjacent pairs of simultaneous pi pulses; the parity of the
/// multiplicity at time 1 decides the trailing pulse.
struct CddExactPulses {
  std::vector<mpq_class> interior;  // strictly increasing, in (0, 1)
  bool trailing = false;
};

inline CddExactPulses cdd_exact_pulses(int level) {
  if (level < 0) throw std::invalid_argument("cdd_exact_pulses: level must be >= 0");
  std::vector<mpq_class> raw;
  detail::cdd_literal_pulses(level, mpq_class(0), mpq_class(1), raw);
  CddExactPulses result;
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t j = i;
    while (j < raw.size() && raw[j] == raw[i]) ++j;
    if ((j - i) % 2 == 1) {
      if (raw[i] == 1)
        result.trailing = true;
      else
        result.interior.push_back(raw[i]);
    }
    i = j;
  }
  return result;
}

/// Exact interval fractions tau_j / t. UDD intervals are irrational for
/// general n and are exposed through udd_interval_element instead.
inline std::vector<mpq_class> exact_interval_fractions(SequenceKind kind, int order) {
  switch (kind) {
    case SequenceKind::Free:
      return {mpq_class(1)};
    case SequenceKind::Hahn:
      return {mpq_class(1, 2), mpq_class(1, 2)};
    case SequenceKind::Periodic: {
      if (order < 1) throw std::invalid_argument("periodic order must be >= 1");
      std::vector<mpq_class> f(static_cast<std::size_t>(order) + 1, mpq_class(1, order));
      f.front() = mpq_class(1, 2 * order);
      f.back() = mpq_class(1, 2 * order);
      return f;
    }
    case SequenceKind::Cdd: {
      const CddExactPulses pulses = cdd_exact_pulses(order);
      std::vector<mpq_class> f;
      mpq_class prev(0);
      for (const auto& p : pulses.interior) {
        f.push_back(p - prev);
        prev = p;
      }
      f.push_back(mpq_class(1) - prev);
      return f;
    }
    case SequenceKind::Udd:
      throw std::invalid_argument("UDD intervals are not rational; use udd_interval_element");
  }
  throw std::logic_error("unreachable");
}

/// Exact 4*tau_j/t ring elements for the n-pulse UDD sequence.
inline std::vector<Cyclotomic> udd_exact_intervals(int n) {
  std::vector<Cyclotomic> elems;
  elems.reserve(static_cast<std::size_t>(n) + 1);
  for (int j = 1; j <= n + 1; ++j) elems.push_back(udd_interval_element(j, n));
  return elems;
}

/// Builds the literal CDD recursion as a timed pulse list, cancels pairs of
/// simultaneous pi pulses, and merges the resulting zero-length gaps.
inline PulseSequence cdd_intervals(int level, double t) {
  if (level < 0) throw std::invalid_argument("cdd_intervals: level must be >= 0");
  if (!(t > 0.0)) throw std::invalid_argument("cdd_intervals: total time must be > 0");
  const CddExactPulses pulses = cdd_exact_pulses(level);
  PulseSequence seq;
  seq.kind = SequenceKind::Cdd;
  seq.order = level;
  seq.total_time = t;
  seq.trailing_pulse = pulses.trailing;
  mpq_class prev(0);
  for (const auto& p : pulses.interior) {
    seq.intervals.push_back(mpq_class(p - prev).get_d() * t);
    prev = p;
  }
  seq.intervals.push_back(mpq_class(mpq_class(1) - prev).get_d() * t);
  return seq;
}

/// Factory over all generators. `order` is the pulse count for udd/periodic
/// and the concatenation level for cdd; hahn and free ignore it.
inline PulseSequence make_sequence(SequenceKind kind, int order, double t) {
  switch (kind) {
    case SequenceKind::Free: return free_evolution(t);
    case SequenceKind::Hahn: return hahn_sequence(t);
    case SequenceKind::Periodic: return periodic_intervals(order, t);
    case SequenceKind::Udd: return udd_intervals(order, t);
    case SequenceKind::Cdd: return cdd_intervals(order, t);
  }
  throw std::logic_error("unreachable");
}

}  // namespace dd
