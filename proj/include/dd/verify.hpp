#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dd/common.hpp"
#include "dd/sequence.hpp"
#include "dd/words.hpp"

namespace dd {

enum class VerifyStatus { Certified, Falsified, Inconclusive };

inline std::string to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::Certified: return "certified";
    case VerifyStatus::Falsified: return "falsified";
    case VerifyStatus::Inconclusive: return "inconclusive";
  }
  throw std::logic_error("unreachable");
}

/// Concrete nonzero coefficient, reproducible from (word, backend, sequence).
struct WitnessInfo {
  std::string word;
  int order = 0;
  std::string value;      // exact coefficient vector / rational, or float value
  double numeric = 0.0;   // |coefficient| evaluated numerically
};

struct WordRecord {
  std::string word;
  int order = 0;
  bool is_zero = false;
  std::string value;
};

struct VerifyOptions {
  int workers = 0;              // 0: hardware concurrency
  double time_budget_s = 0.0;   // 0: unlimited; exceeding it yields Inconclusive
  std::vector<WordRecord>* word_log = nullptr;
};

struct VerificationReport {
  std::string backend;          // "exact-cyclotomic", "exact-rational", "float"
  std::string sequence_label;
  int order_n = 0;              // sequence order parameter
  int max_order = 0;            // requested expansion depth
  int max_order_checked = 0;    // fully completed expansion depth
  VerifyStatus status = VerifyStatus::Inconclusive;
  std::optional<WitnessInfo> witness;
  std::uint64_t words_checked = 0;
  double wall_time_s = 0.0;
  double tolerance = 0.0;       // float backend only
};

namespace detail {

struct WordOutcome {
  bool is_zero = true;
  std::string value;
  double numeric = 0.0;
};

/// Runs the ascending-length word sweep shared by all backends. `eval` is
/// called for odd-weight words only; even-weight coefficients vanish
/// identically and are short-circuited here. Words are distributed over
/// workers and merged in lexicographic order, so reports are deterministic.
template <typename Eval>
VerificationReport run_verification(std::string backend, std::string label, int order_n,
                                    int max_order, const VerifyOptions& opt, Eval&& eval) {
  if (max_order < 1) throw std::invalid_argument("verification: max_order must be >= 1");
  if (max_order > 20) throw ResourceError("verification: max_order > 20 unsupported");

  const auto started = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };

  VerificationReport report;
  report.backend = std::move(backend);
  report.sequence_label = std::move(label);
  report.order_n = order_n;
  report.max_order = max_order;

  int worker_count = opt.workers;
  if (worker_count <= 0)
    worker_count = static_cast<int>(std::thread::hardware_concurrency());
  if (worker_count < 1) worker_count = 1;

  for (int m = 1; m <= max_order; ++m) {
    std::vector<OperatorWord> odd_words;
    odd_words.reserve(1u << (m - 1));
    for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
      if (__builtin_popcount(bits) % 2 == 1) odd_words.emplace_back(m, bits);
    }

    std::vector<WordOutcome> outcomes(odd_words.size());
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> expired{false};

    auto work = [&] {
      for (;;) {
        if (expired.load(std::memory_order_relaxed)) return;
        const std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
        if (i >= odd_words.size()) return;
        if (opt.time_budget_s > 0.0 && elapsed() > opt.time_budget_s) {
          expired.store(true, std::memory_order_relaxed);
          return;
        }
        outcomes[i] = eval(odd_words[i]);
      }
    };

    if (worker_count == 1 || odd_words.size() < 2) {
      work();
    } else {
      std::vector<std::thread> pool;
      const int spawn = std::min<int>(worker_count, static_cast<int>(odd_words.size()));
      pool.reserve(static_cast<std::size_t>(spawn));
      for (int w = 0; w < spawn; ++w) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }

    if (expired.load()) {
      report.status = VerifyStatus::Inconclusive;
      report.max_order_checked = m - 1;
      report.wall_time_s = elapsed();
      return report;
    }

    report.words_checked += (1u << m);  // exhaustive per length, before the parity shortcut

    if (opt.word_log) {
      std::size_t next_odd = 0;
      for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
        OperatorWord w(m, bits);
        if (w.weight() % 2 == 0) {
          opt.word_log->push_back({w.str(), m, true, "0 (even weight)"});
        } else {
          const auto& o = outcomes[next_odd++];
          opt.word_log->push_back({w.str(), m, o.is_zero, o.value});
        }
      }
    }

    for (std::size_t i = 0; i < odd_words.size(); ++i) {
      if (!outcomes[i].is_zero) {
        report.status = VerifyStatus::Falsified;
        report.max_order_checked = m;
        report.witness =
            WitnessInfo{odd_words[i].str(), m, outcomes[i].value, outcomes[i].numeric};
        report.wall_time_s = elapsed();
        return report;
      }
    }
  }

  report.status = VerifyStatus::Certified;
  report.max_order_checked = max_order;
  report.wall_time_s = elapsed();
  return report;
}

}  // namespace detail

/// Exact certification that the n-pulse UDD sequence annihilates every
/// operator-word coefficient of Delta up to the requested expansion order.
/// Zero decisions reduce modulo Phi_{2(n+1)}; there is no tolerance.
inline VerificationReport verify_udd(int n, int max_order, const VerifyOptions& opt = {}) {
  if (n < 1) throw std::invalid_argument("verify_udd: order must be >= 1");
  return detail::run_verification(
      "exact-cyclotomic", "udd", n, max_order, opt, [n](const OperatorWord& word) {
        const auto coeff = udd_word_coefficient(word, n);
        detail::WordOutcome out;
        out.is_zero = coeff.value.is_zero();
        if (!out.is_zero) {
          out.value = coeff.value.to_string();
          out.numeric = std::abs(coeff.value.evaluate());
        }
        return out;
      });
}

/// Exact verification for sequences with rational interval fractions
/// (CDD, periodic, Hahn, free); returns the first falsifying word if any.
inline VerificationReport verify_sequence_rational(const std::vector<mpq_class>& fractions,
                                                   int max_order, const VerifyOptions& opt = {},
                                                   const std::string& label = "rational") {
  for (const auto& f : fractions)
    if (f <= 0) throw std::invalid_argument("verify_sequence_rational: intervals must be > 0");
  const int n = static_cast<int>(fractions.size()) - 1;
  return detail::run_verification(
      "exact-rational", label, n, max_order, opt, [&fractions](const OperatorWord& word) {
        const auto coeff = rational_word_coefficient(word, fractions);
        detail::WordOutcome out;
        out.is_zero = (coeff.value == 0);
        if (!out.is_zero) {
          out.value = coeff.value.get_str();
          out.numeric = std::abs(coeff.value.get_d());
        }
        return out;
      });
}

/// Floating-point verification: a coefficient counts as zero when its
/// magnitude falls below tolerance times the total magnitude of the
/// enumerated terms.
inline VerificationReport verify_sequence_float(const std::vector<double>& fractions,
                                                int max_order, double tolerance,
                                                const VerifyOptions& opt = {},
                                                const std::string& label = "float") {
  if (!(tolerance > 0.0)) throw std::invalid_argument("verify_sequence_float: bad tolerance");
  const int n = static_cast<int>(fractions.size()) - 1;
  auto report = detail::run_verification(
      "float", label, n, max_order, opt, [&fractions, tolerance](const OperatorWord& word) {
        const auto coeff = float_word_coefficient(word, fractions);
        detail::WordOutcome out;
        out.is_zero = std::abs(coeff.value) < tolerance * coeff.magnitude;
        if (!out.is_zero) {
          out.value = std::to_string(coeff.value);
          out.numeric = std::abs(coeff.value);
        }
        return out;
      });
  report.tolerance = tolerance;
  return report;
}

/// Float extension of verify_udd to orders where exact enumeration is
/// impractical.
inline VerificationReport verify_udd_float(int n, int max_order, double tolerance,
                                           const VerifyOptions& opt = {}) {
  if (n < 1) throw std::invalid_argument("verify_udd_float: order must be >= 1");
  auto report = verify_sequence_float(udd_intervals(n, 1.0).intervals, max_order, tolerance,
                                      opt, "udd");
  report.order_n = n;
  return report;
}

}  // namespace dd
