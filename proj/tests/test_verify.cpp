#include <catch2/catch_amalgamated.hpp>

#include "dd/sequence.hpp"
#include "dd/verify.hpp"

using namespace dd;

namespace {

std::vector<double> to_doubles(const std::vector<mpq_class>& fractions) {
  std::vector<double> out;
  out.reserve(fractions.size());
  for (const auto& f : fractions) out.push_back(f.get_d());
  return out;
}

}  // namespace

TEST_CASE("hahn certifies first order and falsifies second, with witness") {
  const auto fractions = exact_interval_fractions(SequenceKind::Hahn, 1);
  SECTION("order 1 certified") {
    const auto report = verify_sequence_rational(fractions, 1, {}, "hahn");
    REQUIRE(report.status == VerifyStatus::Certified);
    REQUIRE(report.max_order_checked == 1);
    REQUIRE(report.words_checked == 2);
  }
  SECTION("order 2 falsified at the lexicographically first odd word") {
    const auto report = verify_sequence_rational(fractions, 2, {}, "hahn");
    REQUIRE(report.status == VerifyStatus::Falsified);
    REQUIRE(report.witness.has_value());
    REQUIRE(report.witness->order == 2);
    REQUIRE(report.witness->word == "01");
    REQUIRE(report.witness->value == "1/2");  // 2! * coefficient of X0 X1 in U+
  }
}

TEST_CASE("udd certification for small orders, exact backend") {
  for (int n = 1; n <= 5; ++n) {
    const auto report = verify_udd(n, n);
    INFO("n = " << n);
    REQUIRE(report.status == VerifyStatus::Certified);
    REQUIRE(report.max_order_checked == n);
  }
}

TEST_CASE("udd does not cancel order n+1") {
  for (int n = 1; n <= 5; ++n) {
    const auto report = verify_udd(n, n + 1);
    INFO("n = " << n);
    REQUIRE(report.status == VerifyStatus::Falsified);
    REQUIRE(report.witness.has_value());
    REQUIRE(report.witness->order == n + 1);
  }
}

TEST_CASE("periodic sequences are falsified where they must be") {
  SECTION("periodic 2 coincides with UDD-2 through order 2, fails at 3") {
    const auto fr = exact_interval_fractions(SequenceKind::Periodic, 2);
    REQUIRE(verify_sequence_rational(fr, 2).status == VerifyStatus::Certified);
    const auto report = verify_sequence_rational(fr, 3);
    REQUIRE(report.status == VerifyStatus::Falsified);
    REQUIRE(report.witness->order == 3);
  }
  SECTION("periodic 3 fails at order 2") {
    const auto report =
        verify_sequence_rational(exact_interval_fractions(SequenceKind::Periodic, 3), 3);
    REQUIRE(report.status == VerifyStatus::Falsified);
    REQUIRE(report.witness->order == 2);
  }
  SECTION("periodic 4 fails at order <= 3") {
    const auto report =
        verify_sequence_rational(exact_interval_fractions(SequenceKind::Periodic, 4), 4);
    REQUIRE(report.status == VerifyStatus::Falsified);
    REQUIRE(report.witness->order <= 3);
  }
}

TEST_CASE("float backend agrees with the exact backend") {
  SECTION("udd n=3 certified by both") {
    const auto exact = verify_udd(3, 3);
    const auto fl = verify_udd_float(3, 3, 1e-9);
    REQUIRE(exact.status == VerifyStatus::Certified);
    REQUIRE(fl.status == VerifyStatus::Certified);
  }
  SECTION("periodic n=3 falsified at the same word and order") {
    const auto fr = exact_interval_fractions(SequenceKind::Periodic, 3);
    const auto exact = verify_sequence_rational(fr, 3);
    const auto fl = verify_sequence_float(to_doubles(fr), 3, 1e-9);
    REQUIRE(exact.status == VerifyStatus::Falsified);
    REQUIRE(fl.status == VerifyStatus::Falsified);
    REQUIRE(fl.witness->word == exact.witness->word);
    REQUIRE(fl.witness->order == exact.witness->order);
  }
  SECTION("cdd level 2 behaves like udd 2 under the float backend") {
    const auto fr = exact_interval_fractions(SequenceKind::Cdd, 2);
    REQUIRE(verify_sequence_float(to_doubles(fr), 2, 1e-9).status == VerifyStatus::Certified);
  }
}

TEST_CASE("multithreaded verification is deterministic") {
  VerifyOptions serial;
  serial.workers = 1;
  VerifyOptions parallel;
  parallel.workers = 4;
  const auto a = verify_udd(4, 5, serial);
  const auto b = verify_udd(4, 5, parallel);
  REQUIRE(a.status == b.status);
  REQUIRE(a.status == VerifyStatus::Falsified);
  REQUIRE(a.witness->word == b.witness->word);
  REQUIRE(a.witness->value == b.witness->value);
  REQUIRE(a.words_checked == b.words_checked);
}

TEST_CASE("time budget surfaces as inconclusive") {
  VerifyOptions opt;
  opt.time_budget_s = 1e-9;  // expire immediately
  const auto report = verify_udd(6, 6, opt);
  REQUIRE(report.status == VerifyStatus::Inconclusive);
  REQUIRE(report.max_order_checked < 6);
}

TEST_CASE("word log records the exhaustive sweep") {
  std::vector<WordRecord> log;
  VerifyOptions opt;
  opt.word_log = &log;
  const auto report = verify_udd(2, 2, opt);
  REQUIRE(report.status == VerifyStatus::Certified);
  REQUIRE(log.size() == 2 + 4);  // 2^1 + 2^2 words
  int even_zero = 0;
  for (const auto& rec : log)
    if (rec.value == "0 (even weight)") ++even_zero;
  REQUIRE(even_zero == 3);  // "0", "00", "11"
}

TEST_CASE("invalid arguments are rejected") {
  REQUIRE_THROWS_AS(verify_udd(0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(verify_udd(3, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(verify_udd(3, 21), ResourceError);
  REQUIRE_THROWS_AS(verify_sequence_float({0.5, 0.5}, 2, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(verify_sequence_rational({mpq_class(-1, 2)}, 1), std::invalid_argument);
}
