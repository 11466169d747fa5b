#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dd {

inline constexpr std::string_view kVersion = "0.1.0";

/// Thrown when a computation exceeds a hard size or budget limit.
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when all requested data sits below a numeric noise floor.
struct UnderflowError : std::runtime_error {
  explicit UnderflowError(const std::string& what) : std::runtime_error(what) {}
};

/// Compensated (Kahan) accumulator for long floating-point sums.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace dd
