#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dncone {

// x^alpha
struct PurePower {
  double alpha = 0.0;
};

// x^alpha (x + u)^{-beta}
struct PowerShift {
  double alpha = 0.0;
  double beta = 0.0;
  double u = 1.0;
};

// A smooth function known through a derivative oracle. The oracle fills
// out[i] = f^(i)(x) for i < out.size(); at x == 0 it must return the
// one-sided limits.
struct ExpFamily {
  std::string name;
  std::function<void(double x, std::span<double> out)> derivatives;
};

// Values at sorted nonnegative nodes; linear in between.
struct Tabulated {
  std::vector<double> nodes;
  std::vector<double> values;
};

class ScalarFunc {
 public:
  using Variant = std::variant<PurePower, PowerShift, ExpFamily, Tabulated>;

  static ScalarFunc power(double alpha);
  static ScalarFunc power_shift(double alpha, double beta, double u);
  static ScalarFunc exp_family(std::string name, std::function<void(double, std::span<double>)> oracle);
  static ScalarFunc exp();
  static ScalarFunc cosh();
  static ScalarFunc tabulated(std::vector<double> nodes, std::vector<double> values);

  const Variant& variant() const noexcept { return v_; }
  bool has_derivatives() const noexcept { return !std::holds_alternative<Tabulated>(v_); }

  // f(x) for x >= 0. Throws DomainError outside the domain.
  double value(double x) const;
  // f^(r)(x) for x >= 0 (one-sided limit at 0). Throws
  // DerivativeUnavailable for tabulated functions and DomainError when the
  // limit is infinite.
  double derivative(int r, double x) const;

  // Canonical text form, stable across runs.
  std::string describe() const;

 private:
  explicit ScalarFunc(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

}  // namespace dncone
