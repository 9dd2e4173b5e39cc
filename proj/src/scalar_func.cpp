#include "dncone/scalar_func.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <type_traits>

#include "dncone/errors.hpp"
#include "dncone/scalar_calculus.hpp"

namespace dncone {

namespace {

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double falling(double alpha, int count) {
  double p = 1.0;
  for (int j = 0; j < count; ++j) p *= alpha - j;
  return p;
}

// lim_{x -> 0+} x^e for e = alpha - i, given the coefficient in front.
double power_limit_at_zero(double coeff, double e) {
  if (coeff == 0.0) return 0.0;
  if (e > 0.0) return 0.0;
  if (e == 0.0) return coeff;
  throw DomainError("derivative diverges at 0");
}

}  // namespace

ScalarFunc ScalarFunc::power(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InputError("power exponent must be finite and >= 0");
  return ScalarFunc(PurePower{alpha});
}

ScalarFunc ScalarFunc::power_shift(double alpha, double beta, double u) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InputError("power exponent must be finite and >= 0");
  if (!std::isfinite(beta)) throw InputError("beta must be finite");
  if (!(u > 0.0) || !std::isfinite(u)) throw InputError("shift u must be positive");
  return ScalarFunc(PowerShift{alpha, beta, u});
}

ScalarFunc ScalarFunc::exp_family(std::string name, std::function<void(double, std::span<double>)> oracle) {
  if (!oracle) throw InputError("derivative oracle is empty");
  return ScalarFunc(ExpFamily{std::move(name), std::move(oracle)});
}

ScalarFunc ScalarFunc::exp() {
  return exp_family("exp", [](double x, std::span<double> out) {
    const double e = std::exp(x);
    std::fill(out.begin(), out.end(), e);
  });
}

ScalarFunc ScalarFunc::cosh() {
  return exp_family("cosh", [](double x, std::span<double> out) {
    const double c = std::cosh(x);
    const double s = std::sinh(x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (i % 2 == 0) ? c : s;
  });
}

ScalarFunc ScalarFunc::tabulated(std::vector<double> nodes, std::vector<double> values) {
  if (nodes.size() != values.size() || nodes.empty())
    throw InputError("tabulated function needs matching, nonempty node and value lists");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || !std::isfinite(values[i])) throw InputError("tabulated data must be finite");
    if (nodes[i] < 0.0) throw DomainError("tabulated nodes must be >= 0");
    if (i > 0 && !(nodes[i] > nodes[i - 1])) throw InputError("tabulated nodes must be strictly increasing");
  }
  return ScalarFunc(Tabulated{std::move(nodes), std::move(values)});
}

double ScalarFunc::value(double x) const {
  if (!(x >= 0.0)) throw DomainError("function evaluated at negative or NaN argument");
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PurePower>) {
          return f.alpha == 0.0 ? 1.0 : std::pow(x, f.alpha);
        } else if constexpr (std::is_same_v<T, PowerShift>) {
          const double xa = f.alpha == 0.0 ? 1.0 : std::pow(x, f.alpha);
          return xa * std::pow(x + f.u, -f.beta);
        } else if constexpr (std::is_same_v<T, ExpFamily>) {
          double out[1];
          f.derivatives(x, out);
          return out[0];
        } else {
          const auto& xs = f.nodes;
          if (x < xs.front() || x > xs.back())
            throw DomainError("tabulated function evaluated outside its node range");
          auto it = std::lower_bound(xs.begin(), xs.end(), x);
          const auto k = static_cast<std::size_t>(it - xs.begin());
          if (*it == x) return f.values[k];
          const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
          return (1.0 - t) * f.values[k - 1] + t * f.values[k];
        }
      },
      v_);
}

double ScalarFunc::derivative(int r, double x) const {
  if (r < 0) throw InputError("derivative order must be >= 0");
  if (r == 0) return value(x);
  if (!(x >= 0.0)) throw DomainError("derivative evaluated at negative or NaN argument");
  return std::visit(
      [r, x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PurePower>) {
          const double c = falling(f.alpha, r);
          if (x == 0.0) return power_limit_at_zero(c, f.alpha - r);
          return c == 0.0 ? 0.0 : c * std::pow(x, f.alpha - r);
        } else if constexpr (std::is_same_v<T, PowerShift>) {
          if (x > 0.0) return lemma_derivative(f.alpha, f.beta, f.u, r, x);
          // x -> 0+: the i-th summand behaves like x^{alpha - i}.
          double sum = 0.0;
          double binom = 1.0;
          for (int i = 0; i <= r; ++i) {
            const double coeff = binom * std::pow(f.u, i) * falling(f.alpha, i) *
                                 falling(f.alpha - f.beta - i, r - i);
            sum += power_limit_at_zero(coeff, f.alpha - i);
            binom = binom * (r - i) / (i + 1);
          }
          return sum * std::pow(f.u, -(f.beta + r));
        } else if constexpr (std::is_same_v<T, ExpFamily>) {
          std::vector<double> out(static_cast<std::size_t>(r) + 1);
          f.derivatives(x, out);
          return out[static_cast<std::size_t>(r)];
        } else {
          throw DerivativeUnavailable("tabulated functions carry no derivatives");
        }
      },
      v_);
}

std::string ScalarFunc::describe() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PurePower>) {
          return "power(alpha=" + fmt_num(f.alpha) + ")";
        } else if constexpr (std::is_same_v<T, PowerShift>) {
          return "power_shift(alpha=" + fmt_num(f.alpha) + ";beta=" + fmt_num(f.beta) +
                 ";u=" + fmt_num(f.u) + ")";
        } else if constexpr (std::is_same_v<T, ExpFamily>) {
          return "family(" + f.name + ")";
        } else {
          return "tabulated(nodes=" + std::to_string(f.nodes.size()) + ")";
        }
      },
      v_);
}

}  // namespace dncone
