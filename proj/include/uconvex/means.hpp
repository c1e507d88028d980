#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace uconvex {

// An exponent p in [1, inf]. Infinity is a distinguished state rather than a
// large float so that the max-mean stays exact.
class Exponent {
 public:
  static Exponent finite(double p);
  static Exponent infinity() { return Exponent(0.0, true); }
  // Accepts "inf", "infinity" or a real >= 1.
  static Exponent parse(std::string_view text);

  bool is_infinite() const { return infinite_; }
  // Finite value; throws DomainError for infinity.
  double value() const;
  std::string str() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent(double p, bool inf) : p_(p), infinite_(inf) {}
  double p_;
  bool infinite_;
};

bool operator<(const Exponent& a, const Exponent& b);

/// Power mean (a^p/2 + b^p/2)^(1/p); max(a, b) for p = inf.
double p_mean(Exponent p, double a, double b);
double p_mean(double p, double a, double b);

// Orlicz-type function L: (0, inf) -> (0, inf), strictly increasing, convex,
// L(1) = 1 and L(r) -> 0 as r -> 0. Extended continuously by L(0) = 0.
class OrliczFunction {
 public:
  static OrliczFunction power(double p);
  // L(r) = (e^r - 1) / (e - 1)
  static OrliczFunction exp_minus_one();
  // Arbitrary evaluator; the defining properties are checked on a sample grid.
  static OrliczFunction custom(std::string name, std::function<double(double)> fn);
  // CLI descriptor: "pow:<p>" or "exp-minus-one".
  static OrliczFunction parse(std::string_view descriptor);

  double operator()(double r) const;
  // L^{-1}(v) by bisection.
  double inverse(double v) const;
  // L_lambda(r) = L(r / lambda).
  OrliczFunction scaled(double lambda) const;
  // Central finite-difference derivative; used for descent weights.
  double derivative(double r) const;

  const std::string& descriptor() const { return descriptor_; }
  // Set for the power family; enables closed-form shortcuts in tests.
  std::optional<double> power_exponent() const { return power_; }

 private:
  OrliczFunction(std::string descriptor, std::function<double(double)> fn,
                 std::optional<double> power)
      : descriptor_(std::move(descriptor)), fn_(std::move(fn)), power_(power) {}
  std::string descriptor_;
  std::function<double(double)> fn_;
  std::optional<double> power_;
};

/// L-mean L^{-1}(L(a)/2 + L(b)/2).
double l_mean(const OrliczFunction& L, double a, double b);

/// Orlicz mean inf{t > 0 : L(a/t)/2 + L(b/t)/2 <= 1}.
double orlicz_mean(const OrliczFunction& L, double a, double b);

// Smallest t > 0 with sum_i w_i L(v_i / t) <= 1. Shared by orlicz_mean and the
// Orlicz-Wasserstein distance to a Dirac measure.
double orlicz_gauge(const OrliczFunction& L, std::span<const double> values,
                    std::span<const double> weights);

}  // namespace uconvex
