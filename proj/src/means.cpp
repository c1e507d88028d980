#include "uconvex/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "uconvex/error.hpp"

namespace uconvex {

Exponent Exponent::finite(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "exponent must be a finite real >= 1, got " << p;
    throw DomainError(msg.str());
  }
  return Exponent(p, false);
}

Exponent Exponent::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  try {
    std::size_t used = 0;
    const double p = std::stod(std::string(text), &used);
    if (used != text.size()) throw DomainError("trailing characters");
    return finite(p);
  } catch (const std::logic_error&) {
    throw DomainError("cannot parse exponent '" + std::string(text) + "'");
  }
}

double Exponent::value() const {
  if (infinite_) throw DomainError("exponent is infinite");
  return p_;
}

std::string Exponent::str() const {
  if (infinite_) return "inf";
  std::ostringstream out;
  out.precision(17);
  out << p_;
  return out.str();
}

bool operator<(const Exponent& a, const Exponent& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return a.value() < b.value();
}

double p_mean(Exponent p, double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("p_mean needs nonnegative arguments");
  const double hi = std::max(a, b);
  if (p.is_infinite()) return hi;
  if (hi == 0.0) return 0.0;
  const double q = p.value();
  if (q == 1.0) return 0.5 * (a + b);
  // Scale by the max to keep (a/hi)^q in [0, 1].
  const double s = 0.5 * std::pow(a / hi, q) + 0.5 * std::pow(b / hi, q);
  return hi * std::pow(s, 1.0 / q);
}

double p_mean(double p, double a, double b) { return p_mean(Exponent::finite(p), a, b); }

namespace {

void validate_orlicz(const std::string& name, const std::function<double(double)>& fn) {
  auto fail = [&](const std::string& why) {
    throw DomainError("Orlicz function '" + name + "' rejected: " + why);
  };
  if (std::abs(fn(1.0) - 1.0) > 1e-12) fail("L(1) != 1");
  if (!(fn(1e-9) < 1e-6)) fail("L(r) does not vanish as r -> 0");
  double prev = 0.0;
  double prev_r = 0.0;
  double prev_slope = 0.0;
  for (int k = 1; k <= 400; ++k) {
    const double r = 0.025 * k;
    const double v = fn(r);
    if (!std::isfinite(v) || v <= prev) fail("not strictly increasing");
    const double slope = (v - prev) / (r - prev_r);
    if (k > 1 && slope < prev_slope * (1.0 - 1e-9) - 1e-12) fail("not convex");
    prev_slope = slope;
    prev = v;
    prev_r = r;
  }
}

}  // namespace

OrliczFunction OrliczFunction::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("power Orlicz function needs p >= 1");
  std::ostringstream name;
  name.precision(17);
  name << "pow:" << p;
  return OrliczFunction(name.str(), [p](double r) { return std::pow(r, p); }, p);
}

OrliczFunction OrliczFunction::exp_minus_one() {
  const double denom = std::expm1(1.0);
  return OrliczFunction("exp-minus-one", [denom](double r) { return std::expm1(r) / denom; },
                        std::nullopt);
}

OrliczFunction OrliczFunction::custom(std::string name, std::function<double(double)> fn) {
  validate_orlicz(name, fn);
  return OrliczFunction(std::move(name), std::move(fn), std::nullopt);
}

OrliczFunction OrliczFunction::parse(std::string_view descriptor) {
  if (descriptor == "exp-minus-one") return exp_minus_one();
  if (descriptor.starts_with("pow:")) {
    const auto p = Exponent::parse(descriptor.substr(4));
    if (p.is_infinite()) throw DomainError("pow:inf is not an Orlicz function");
    return power(p.value());
  }
  throw DomainError("unknown Orlicz family '" + std::string(descriptor) + "'");
}

double OrliczFunction::operator()(double r) const {
  if (r <= 0.0) return 0.0;
  return fn_(r);
}

double OrliczFunction::inverse(double v) const {
  if (!(v >= 0.0)) throw DomainError("L^{-1} needs a nonnegative argument");
  if (v == 0.0) return 0.0;
  if (power_) return std::pow(v, 1.0 / *power_);
  double lo = 0.0;
  double hi = 1.0;
  while ((*this)(hi) < v) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw DomainError("L^{-1}: value out of range");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((*this)(mid) < v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

OrliczFunction OrliczFunction::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("L_lambda needs lambda > 0");
  std::ostringstream name;
  name.precision(17);
  name << descriptor_ << "/" << lambda;
  auto fn = fn_;
  return OrliczFunction(name.str(), [fn, lambda](double r) { return fn(r / lambda); },
                        std::nullopt);
}

double OrliczFunction::derivative(double r) const {
  if (power_) return *power_ * std::pow(r, *power_ - 1.0);
  const double h = 1e-6 * std::max(r, 1e-6);
  const double lo = std::max(0.0, r - h);
  return ((*this)(r + h) - (*this)(lo)) / (r + h - lo);
}

double l_mean(const OrliczFunction& L, double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("l_mean needs nonnegative arguments");
  if (a == b) return a;
  const double target = 0.5 * L(a) + 0.5 * L(b);
  // The inverse lies between min and max of the arguments.
  double lo = std::min(a, b);
  double hi = std::max(a, b);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (L(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double orlicz_gauge(const OrliczFunction& L, std::span<const double> values,
                    std::span<const double> weights) {
  if (values.size() != weights.size()) throw DomainError("orlicz_gauge: size mismatch");
  double vmax = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw DomainError("orlicz_gauge needs nonnegative values");
    vmax = std::max(vmax, v);
  }
  if (vmax == 0.0) return 0.0;
  auto g = [&](double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * L(values[i] / t);
    return s;
  };
  double hi = 2.0 * vmax;
  while (g(hi) > 1.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw DomainError("orlicz_gauge: no feasible scale");
  }
  double lo = std::numeric_limits<double>::epsilon() * vmax;
  while (g(lo) <= 1.0) {
    lo *= 0.5;
    if (lo == 0.0) return 0.0;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double orlicz_mean(const OrliczFunction& L, double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("orlicz_mean needs nonnegative arguments");
  const double values[2] = {a, b};
  const double weights[2] = {0.5, 0.5};
  return orlicz_gauge(L, values, weights);
}

}  // namespace uconvex
