#include "uconvex/spaces.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "uconvex/error.hpp"

namespace uconvex {

const VectorPoint& as_vector(const Point& x) {
  if (const auto* v = std::get_if<VectorPoint>(&x)) return *v;
  throw DomainError("expected a coordinate point, got a cone point");
}

const ConePoint& as_cone(const Point& x) {
  if (const auto* c = std::get_if<ConePoint>(&x)) return *c;
  throw DomainError("expected a cone point, got a coordinate point");
}

std::vector<double> basis_vector(std::size_t dimension, std::size_t index) {
  if (index >= dimension) throw DomainError("basis index out of range");
  std::vector<double> e(dimension, 0.0);
  e[index] = 1.0;
  return e;
}

namespace {

void check_coords(std::span<const double> coords, std::size_t n, const char* what) {
  if (coords.size() != n) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (expected " << n << ", got " << coords.size() << ")";
    throw DomainError(msg.str());
  }
  for (double c : coords) {
    if (!std::isfinite(c)) throw DomainError(std::string(what) + ": non-finite coordinate");
  }
}

// Common base for R^n and l_p^n: linear segments are geodesics in both.
class CoordinateSpace : public MetricSpace {
 public:
  explicit CoordinateSpace(std::size_t n) : n_(n) {
    if (n == 0) throw DomainError("dimension must be >= 1");
  }

  std::size_t chart_dimension() const override { return n_; }

  void validate(const Point& x) const override { check_coords(as_vector(x).coords, n_, "point"); }

  Point geodesic_point(const Point& a, const Point& b, double t) const override {
    const auto& x = as_vector(a).coords;
    const auto& y = as_vector(b).coords;
    check_coords(x, n_, "geodesic endpoint");
    check_coords(y, n_, "geodesic endpoint");
    if (t <= 0.0) return a;
    if (t >= 1.0) return b;
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = x[i] + t * (y[i] - x[i]);
    return VectorPoint{std::move(out)};
  }

  bool geodesic_supported(const Point&, const Point&) const override { return true; }

  Point origin() const override { return VectorPoint{std::vector<double>(n_, 0.0)}; }

  std::vector<double> to_chart(const Point& x) const override { return as_vector(x).coords; }

  Point from_chart(std::span<const double> coords) const override {
    check_coords(coords, n_, "chart");
    return VectorPoint{std::vector<double>(coords.begin(), coords.end())};
  }

 protected:
  std::size_t n_;
};

class EuclideanSpace final : public CoordinateSpace {
 public:
  using CoordinateSpace::CoordinateSpace;

  SpaceKind kind() const override { return SpaceKind::euclidean; }
  std::string describe() const override { return "euclidean:" + std::to_string(n_); }

  double distance(const Point& a, const Point& b) const override {
    const auto& x = as_vector(a).coords;
    const auto& y = as_vector(b).coords;
    if (x.size() != n_ || y.size() != n_) throw DomainError("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double d = x[i] - y[i];
      s += d * d;
    }
    return std::sqrt(s);
  }

  // Uniform in the Euclidean ball.
  Point sample_point(Rng& rng, const Point& center, double radius) const override {
    const auto& c = as_vector(center).coords;
    std::normal_distribution<double> normal;
    std::vector<double> dir(n_);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& v : dir) {
        v = normal(rng);
        norm += v * v;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    const double r = radius * std::pow(uniform01(rng), 1.0 / static_cast<double>(n_));
    for (std::size_t i = 0; i < n_; ++i) dir[i] = c[i] + r * dir[i] / norm;
    return VectorPoint{std::move(dir)};
  }

  bool convexity_certified() const override { return true; }
};

class LpSpace final : public CoordinateSpace {
 public:
  LpSpace(std::size_t n, Exponent p) : CoordinateSpace(n), p_(p) {}

  SpaceKind kind() const override { return SpaceKind::lp; }
  std::string describe() const override {
    return "lp:" + std::to_string(n_) + ":" + p_.str();
  }

  double distance(const Point& a, const Point& b) const override {
    const auto& x = as_vector(a).coords;
    const auto& y = as_vector(b).coords;
    if (x.size() != n_ || y.size() != n_) throw DomainError("distance: dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    if (m == 0.0 || p_.is_infinite()) return m;
    const double p = p_.value();
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += std::pow(std::abs(x[i] - y[i]) / m, p);
    return m * std::pow(s, 1.0 / p);
  }

  // Uniform in the l_p ball by rejection from the enclosing cube; after 1000
  // rejections falls back to the inscribed cube of side 2 r n^{-1/p}.
  Point sample_point(Rng& rng, const Point& center, double radius) const override {
    const auto& c = as_vector(center).coords;
    std::uniform_real_distribution<double> cube(-radius, radius);
    std::vector<double> x(n_);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      for (std::size_t i = 0; i < n_; ++i) x[i] = c[i] + cube(rng);
      if (distance(VectorPoint{x}, center) <= radius) return VectorPoint{x};
    }
    const double shrink =
        p_.is_infinite() ? 1.0 : std::pow(static_cast<double>(n_), -1.0 / p_.value());
    for (std::size_t i = 0; i < n_; ++i) x[i] = c[i] + shrink * cube(rng);
    return VectorPoint{std::move(x)};
  }

  bool convexity_certified() const override { return !p_.is_infinite() && p_.value() > 1.0; }

 private:
  Exponent p_;
};

class ConeSpace final : public MetricSpace {
 public:
  explicit ConeSpace(SpaceHandle base) : base_(std::move(base)) {
    if (!base_) throw DomainError("cone needs a base space");
    if (base_->kind() == SpaceKind::cone) throw DomainError("cones over cones are not supported");
    n_ = base_->chart_dimension();
  }

  SpaceKind kind() const override { return SpaceKind::cone; }
  std::string describe() const override { return "cone:" + base_->describe(); }
  std::size_t chart_dimension() const override { return n_ + 1; }

  void validate(const Point& x) const override {
    const auto& c = as_cone(x);
    check_coords(c.direction, n_, "cone direction");
    if (!std::isfinite(c.radius) || c.radius < 0.0) throw DomainError("cone radius must be >= 0");
  }

  // Base angle clamped to pi.
  double angle(const std::vector<double>& x, const std::vector<double>& y) const {
    return std::min(std::numbers::pi, base_->distance(VectorPoint{x}, VectorPoint{y}));
  }

  double distance(const Point& a, const Point& b) const override {
    const auto& p = as_cone(a);
    const auto& q = as_cone(b);
    if (p.direction.size() != n_ || q.direction.size() != n_) {
      throw DomainError("distance: dimension mismatch");
    }
    if (p.radius == 0.0) return q.radius;
    if (q.radius == 0.0) return p.radius;
    // t^2 + t'^2 - 2 t t' cos(a), written to avoid cancellation for close points.
    const double half = std::sin(0.5 * angle(p.direction, q.direction));
    const double dr = p.radius - q.radius;
    return std::sqrt(dr * dr + 4.0 * p.radius * q.radius * half * half);
  }

  bool geodesic_supported(const Point& a, const Point& b) const override {
    const auto& p = as_cone(a);
    const auto& q = as_cone(b);
    if (p.radius == 0.0 || q.radius == 0.0) return true;
    return base_->distance(VectorPoint{p.direction}, VectorPoint{q.direction}) < std::numbers::pi;
  }

  // Planar unfolding: the pair is laid out in R^2 at polar coordinates
  // (t, 0) and (t', alpha); the Euclidean segment gives radius and sub-angle,
  // and the direction sits at the matching fraction of the base geodesic.
  Point geodesic_point(const Point& a, const Point& b, double s) const override {
    validate(a);
    validate(b);
    const auto& p = as_cone(a);
    const auto& q = as_cone(b);
    if (s <= 0.0) return cone_point(p.direction, p.radius);
    if (s >= 1.0) return cone_point(q.direction, q.radius);
    if (p.radius == 0.0 && q.radius == 0.0) return origin();
    if (p.radius == 0.0) return cone_point(q.direction, s * q.radius);
    if (q.radius == 0.0) return cone_point(p.direction, (1.0 - s) * p.radius);

    const double dbase = base_->distance(VectorPoint{p.direction}, VectorPoint{q.direction});
    if (dbase >= std::numbers::pi) {
      throw UnsupportedGeodesic("cone geodesic through the apex (base angle >= pi)");
    }
    if (dbase == 0.0) return cone_point(p.direction, (1.0 - s) * p.radius + s * q.radius);

    const double px = (1.0 - s) * p.radius + s * q.radius * std::cos(dbase);
    const double py = s * q.radius * std::sin(dbase);
    const double r = std::hypot(px, py);
    if (r == 0.0) return origin();
    const double theta = std::atan2(py, px);
    const double frac = std::clamp(theta / dbase, 0.0, 1.0);
    auto dir = base_->geodesic_point(VectorPoint{p.direction}, VectorPoint{q.direction}, frac);
    return cone_point(as_vector(dir).coords, r);
  }

  Point origin() const override { return ConePoint{std::vector<double>(n_, 0.0), 0.0}; }

  // With probability 1/32 the apex; otherwise a base direction drawn from the
  // base sampler within angle 1.2 of the center direction (pairwise angles stay
  // below pi) and a radius uniform in [t_c - r, t_c + r] clipped at 0.
  Point sample_point(Rng& rng, const Point& center, double radius) const override {
    const auto& c = as_cone(center);
    if (std::uniform_int_distribution<int>(0, 31)(rng) == 0) return origin();
    auto dir = base_->sample_point(rng, VectorPoint{c.direction}, 1.2);
    const double lo = std::max(0.0, c.radius - radius);
    const double hi = c.radius + radius;
    double t = lo + (hi - lo) * uniform01(rng);
    if (t <= 0.0) return origin();
    return cone_point(as_vector(dir).coords, t);
  }

  std::vector<double> to_chart(const Point& x) const override {
    const auto& c = as_cone(x);
    std::vector<double> out = c.direction;
    out.push_back(c.radius);
    return out;
  }

  Point from_chart(std::span<const double> coords) const override {
    check_coords(coords, n_ + 1, "cone chart");
    std::vector<double> dir(coords.begin(), coords.end() - 1);
    return cone_point(std::move(dir), std::max(0.0, coords.back()));
  }

  bool convexity_certified() const override { return base_->kind() == SpaceKind::euclidean; }

  const SpaceHandle& base() const { return base_; }

 private:
  SpaceHandle base_;
  std::size_t n_ = 0;
};

std::size_t parse_dimension(std::string_view text) {
  try {
    std::size_t used = 0;
    const long long n = std::stoll(std::string(text), &used);
    if (used != text.size() || n < 1) throw DomainError("bad dimension");
    return static_cast<std::size_t>(n);
  } catch (const std::logic_error&) {
    throw DomainError("cannot parse dimension '" + std::string(text) + "'");
  }
}

}  // namespace

SpaceHandle make_euclidean(std::size_t dimension) {
  return std::make_shared<EuclideanSpace>(dimension);
}

SpaceHandle make_lp(std::size_t dimension, Exponent p) {
  return std::make_shared<LpSpace>(dimension, p);
}

SpaceHandle make_cone(SpaceHandle base) { return std::make_shared<ConeSpace>(std::move(base)); }

SpaceHandle parse_space(std::string_view descriptor) {
  const auto colon = descriptor.find(':');
  const auto head = descriptor.substr(0, colon);
  const auto rest = colon == std::string_view::npos ? std::string_view{} : descriptor.substr(colon + 1);
  if (head == "euclidean") return make_euclidean(parse_dimension(rest));
  if (head == "lp") {
    const auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) throw DomainError("lp space needs 'lp:<n>:<p>'");
    return make_lp(parse_dimension(rest.substr(0, c2)), Exponent::parse(rest.substr(c2 + 1)));
  }
  if (head == "cone") {
    if (rest.empty()) throw DomainError("cone space needs a base, e.g. 'cone:euclidean:4'");
    return make_cone(parse_space(rest));
  }
  throw DomainError("unknown space '" + std::string(descriptor) + "'");
}

double distance(const SpaceHandle& s, const Point& a, const Point& b) { return s->distance(a, b); }

Point midpoint(const SpaceHandle& s, const Point& a, const Point& b) { return s->midpoint(a, b); }

Point geodesic_point(const SpaceHandle& s, const Point& a, const Point& b, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("geodesic parameter must lie in [0, 1]");
  return s->geodesic_point(a, b, t);
}

ConePoint cone_ray_projection(const SpaceHandle& cone, const ConePoint& q) {
  const auto* c = dynamic_cast<const ConeSpace*>(cone.get());
  if (c == nullptr) throw DomainError("cone_ray_projection needs a cone space");
  c->validate(q);
  const auto zero = std::vector<double>(q.direction.size(), 0.0);
  if (q.radius == 0.0) return ConePoint{zero, 0.0};
  const double ang = c->base()->distance(VectorPoint{q.direction}, VectorPoint{zero});
  if (ang > std::numbers::pi / 2 + 1e-12) {
    throw DomainError("cone_ray_projection: base angle exceeds pi/2");
  }
  return as_cone(cone_point(zero, q.radius * std::cos(ang)));
}

}  // namespace uconvex
