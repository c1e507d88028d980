#pragma once

#include <algorithm>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uconvex/means.hpp"
#include "uconvex/rng.hpp"

namespace uconvex {

// Coordinate point of R^n or l_p^n.
struct VectorPoint {
  std::vector<double> coords;
  friend bool operator==(const VectorPoint&, const VectorPoint&) = default;
};

// Element (x, t) of a Euclidean cone. Points with radius 0 are the apex and
// are stored with the base origin as direction.
struct ConePoint {
  std::vector<double> direction;
  double radius = 0.0;
  friend bool operator==(const ConePoint&, const ConePoint&) = default;
};

using Point = std::variant<VectorPoint, ConePoint>;

inline Point vec(std::vector<double> coords) { return VectorPoint{std::move(coords)}; }
// Builds a cone point; radius 0 is normalized to the apex (origin direction).
inline Point cone_point(std::vector<double> direction, double radius) {
  if (radius == 0.0) std::fill(direction.begin(), direction.end(), 0.0);
  return ConePoint{std::move(direction), radius};
}

// Checked alternative access; throw DomainError on a kind mismatch.
const VectorPoint& as_vector(const Point& x);
const ConePoint& as_cone(const Point& x);

enum class SpaceKind { euclidean, lp, cone };

// A geodesic metric space with a fixed midpoint map. Implementations are
// immutable and safe to share across threads.
class MetricSpace {
 public:
  virtual ~MetricSpace() = default;

  virtual SpaceKind kind() const = 0;
  // Round-trippable descriptor, e.g. "euclidean:3", "lp:2:1.5", "cone:euclidean:4".
  virtual std::string describe() const = 0;
  // Length of the coordinate chart.
  virtual std::size_t chart_dimension() const = 0;

  // Throws DomainError if `x` is not a point of this space.
  virtual void validate(const Point& x) const = 0;
  virtual double distance(const Point& a, const Point& b) const = 0;
  // Constant-speed geodesic from a (t = 0) to b (t = 1).
  virtual Point geodesic_point(const Point& a, const Point& b, double t) const = 0;
  Point midpoint(const Point& a, const Point& b) const { return geodesic_point(a, b, 0.5); }

  // Whether geodesic_point is defined for the pair.
  virtual bool geodesic_supported(const Point& a, const Point& b) const = 0;

  // Distinguished base point: the coordinate origin, or the cone apex.
  virtual Point origin() const = 0;
  // Random point within distance ~`radius` of `center`. Used by the property
  // samplers; the exact law is space-specific and documented in the README.
  virtual Point sample_point(Rng& rng, const Point& center, double radius) const = 0;

  // Coordinate chart used by derivative-free pattern search.
  virtual std::vector<double> to_chart(const Point& x) const = 0;
  virtual Point from_chart(std::span<const double> coords) const = 0;

  // Spaces in which d(., z)^p is known to be geodesically convex, so local
  // minima of the barycenter objectives are global.
  virtual bool convexity_certified() const = 0;
};

using SpaceHandle = std::shared_ptr<const MetricSpace>;

SpaceHandle make_euclidean(std::size_t dimension);
SpaceHandle make_lp(std::size_t dimension, Exponent p);
// Euclidean cone over a coordinate base space (euclidean or lp). Only
// Euclidean bases are certified.
SpaceHandle make_cone(SpaceHandle base);
// Parses a descriptor as produced by MetricSpace::describe().
SpaceHandle parse_space(std::string_view descriptor);

double distance(const SpaceHandle& s, const Point& a, const Point& b);
Point midpoint(const SpaceHandle& s, const Point& a, const Point& b);
Point geodesic_point(const SpaceHandle& s, const Point& a, const Point& b, double t);

// Projection of a cone point onto the central ray {(0, r)}: (0, r cos d(x, 0)).
// Requires d(x, 0) <= pi/2.
ConePoint cone_ray_projection(const SpaceHandle& cone, const ConePoint& q);

// Standard basis vector e_{index} (0-based) of R^dimension.
std::vector<double> basis_vector(std::size_t dimension, std::size_t index);

}  // namespace uconvex
