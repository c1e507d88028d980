#pragma once

#include <nlohmann/json.hpp>

#include "uconvex/barycenters.hpp"
#include "uconvex/convexity.hpp"
#include "uconvex/report.hpp"
#include "uconvex/sequences.hpp"
#include "uconvex/spaces.hpp"
#include "uconvex/transport.hpp"

namespace uconvex {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "uconvex/1";

// Coordinate points are arrays; cone points are {"dir": [...], "r": t}.
Json to_json(const Point& x);
Point point_from_json(const SpaceHandle& s, const Json& j);
std::vector<Point> points_from_json(const SpaceHandle& s, const Json& j);

// {"points": [...], "weights": [...]}; weights default to uniform.
Json to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const SpaceHandle& s, const Json& j);

// {"kind": "orthonormal" | "explicit" | "constant" | "alternating" | "convergent", ...}
SequenceSpec sequence_from_json(const SpaceHandle& s, const Json& j);

Json to_json(const CheckReport& r);
Json to_json(const CouplingPlan& plan);
Json to_json(const ModulusTable& t);
Json to_json(const BarycenterResult& r);

}  // namespace uconvex
