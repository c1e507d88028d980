#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "uconvex/spaces.hpp"

namespace uconvex {

enum class CheckStatus { pass, fail, inconclusive };

const char* to_string(CheckStatus status);

// Outcome of a randomized or enumerated property check. `worst` is the
// largest observed excess (lhs - rhs of the checked inequality), reported on
// pass as well; `witness` holds the configuration that produced it.
struct CheckReport {
  std::string property;
  std::string p;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::vector<Point> witness;
  CheckStatus status = CheckStatus::pass;
  std::map<std::string, double> metrics;
  std::map<std::string, std::vector<double>> series;
  std::vector<std::string> notes;

  bool passed() const { return status == CheckStatus::pass; }

  // Records one evaluated configuration with the given excess.
  void observe(double excess, double tol, const std::vector<Point>& config) {
    ++samples;
    if (excess > tol) ++violations;
    if (excess > worst) {
      worst = excess;
      witness = config;
    }
  }

  // Merges another report over disjoint samples; ties keep this report's witness.
  void merge(const CheckReport& other) {
    samples += other.samples;
    violations += other.violations;
    if (other.worst > worst) {
      worst = other.worst;
      witness = other.witness;
    }
  }

  // Sets status from the violation count unless already inconclusive.
  void finalize() {
    if (status == CheckStatus::inconclusive) return;
    status = violations == 0 ? CheckStatus::pass : CheckStatus::fail;
  }
};

}  // namespace uconvex
