#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uconvex/serialize.hpp"

namespace uconvex {

// Fully resolved invocation. Optional fields fall back to per-command defaults.
struct RunConfig {
  std::string command;
  std::optional<std::string> space;
  std::optional<std::string> p;
  std::vector<double> eps;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string format = "json";
  std::string out;
  unsigned threads = 1;
  std::optional<std::size_t> n;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> levels;
  std::optional<std::string> property;
  std::optional<std::string> pprime;
  std::optional<std::string> orlicz;
  std::optional<double> radius;
  // Parsed --input document (measures, sequences, points, and config defaults).
  Json input = Json::object();
};

struct RunResult {
  int exit_code = 0;
  std::string output;
};

inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;

const std::vector<std::string>& command_names();

// Fills unset config fields from same-named keys of `input` and the seed from
// UCONVEX_SEED.
void apply_defaults(RunConfig& cfg);

// Runs one command and renders its output; throws ConfigError on invalid input.
RunResult run(const RunConfig& cfg);

// Argument parsing, output writing and exit-code mapping.
int cli_main(int argc, char** argv);

}  // namespace uconvex
