#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gtds/analysis.hpp"
#include "gtds/json_io.hpp"

namespace gtds::commands {

struct RunOptions {
  /// Largest q^n (or q for univariate sweeps) a full table may cover.
  std::uint64_t max_domain = kMaxFullSweep;
  /// Slack for bound comparisons.
  double tolerance = kBoundSlack;
  std::uint64_t seed = 0;
  /// Key matrices sampled by keyed permutation checks.
  std::size_t samples = 10;
  /// Used when a spec carries no "field".
  std::optional<Field> field;
};

/// CSV text (may be empty) and a JSON summary. `violations` counts failed
/// checks and drives the exit code.
struct RunResult {
  std::string csv;
  io::json summary;
  std::uint64_t violations = 0;
};

/// Parses and validates a GTDS or cipher spec; returns a short description.
std::string validate(const io::json& spec, const RunOptions& opts = {});

/// DDT of a GTDS (with theorem and corollary bounds when they apply) or of a
/// cipher under `keys` (zero keys when absent).
RunResult ddt(const io::json& spec, const io::json* keys, const RunOptions& opts = {});
/// Correlation table, same inputs as ddt().
RunResult corr(const io::json& spec, const io::json* keys, const RunOptions& opts = {});
/// Both sweeps of a GTDS against its bounds, plus the Parseval sum.
RunResult bounds(const io::json& spec, const RunOptions& opts = {});
/// {"field", "f"}: every a, b != 0 against the Weil bound.
RunResult weil(const io::json& spec, const RunOptions& opts = {});
RunResult trail_lp(const io::json& spec, const io::json* keys, const io::json& trail,
                   const RunOptions& opts = {});
/// {"field", "f"} univariate certificate; a GTDS exhaustive bijection and
/// inversion check; a cipher under `keys`, or under `samples` random keys.
RunResult permcheck(const io::json& spec, const io::json* keys, const RunOptions& opts = {});

}  // namespace gtds::commands
