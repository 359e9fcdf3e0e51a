#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qminv/linear_system.hpp"
#include "qminv/pipeline.hpp"
#include "qminv/search_state.hpp"

namespace qminv {

enum class StageMode {
  KnownT,  // fixed iteration count from a known solution count
  BBHT,    // randomized growing schedule, no count needed
};

enum class CountSource {
  Model,   // t_i = M^(n-i), N_i = M^(n-i+1)
  Oracle,  // t_i enumerated over the current support
};

struct StagePolicy {
  StageMode mode = StageMode::KnownT;
  CountSource counts = CountSource::Model;
  int max_retries = 0;         // extra attempts per stage after a failed flag
  double growth = 6.0 / 5.0;   // BBHT schedule factor, > 1
  int bbht_attempts = 30;      // BBHT rounds before a search gives up

  void validate() const;
};

struct StageRecord {
  int stage = 0;                             // 1-based
  GridIndex space_size = 0;                  // N_i: support size entering the stage
  std::optional<GridIndex> solution_count;   // t_i, when known
  std::uint64_t iterations = 0;              // KnownT: per attempt; BBHT: all rounds
  int attempts = 0;
  bool outcome = false;
  std::uint64_t oracle_calls = 0;            // Grover iterations actually executed
  std::uint64_t classical_checks = 0;        // BBHT sample verifications
  double success_probability = 0.0;          // before the final measurement
  GridIndex survivors = 0;                   // support size after collapse
};

struct SearchStats {
  std::string algorithm;
  std::vector<StageRecord> stages;
  std::uint64_t total_iterations = 0;
  std::uint64_t total_oracle_calls = 0;
  int retries = 0;
  std::optional<GridPoint> point;
  bool residual_ok = false;
  double model_failure_probability = 0.0;
  std::uint64_t op_count = 0;
  std::uint64_t uncompute_count = 0;

  /// Recomputes the totals from the stage records.
  void tally();
};

nlohmann::json to_json(const SearchStats& stats);

/// floor(pi/4 sqrt(N/t)); 0 when t/N >= 1/2.
std::uint64_t iterations_known_t(GridIndex N, GridIndex t);

/// C': f_row(x) = 0 for a 0-based row.
Predicate row_predicate(const LinearSystem& system, int row);
/// C: sum_i |f_i(x)| = 0.
Predicate system_predicate(const LinearSystem& system);

struct GroverOutcome {
  GridPoint point;
  StageRecord record;
  SearchState<double> state;  // after the flag measurement
};

/// Amplifies with iterations_known_t(support size, t), measures the flag and
/// samples a point from the collapsed state.
GroverOutcome grover_known_t(const SearchState<double>& state, const Predicate& pred, GridIndex t, Rng& rng);

struct BbhtOutcome {
  std::optional<GridPoint> point;
  StageRecord record;
};

/// Unknown-count search: m = 1; each round draws j uniform in [0, m), runs j
/// iterations from `state`, samples and checks the point classically, then
/// sets m = min(growth m, sqrt(N)). Gives up after policy.bbht_attempts.
BbhtOutcome bbht_search(const SearchState<double>& state, const Predicate& pred, Rng& rng, const StagePolicy& policy);

struct SolveResult {
  std::optional<GridPoint> point;
  SearchStats stats;
  RegisterLedger ledger;
  std::optional<SearchState<double>> final_state;

  bool solved() const { return point.has_value(); }
};

/// Whole-space search with oracle C and t = 1.
SolveResult naive_solve(const LinearSystem& system, Rng& rng, int max_retries = 0);

/// One stage per row: compute f_i, uncompute the products, amplify on
/// f_i = 0 over the surviving support and measure the flag. The final
/// point is sampled and checked against the exact residual.
SolveResult dimred_solve(const LinearSystem& system, const StagePolicy& policy, Rng& rng);

}  // namespace qminv
