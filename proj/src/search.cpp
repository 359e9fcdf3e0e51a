#include "qminv/search.hpp"

#include <algorithm>
#include <cmath>

#include "qminv/numeric.hpp"

namespace qminv {

namespace {

GridIndex count_marked(const std::vector<bool>& marks) {
  return static_cast<GridIndex>(std::count(marks.begin(), marks.end(), true));
}

GridIndex power(Integer M, int e) {
  GridIndex out = 1;
  for (int i = 0; i < e; ++i) out *= static_cast<GridIndex>(M);
  return out;
}

nlohmann::json point_json(const GridPoint& x) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) arr.push_back(x[i]);
  return arr;
}

// Flag-measurement variant of the BBHT schedule, used between stages where
// the collapsed superposition (not a sample) is carried forward.
struct BbhtStage {
  std::optional<SearchState<double>> collapsed;
  std::uint64_t oracle_calls = 0;
  int rounds = 0;
  double last_probability = 0.0;
};

BbhtStage bbht_stage(const SearchState<double>& start, const std::vector<bool>& marks, Rng& rng,
                     const StagePolicy& policy) {
  BbhtStage out;
  const double cap = std::sqrt(static_cast<double>(start.size()));
  double m = 1.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int round = 0; round < policy.bbht_attempts; ++round) {
    const auto j = static_cast<std::uint64_t>(unit(rng) * m);
    SearchState<double> amplified = amplify(start, marks, j);
    out.oracle_calls += j;
    out.rounds = round + 1;
    out.last_probability = success_probability(amplified, marks);
    if (out.last_probability > kImpossibleBranchTolerance) {
      FlagMeasurement<double> flag = measure_flag(amplified, marks, rng);
      if (flag.outcome) {
        out.collapsed = std::move(flag.state);
        return out;
      }
    }
    m = std::min(policy.growth * m, cap);
  }
  return out;
}

}  // namespace

void StagePolicy::validate() const {
  if (!(growth > 1.0)) throw std::invalid_argument("BBHT growth factor must exceed 1");
  if (max_retries < 0) throw std::invalid_argument("max retries must be non-negative");
  if (bbht_attempts < 1) throw std::invalid_argument("BBHT needs at least one round");
}

void SearchStats::tally() {
  total_iterations = 0;
  total_oracle_calls = 0;
  retries = 0;
  for (const StageRecord& s : stages) {
    total_iterations += s.iterations;
    total_oracle_calls += s.oracle_calls;
    retries += std::max(0, s.attempts - 1);
  }
}

nlohmann::json to_json(const SearchStats& stats) {
  auto stages = nlohmann::json::array();
  for (const StageRecord& s : stats.stages) {
    nlohmann::json j{{"stage", s.stage},
                     {"N", s.space_size},
                     {"iterations", s.iterations},
                     {"attempts", s.attempts},
                     {"outcome", s.outcome},
                     {"oracle_calls", s.oracle_calls},
                     {"classical_checks", s.classical_checks},
                     {"success_probability", s.success_probability},
                     {"survivors", s.survivors}};
    j["t"] = s.solution_count ? nlohmann::json(*s.solution_count) : nlohmann::json(nullptr);
    stages.push_back(std::move(j));
  }
  nlohmann::json doc{{"algorithm", stats.algorithm},
                     {"stages", stages},
                     {"total_iterations", stats.total_iterations},
                     {"total_oracle_calls", stats.total_oracle_calls},
                     {"retries", stats.retries},
                     {"residual_ok", stats.residual_ok},
                     {"model_failure_probability", stats.model_failure_probability},
                     {"op_count", stats.op_count},
                     {"uncompute_count", stats.uncompute_count}};
  doc["point"] = stats.point ? point_json(*stats.point) : nlohmann::json(nullptr);
  return doc;
}

std::uint64_t iterations_known_t(GridIndex N, GridIndex t) {
  if (t == 0) throw ContractViolation("solution count 0 is undefined for known-t search; use BBHT");
  if (t > N) throw ContractViolation("solution count exceeds search space");
  if (2 * t >= N) return 0;
  return quarter_pi_sqrt_floor(N, t);
}

Predicate row_predicate(const LinearSystem& system, int row) {
  if (row < 0 || row >= system.n()) throw ContractViolation("row index out of range");
  return {[&system, row](const GridPoint& x) { return system.row_residual(row, x) == 0; },
          "f_" + std::to_string(row + 1) + " = 0"};
}

Predicate system_predicate(const LinearSystem& system) {
  return {[&system](const GridPoint& x) { return is_solution(system, x); }, "sum |f_i| = 0"};
}

GroverOutcome grover_known_t(const SearchState<double>& state, const Predicate& pred, GridIndex t, Rng& rng) {
  const std::vector<bool> marks = evaluate_marks(state, pred);
  const auto N = static_cast<GridIndex>(state.size());
  const std::uint64_t k = iterations_known_t(N, t);

  SearchState<double> amplified = amplify(state, marks, k);
  StageRecord record;
  record.space_size = N;
  record.solution_count = t;
  record.iterations = k;
  record.oracle_calls = k;
  record.attempts = 1;
  record.success_probability = success_probability(amplified, marks);

  FlagMeasurement<double> flag = measure_flag(amplified, marks, rng);
  record.outcome = flag.outcome;
  record.survivors = static_cast<GridIndex>(flag.state.size());
  GridPoint point = sample_point(flag.state, rng);
  return {std::move(point), record, std::move(flag.state)};
}

BbhtOutcome bbht_search(const SearchState<double>& state, const Predicate& pred, Rng& rng, const StagePolicy& policy) {
  policy.validate();
  const std::vector<bool> marks = evaluate_marks(state, pred);
  const double cap = std::sqrt(static_cast<double>(state.size()));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  BbhtOutcome out;
  out.record.space_size = static_cast<GridIndex>(state.size());
  double m = 1.0;
  for (int round = 0; round < policy.bbht_attempts; ++round) {
    const auto j = static_cast<std::uint64_t>(unit(rng) * m);
    SearchState<double> amplified = amplify(state, marks, j);
    out.record.oracle_calls += j;
    out.record.attempts = round + 1;
    out.record.success_probability = success_probability(amplified, marks);

    GridPoint x = sample_point(amplified, rng);
    out.record.classical_checks += 1;
    if (pred(x)) {
      out.point = std::move(x);
      out.record.outcome = true;
      break;
    }
    m = std::min(policy.growth * m, cap);
  }
  out.record.iterations = out.record.oracle_calls;
  return out;
}

SolveResult naive_solve(const LinearSystem& system, Rng& rng, int max_retries) {
  if (max_retries < 0) throw std::invalid_argument("max retries must be non-negative");
  const int n = system.n();
  auto [fresh, start] = prepare_initial<double>(n, system.M());
  RegisterLedger ledger = preparation_sweep(std::move(fresh), n);

  SearchStats stats;
  stats.algorithm = "naive";
  stats.model_failure_probability = 1.0 / static_cast<double>(start.size());

  const Predicate pred = system_predicate(system);
  StageRecord record;
  std::optional<GroverOutcome> last;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    last = grover_known_t(start, pred, 1, rng);
    record.attempts = attempt + 1;
    record.oracle_calls += last->record.oracle_calls;
    if (last->record.outcome) break;
  }
  record.stage = 1;
  record.space_size = last->record.space_size;
  record.solution_count = 1;
  record.iterations = last->record.iterations;
  record.outcome = last->record.outcome;
  record.success_probability = last->record.success_probability;
  record.survivors = last->record.survivors;
  stats.stages.push_back(record);
  stats.tally();

  SolveResult result{std::nullopt, std::move(stats), ledger, std::move(last->state)};
  if (record.outcome && is_solution(system, last->point)) {
    result.point = last->point;
    result.stats.point = last->point;
    result.stats.residual_ok = true;
  }
  result.stats.op_count = ledger.op_count();
  result.stats.uncompute_count = ledger.uncompute_count();
  return result;
}

SolveResult dimred_solve(const LinearSystem& system, const StagePolicy& policy, Rng& rng) {
  policy.validate();
  const int n = system.n();
  const Integer M = system.M();
  auto [ledger, state] = prepare_initial<double>(n, M);

  SearchStats stats;
  stats.algorithm = policy.mode == StageMode::KnownT ? "dimred-known-t" : "dimred-bbht";
  stats.model_failure_probability = 1.0 - std::pow(1.0 - 1.0 / static_cast<double>(M), n);

  auto finish = [&](std::optional<GridPoint> point, std::optional<SearchState<double>> final_state) {
    stats.tally();
    stats.op_count = ledger.op_count();
    stats.uncompute_count = ledger.uncompute_count();
    if (point) {
      stats.point = point;
      stats.residual_ok = true;
    }
    return SolveResult{std::move(point), std::move(stats), ledger, std::move(final_state)};
  };

  for (int row = 0; row < n; ++row) {
    ledger = uncompute_garbage(compute_row(ledger, row), row);

    const std::vector<bool> marks = evaluate_marks(state, row_predicate(system, row));
    StageRecord record;
    record.stage = row + 1;
    record.space_size = static_cast<GridIndex>(state.size());
    std::optional<SearchState<double>> next;

    if (policy.mode == StageMode::KnownT) {
      std::uint64_t k = 0;
      if (policy.counts == CountSource::Model) {
        record.solution_count = power(M, n - row - 1);
        k = iterations_known_t(power(M, n - row), *record.solution_count);
      } else {
        record.solution_count = count_marked(marks);
        if (*record.solution_count == 0) {
          stats.stages.push_back(record);
          return finish(std::nullopt, state);
        }
        k = iterations_known_t(record.space_size, *record.solution_count);
      }
      record.iterations = k;
      const SearchState<double> amplified = amplify(state, marks, k);
      record.success_probability = success_probability(amplified, marks);
      for (int attempt = 0; attempt <= policy.max_retries && !next; ++attempt) {
        record.attempts = attempt + 1;
        record.oracle_calls += k;
        if (record.success_probability <= kImpossibleBranchTolerance) continue;
        FlagMeasurement<double> flag = measure_flag(amplified, marks, rng);
        if (flag.outcome) next = std::move(flag.state);
      }
    } else {
      for (int attempt = 0; attempt <= policy.max_retries && !next; ++attempt) {
        BbhtStage run = bbht_stage(state, marks, rng, policy);
        record.attempts = attempt + 1;
        record.oracle_calls += run.oracle_calls;
        record.success_probability = run.last_probability;
        next = std::move(run.collapsed);
      }
      record.iterations = record.oracle_calls;
    }

    record.outcome = next.has_value();
    if (next) record.survivors = static_cast<GridIndex>(next->size());
    stats.stages.push_back(record);
    if (!next) return finish(std::nullopt, state);
    state = std::move(*next);
  }

  GridPoint x = sample_point(state, rng);
  if (!is_solution(system, x)) return finish(std::nullopt, state);
  return finish(std::move(x), state);
}

}  // namespace qminv
