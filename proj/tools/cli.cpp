#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qminv/analysis.hpp"
#include "qminv/classical.hpp"
#include "qminv/instance_io.hpp"
#include "qminv/search.hpp"

namespace qminv::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Table, Json, Csv };

Format parse_format(const std::string& text) {
  if (text == "table") return Format::Table;
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  throw UsageError("unknown format '" + text + "'");
}

std::string point_text(const GridPoint& x) {
  std::ostringstream s;
  s << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) s << (i ? ", " : "") << x[i];
  s << ')';
  return s.str();
}

nlohmann::json point_json(const GridPoint& x) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) arr.push_back(x[i]);
  return arr;
}

struct GenerateArgs {
  int n = 2;
  Integer M = 8;
  std::string mode = "modular";
  std::uint64_t seed = 0;
  std::string out;
};

struct SolveArgs {
  std::string in;
  std::optional<int> n;
  Integer M = 8;
  std::string mode = "modular";
  std::uint64_t gen_seed = 0;
  std::string algo = "dimred";
  std::string stage_mode = "known";
  std::string counts = "model";
  int retries = 3;
  double growth = 6.0 / 5.0;
  int bbht_attempts = 30;
  std::uint64_t seed = 0;
  std::string format = "table";
  bool trace = false;
  bool dump_state = false;
  std::uint64_t runs = 0;
};

struct SweepArgs {
  std::uint64_t M = 8;
  std::uint64_t n_min = 1;
  std::uint64_t n_max = 4;
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;
};

struct AnalyzeArgs {
  std::uint64_t M = std::uint64_t{1} << 32;
  std::string format = "table";
};

struct VerifyArgs {
  std::uint64_t seed = 2001;
};

// --- generate ---------------------------------------------------------------

int run_generate(const GenerateArgs& a, std::ostream& out) {
  const PlantedInstance inst = generate_instance(a.n, a.M, parse_mode(a.mode), a.seed);
  const InstanceFile file{inst.system, a.seed, inst.solution};
  if (a.out.empty()) {
    out << to_json(file).dump(2) << '\n';
  } else {
    write_instance(file, a.out);
    out << "wrote " << a.out << " (n=" << a.n << ", M=" << a.M << ", seed=" << a.seed << ")\n";
  }
  return kSuccess;
}

// --- solve ------------------------------------------------------------------

InstanceFile load_or_generate(const SolveArgs& a) {
  if (!a.in.empty()) return read_instance(a.in);
  if (!a.n) throw UsageError("solve needs --in FILE or --n/--M generation parameters");
  const PlantedInstance inst = generate_instance(*a.n, a.M, parse_mode(a.mode), a.gen_seed);
  return {inst.system, a.gen_seed, inst.solution};
}

StagePolicy policy_from(const SolveArgs& a) {
  StagePolicy p;
  if (a.stage_mode == "known")
    p.mode = StageMode::KnownT;
  else if (a.stage_mode == "bbht")
    p.mode = StageMode::BBHT;
  else
    throw UsageError("unknown stage mode '" + a.stage_mode + "'");
  if (a.counts == "model")
    p.counts = CountSource::Model;
  else if (a.counts == "oracle")
    p.counts = CountSource::Oracle;
  else
    throw UsageError("unknown count source '" + a.counts + "'");
  p.max_retries = a.retries;
  p.growth = a.growth;
  p.bbht_attempts = a.bbht_attempts;
  p.validate();
  return p;
}

struct SolveOutput {
  std::optional<GridPoint> point;
  std::optional<SearchStats> stats;
  std::optional<ClassicalSolution> classical;
  std::optional<SolveResult> result;
};

SolveOutput solve_once(const LinearSystem& system, const SolveArgs& a, const StagePolicy& policy, Rng& rng) {
  SolveOutput o;
  if (a.algo == "classical") {
    o.classical = classical_solve(system);
    o.point = o.classical->point;
    return o;
  }
  if (a.algo == "naive")
    o.result = naive_solve(system, rng, a.retries);
  else if (a.algo == "dimred")
    o.result = dimred_solve(system, policy, rng);
  else
    throw UsageError("unknown algorithm '" + a.algo + "'");
  o.point = o.result->point;
  o.stats = o.result->stats;
  return o;
}

nlohmann::json state_dump(const SearchState<double>& state) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index k = 0; k < state.size(); ++k) {
    const auto amp = state.amplitudes()[k];
    if (std::abs(amp) <= kImpossibleBranchTolerance) continue;
    arr.push_back({state.index_at(k), amp.real(), amp.imag()});
  }
  return arr;
}

nlohmann::json solve_json(const LinearSystem& system, const SolveArgs& a, const SolveOutput& o) {
  nlohmann::json doc{{"algorithm", a.algo}, {"seed", a.seed}, {"solved", o.point.has_value()}};
  if (o.point) {
    doc["solution"] = point_json(*o.point);
    doc["residual"] = point_json(residual(system, *o.point));
  }
  if (o.stats) doc["stats"] = to_json(*o.stats);
  if (o.classical) doc["classical_op_count"] = o.classical->op_count;
  return doc;
}

void print_solve_table(const LinearSystem& system, const SolveArgs& a, const SolveOutput& o, std::ostream& out) {
  out << "algorithm    " << (o.stats ? o.stats->algorithm : a.algo) << '\n';
  out << "seed         " << a.seed << '\n';
  out << "n, M         " << system.n() << ", " << system.M() << " (" << to_string(system.mode()) << ")\n";
  if (o.point) {
    const Residual f = residual(system, *o.point);
    out << "solution     " << point_text(*o.point) << '\n';
    out << "residual     " << point_text(f) << (f.isZero() ? "  ok" : "  NONZERO") << '\n';
  } else {
    out << "solution     none (solver failure)\n";
  }
  if (o.classical) out << "elim steps   " << o.classical->op_count << '\n';
  if (!o.stats) return;
  const SearchStats& s = *o.stats;
  out << "iterations   " << s.total_iterations << '\n';
  out << "oracle calls " << s.total_oracle_calls << '\n';
  out << "retries      " << s.retries << '\n';
  out << "ledger ops   " << s.op_count << " (+" << s.uncompute_count << " uncompute)\n";
  out << "model fail p " << std::setprecision(6) << s.model_failure_probability << '\n';
  out << "stage        N          t          k      tries  flag  p_success\n";
  for (const StageRecord& r : s.stages) {
    out << std::left << std::setw(13) << r.stage << std::setw(11) << r.space_size << std::setw(11)
        << (r.solution_count ? std::to_string(*r.solution_count) : std::string("?")) << std::setw(7)
        << r.iterations << std::setw(7) << r.attempts << std::setw(6) << (r.outcome ? "1" : "0") << std::right
        << std::fixed << std::setprecision(9) << r.success_probability << std::defaultfloat << '\n';
  }
}

void print_solve_csv(const LinearSystem& system, const SolveArgs& a, const SolveOutput& o, std::ostream& out,
                     bool header) {
  if (header) out << "algorithm,seed,solved,solution,residual_ok,iterations,oracle_calls,retries\n";
  out << a.algo << ',' << a.seed << ',' << (o.point ? 1 : 0) << ',';
  if (o.point) {
    for (Eigen::Index i = 0; i < o.point->size(); ++i) out << (i ? " " : "") << (*o.point)[i];
  }
  out << ',' << (o.point && is_solution(system, *o.point) ? 1 : 0) << ',';
  if (o.stats)
    out << o.stats->total_iterations << ',' << o.stats->total_oracle_calls << ',' << o.stats->retries;
  else
    out << ",,";
  out << '\n';
}

int run_solve(const SolveArgs& a, std::ostream& out) {
  const Format format = parse_format(a.format);
  const InstanceFile inst = load_or_generate(a);
  const LinearSystem& system = inst.system;
  const StagePolicy policy = policy_from(a);
  if (a.algo != "classical") system.domain().require_desk_scale();

  if (a.runs > 0) {
    std::uint64_t solved = 0;
    for (std::uint64_t r = 0; r < a.runs; ++r) {
      SolveArgs run_args = a;
      run_args.seed = a.seed + r;
      Rng rng(run_args.seed);
      const SolveOutput o = solve_once(system, run_args, policy, rng);
      solved += o.point ? 1 : 0;
      if (format == Format::Csv)
        print_solve_csv(system, run_args, o, out, r == 0);
      else
        out << solve_json(system, run_args, o).dump() << '\n';
    }
    return solved == a.runs ? kSuccess : kSolverFailure;
  }

  Rng rng(a.seed);
  const SolveOutput o = solve_once(system, a, policy, rng);
  switch (format) {
    case Format::Table: print_solve_table(system, a, o, out); break;
    case Format::Json: out << solve_json(system, a, o).dump(2) << '\n'; break;
    case Format::Csv: print_solve_csv(system, a, o, out, true); break;
  }
  if (a.trace && o.result) out << o.result->ledger.trace_json_lines();
  if (a.dump_state && o.result && o.result->final_state) out << state_dump(*o.result->final_state).dump() << '\n';
  return o.point ? kSuccess : kSolverFailure;
}

// --- sweep / analyze --------------------------------------------------------

int run_sweep(const SweepArgs& a, std::ostream& out) {
  out << sweep_csv(sweep(a.n_min, a.n_max, a.M, a.runs, a.seed));
  return kSuccess;
}

int run_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const Format format = parse_format(a.format);
  const std::uint64_t c = quarter_pi_sqrt_floor(a.M);
  const std::uint64_t x = crossover(a.M);

  std::vector<std::uint64_t> ns{1, 10, 100};
  if (x > 1) ns.push_back(x - 1);
  ns.push_back(x);
  ns.push_back(1000);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::vector<std::uint64_t> bound_ns{1, 10};
  if (a.M >= 16) bound_ns.push_back(a.M / 16);
  std::erase_if(bound_ns, [&](std::uint64_t n) { return n >= a.M; });
  std::sort(bound_ns.begin(), bound_ns.end());
  bound_ns.erase(std::unique(bound_ns.begin(), bound_ns.end()), bound_ns.end());

  if (format == Format::Json) {
    nlohmann::json doc{{"M", a.M}, {"search_constant", c}, {"crossover", x}};
    auto costs = nlohmann::json::array();
    for (auto n : ns)
      costs.push_back({{"n", n}, {"quantum", quantum_cost(n, a.M).str()}, {"classical", classical_cost(n).str()}});
    doc["costs"] = costs;
    auto bounds = nlohmann::json::array();
    for (auto n : bound_ns) {
      const SuccessBound b = success_lower_bound(n, a.M);
      bounds.push_back({{"n", n}, {"bound", b.bound}, {"actual", b.actual}});
    }
    doc["success"] = bounds;
    out << doc.dump(2) << '\n';
    return kSuccess;
  }
  if (format == Format::Csv) {
    out << "n,M,quantum_steps,classical_steps\n";
    for (auto n : ns) out << n << ',' << a.M << ',' << quantum_cost(n, a.M) << ',' << classical_cost(n) << '\n';
    return kSuccess;
  }

  out << "M                    " << a.M << '\n';
  out << "floor(pi/4 sqrt M)   " << c << '\n';
  out << "quantum steps        2n(" << c << " + n)\n";
  out << "classical steps      n^3\n";
  out << "crossover n          " << x << '\n';
  out << '\n' << std::left << std::setw(12) << "n" << std::setw(22) << "quantum" << "classical\n";
  for (auto n : ns) out << std::setw(12) << n << std::setw(22) << quantum_cost(n, a.M) << classical_cost(n) << '\n';
  out << '\n' << std::setw(12) << "n" << std::setw(22) << "lower bound" << "(1-1/M)^n\n";
  out << std::fixed << std::setprecision(9);
  for (auto n : bound_ns) {
    const SuccessBound b = success_lower_bound(n, a.M);
    out << std::setw(12) << n << std::setw(22) << b.bound << b.actual << '\n';
  }
  out << std::defaultfloat << std::right;
  return kSuccess;
}

// --- verify -----------------------------------------------------------------

struct CheckLog {
  std::ostream& out;
  int failures = 0;

  void report(const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS  " : "FAIL  ") << name << "  " << detail << '\n';
    failures += ok ? 0 : 1;
  }
};

int run_verify(const VerifyArgs& a, std::ostream& out) {
  CheckLog log{out};

  {
    std::uint64_t bad = 0, cases = 0;
    for (std::uint64_t n = 1; n <= 60; ++n)
      for (std::uint64_t k = 1; k <= n; ++k, ++cases) bad += lemma1_check(n, k) ? 0 : 1;
    log.report("lemma1", bad == 0, std::to_string(cases) + " cases, " + std::to_string(bad) + " counterexamples");
  }
  {
    Rng rng(a.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uint64_t bad = 0;
    for (int s = 0; s < 10'000; ++s) {
      const double p = std::max(unit(rng), 1e-12);
      const auto n_max = static_cast<std::uint64_t>(std::ceil(1.0 / p)) - 1;
      if (n_max < 1) continue;
      std::uniform_int_distribution<std::uint64_t> pick(1, n_max);
      std::uint64_t n = pick(rng);
      while (static_cast<double>(n) * p >= 1.0 && n > 1) --n;
      if (static_cast<double>(n) * p >= 1.0) continue;
      bad += lemma2_check(p, n).holds ? 0 : 1;
    }
    log.report("lemma2", bad == 0, "10000 samples, " + std::to_string(bad) + " counterexamples");
  }
  {
    const std::uint64_t x = crossover(std::uint64_t{1} << 32);
    bool ok = quarter_pi_sqrt_floor(std::uint64_t{1} << 32) == 51471 && x >= 320 && x <= 323;
    for (std::uint64_t n = x; n <= 10'000 && ok; ++n)
      ok = quantum_cost(n, std::uint64_t{1} << 32) <= classical_cost(n);
    log.report("crossover", ok, "crossover(2^32) = " + std::to_string(x));
  }
  {
    const SuccessBound b = success_lower_bound(std::uint64_t{1} << 28, std::uint64_t{1} << 32);
    std::ostringstream d;
    d << std::setprecision(12) << "bound(2^28, 2^32) = " << b.bound;
    log.report("success-bound", b.bound >= 0.93 && b.bound <= b.actual, d.str());
  }
  {
    double worst = 0.0;
    for (GridIndex N : {4, 16, 64, 256})
      for (GridIndex t : {1, 2, 4, 8}) {
        if (t >= N) continue;
        const auto start = init_uniform<double>(1, static_cast<Integer>(N));
        std::vector<bool> marks(N, false);
        for (GridIndex i = 0; i < t; ++i) marks[i] = true;
        const std::uint64_t k = iterations_known_t(N, t);
        const double p = success_probability(amplify(start, marks, k), marks);
        worst = std::max(worst, std::abs(p - grover_success_closed_form(N, t, k)));
      }
    std::ostringstream d;
    d << "max deviation " << std::scientific << worst;
    log.report("grover-closed-form", worst < 1e-9, d.str());
  }
  {
    bool ok = true;
    int instances = 0;
    for (Integer M : {4, 8}) {
      for (int n = 1; n <= 3; ++n) {
        const PlantedInstance inst = generate_instance(n, M, ArithmeticMode::ModularM, a.seed + n * 31 + M);
        for (int k = 0; k <= n; ++k) {
          GridIndex expected = 1;
          for (int e = 0; e < n - k; ++e) expected *= static_cast<GridIndex>(M);
          ok = ok && count_solutions(inst.system, k) == expected;
        }
        Rng rng(a.seed);
        StagePolicy policy;
        policy.max_retries = 20;
        const SolveResult r = dimred_solve(inst.system, policy, rng);
        ok = ok && r.point && *r.point == inst.solution && classical_solve(inst.system).point == inst.solution;
        ++instances;
      }
    }
    log.report("dimred-structure", ok, std::to_string(instances) + " planted instances");
  }
  {
    const int n = 5;
    const RegisterLedger full = preparation_sweep(prepare_ledger(n), n);
    const bool ok = full.at_stage_boundary(n) && full.op_count() == static_cast<std::uint64_t>(n + 2 * n * n) &&
                    full.uncompute_count() == static_cast<std::uint64_t>(n * n);
    log.report("ledger", ok, "op_count " + std::to_string(full.op_count()) + ", uncompute " +
                                 std::to_string(full.uncompute_count()));
  }

  return log.failures == 0 ? kSuccess : kVerificationFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grid search simulator for integer linear systems"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a planted instance as JSON");
  generate->add_option("--n", gen.n, "Number of unknowns")->check(CLI::PositiveNumber);
  generate->add_option("--M", gen.M, "Grid points per dimension (power of two)");
  generate->add_option("--mode", gen.mode, "modular | exact");
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("--out", gen.out, "Output path (stdout if omitted)");

  SolveArgs sol;
  auto* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("--in", sol.in, "Instance JSON");
  solve->add_option("--n", sol.n, "Generate an instance with n unknowns instead of reading one");
  solve->add_option("--M", sol.M, "Grid size for generation");
  solve->add_option("--mode", sol.mode, "Arithmetic mode for generation");
  solve->add_option("--gen-seed", sol.gen_seed, "Seed for generation");
  solve->add_option("--algo", sol.algo, "naive | dimred | classical");
  solve->add_option("--stage-mode", sol.stage_mode, "known | bbht");
  solve->add_option("--counts", sol.counts, "model | oracle (known-t stages)");
  solve->add_option("--retries", sol.retries, "Retries per stage (default 3)");
  solve->add_option("--growth", sol.growth, "BBHT growth factor");
  solve->add_option("--bbht-attempts", sol.bbht_attempts, "BBHT rounds per search");
  solve->add_option("--seed", sol.seed, "Measurement seed");
  solve->add_option("--format", sol.format, "table | json | csv");
  solve->add_flag("--trace", sol.trace, "Append the register ledger trace as JSON lines");
  solve->add_flag("--dump-state", sol.dump_state, "Append the final state's nonzero amplitudes");
  solve->add_option("--runs", sol.runs, "Batch mode: seeds seed..seed+runs-1, one line per run");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Cost and success CSV over a range of n");
  sweep_cmd->add_option("--M", sw.M, "Grid size");
  sweep_cmd->add_option("--n-min", sw.n_min, "First n");
  sweep_cmd->add_option("--n-max", sw.n_max, "Last n");
  sweep_cmd->add_option("--runs", sw.runs, "Monte Carlo runs per row (0 disables)");
  sweep_cmd->add_option("--seed", sw.seed, "Seed");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Cost, crossover and success-bound tables");
  analyze->add_option("--M", an.M, "Grid size");
  analyze->add_option("--format", an.format, "table | json | csv");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run lemma and invariant checks");
  verify->add_option("--seed", ver.seed, "Seed for sampled checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*generate) return run_generate(gen, out);
    if (*solve) return run_solve(sol, out);
    if (*sweep_cmd) return run_sweep(sw, out);
    if (*analyze) return run_analyze(an, out);
    if (*verify) return run_verify(ver, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const EnumerationTooLarge& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kUsageError;
}

}  // namespace qminv::cli
