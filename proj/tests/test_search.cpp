#include "doctest.h"

#include <cmath>

#include "qminv/classical.hpp"
#include "qminv/search.hpp"

using namespace qminv;

namespace {

double closed_form(double N, double t, std::uint64_t k) {
  const double s = std::sin((2.0 * double(k) + 1) * std::asin(std::sqrt(t / N)));
  return s * s;
}

Predicate first_t(GridIndex t) {
  return {[t](const GridPoint& x) { return x[0] < static_cast<Integer>(t); }, "x < t"};
}

StagePolicy oracle_counts() {
  StagePolicy p;
  p.counts = CountSource::Oracle;
  return p;
}

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("iterations_known_t") {
    CHECK(iterations_known_t(64, 1) == 6);
    CHECK(iterations_known_t(4, 1) == 1);
    CHECK(iterations_known_t(64, 16) == 1);
    CHECK(iterations_known_t(16, 1) == 3);
    CHECK(iterations_known_t(8, 4) == 0);
    CHECK(iterations_known_t(5, 5) == 0);
    CHECK(iterations_known_t(std::uint64_t{1} << 32, 1) == 51471);
    CHECK_THROWS_AS(iterations_known_t(64, 0), ContractViolation);
    CHECK_THROWS_AS(iterations_known_t(4, 5), ContractViolation);
  }

  TEST_CASE("iterations_known_t floors") {
    // Brute-force floor: largest k with k <= pi/4 sqrt(N/t), checked by squaring.
    for (GridIndex N = 1; N <= 300; ++N)
      for (GridIndex t = 1; 2 * t < N; ++t) {
        const double bound = std::acos(-1.0) / 4 * std::sqrt(double(N) / double(t));
        const auto k = iterations_known_t(N, t);
        REQUIRE(double(k) <= bound);
        REQUIRE(double(k + 1) > bound);
      }
  }

  TEST_CASE("grover_known_t") {
    Rng rng(1);
    const auto s4 = init_uniform(1, 4);
    const auto r4 = grover_known_t(s4, first_t(1), 1, rng);
    CHECK(std::abs(r4.record.success_probability - 1.0) < 1e-12);
    CHECK(r4.point[0] == 0);
    CHECK(r4.record.iterations == 1);

    const auto s16 = init_uniform(1, 16);
    const auto r16 = grover_known_t(s16, first_t(1), 1, rng);
    CHECK(r16.record.iterations == 3);
    CHECK(std::abs(r16.record.success_probability - closed_form(16, 1, 3)) < 1e-9);
    CHECK(std::abs(r16.record.success_probability - 0.9613189697265625) < 1e-9);

    const auto rall = grover_known_t(s16, Predicate::always(true), 16, rng);
    CHECK(rall.record.iterations == 0);
    CHECK(rall.record.success_probability == doctest::Approx(1.0));
  }

  TEST_CASE("bbht finds a marked point") {
    const auto s = init_uniform(1, 64);
    StagePolicy policy;
    Rng rng(2);
    const auto all = bbht_search(s, Predicate::always(true), rng, policy);
    REQUIRE(all.point);
    CHECK(all.record.oracle_calls == 0);
    CHECK(all.record.attempts == 1);

    for (int trial = 0; trial < 50; ++trial) {
      const auto r = bbht_search(s, first_t(8), rng, policy);
      if (r.point) CHECK((*r.point)[0] < 8);
    }
  }

  TEST_CASE("bbht never reports a false positive") {
    const auto s = init_uniform(1, 64);
    StagePolicy policy;
    policy.bbht_attempts = 10;
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const auto r = bbht_search(s, Predicate::always(false), rng, policy);
      CHECK_FALSE(r.point);
      CHECK_FALSE(r.record.outcome);
      CHECK(r.record.attempts == 10);
    }
  }

  TEST_CASE("policy validation") {
    StagePolicy p;
    p.growth = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.max_retries = -1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }

  TEST_CASE("naive_solve") {
    const PlantedInstance one = generate_instance(1, 4, ArithmeticMode::ModularM, 5);
    Rng rng(0);
    const SolveResult r1 = naive_solve(one.system, rng);
    REQUIRE(r1.point);
    CHECK(*r1.point == one.solution);
    CHECK(r1.stats.total_iterations == 1);
    CHECK(r1.stats.model_failure_probability == doctest::Approx(0.25));

    const PlantedInstance two = generate_instance(2, 8, ArithmeticMode::ModularM, 6);
    const SolveResult r2 = naive_solve(two.system, rng);
    CHECK(r2.stats.total_iterations == 6);
    CHECK(std::abs(r2.stats.stages[0].success_probability - closed_form(64, 1, 6)) < 1e-9);
    CHECK(r2.stats.stages[0].success_probability >= 1.0 - 1.0 / 64 - 1e-3);
    // Cost accounting ran the full preparation sweep.
    CHECK(r2.ledger.at_stage_boundary(2));
    CHECK(r2.stats.op_count == 2 + 8);
  }

  TEST_CASE("naive_solve Monte Carlo") {
    const PlantedInstance inst = generate_instance(2, 4, ArithmeticMode::ModularM, 8);
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      Rng rng(seed);
      const SolveResult r = naive_solve(inst.system, rng);
      ok += r.point && *r.point == inst.solution;
    }
    CHECK(ok / 500.0 >= 0.9);
  }

  TEST_CASE("dimred stage sizes and iterations") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const PlantedInstance inst = generate_instance(2, 4, ArithmeticMode::ModularM, seed);
      Rng rng(seed);
      StagePolicy p;
      p.max_retries = 30;
      const SolveResult r = dimred_solve(inst.system, p, rng);
      REQUIRE(r.point);
      CHECK(*r.point == inst.solution);
      REQUIRE(r.stats.stages.size() == 2);
      CHECK(r.stats.stages[0].space_size == 16);
      CHECK(r.stats.stages[0].survivors == 4);
      CHECK(r.stats.stages[1].space_size == 4);
      CHECK(r.stats.stages[1].survivors == 1);
      for (const auto& st : r.stats.stages) CHECK(st.iterations == 1);
    }

    const PlantedInstance three = generate_instance(3, 4, ArithmeticMode::ModularM, 3);
    Rng rng(4);
    StagePolicy p;
    p.max_retries = 30;
    const SolveResult r = dimred_solve(three.system, p, rng);
    REQUIRE(r.point);
    const std::vector<GridIndex> sizes{64, 16, 4};
    for (std::size_t i = 0; i < 3; ++i) CHECK(r.stats.stages[i].space_size == sizes[i]);
    CHECK(r.stats.stages[2].survivors == 1);
    CHECK(r.stats.total_iterations == 3);
    CHECK(r.ledger.at_stage_boundary(3));
  }

  TEST_CASE("oracle counts match model counts and the closed form") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const PlantedInstance inst = generate_instance(3, 8, ArithmeticMode::ModularM, seed);
      Rng rng(seed);
      StagePolicy p = oracle_counts();
      p.max_retries = 30;
      const SolveResult r = dimred_solve(inst.system, p, rng);
      REQUIRE(r.point);
      GridIndex N = 512;
      for (const StageRecord& st : r.stats.stages) {
        CHECK(st.space_size == N);
        CHECK(*st.solution_count == N / 8);
        CHECK(std::abs(st.success_probability - closed_form(double(N), double(N / 8), st.iterations)) < 1e-9);
        N /= 8;
      }
    }
  }

  TEST_CASE("collapsed stage state is uniform over survivors") {
    const PlantedInstance inst = generate_instance(2, 4, ArithmeticMode::ModularM, 12);
    const auto start = init_uniform(2, 4);
    const auto marks = evaluate_marks(start, row_predicate(inst.system, 0));
    const auto amplified = amplify(start, marks, iterations_known_t(16, 4));
    Rng rng(0);
    const auto survivors = brute_force_solutions(inst.system, 1);
    REQUIRE(survivors.size() == 4);
    const auto after = collapse(amplified, marks, true);
    REQUIRE(after.size() == 4);
    for (const GridPoint& x : survivors)
      CHECK(std::abs(std::abs(after.amplitude(after.domain().encode(x))) - 0.5) < 1e-9);
  }

  TEST_CASE("n = 1 degenerates to the naive search") {
    for (Integer M : {4, 8, 16}) {
      const PlantedInstance inst = generate_instance(1, M, ArithmeticMode::ModularM, 21);
      Rng a(1), b(1);
      const SolveResult naive = naive_solve(inst.system, a);
      const SolveResult dimred = dimred_solve(inst.system, StagePolicy{}, b);
      CHECK(naive.stats.total_iterations == dimred.stats.total_iterations);
      CHECK(naive.stats.stages[0].success_probability ==
            doctest::Approx(dimred.stats.stages[0].success_probability).epsilon(1e-12));
      CHECK(naive.point == dimred.point);
    }
  }

  TEST_CASE("bbht stage mode solves") {
    StagePolicy p;
    p.mode = StageMode::BBHT;
    p.max_retries = 5;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const PlantedInstance inst = generate_instance(3, 4, ArithmeticMode::ModularM, seed);
      Rng rng(seed);
      const SolveResult r = dimred_solve(inst.system, p, rng);
      REQUIRE(r.point);
      CHECK(*r.point == inst.solution);
      CHECK(r.stats.stages.size() == 3);
    }
  }

  TEST_CASE("exact mode with no grid solution fails cleanly") {
    IntMatrix A(1, 1);
    A << 2;
    IntVector b(1);
    b << 1;
    const LinearSystem odd(A, b, 8, ArithmeticMode::ExactInteger);
    Rng rng(0);
    CHECK_FALSE(dimred_solve(odd, oracle_counts(), rng).point);
    StagePolicy bbht;
    bbht.mode = StageMode::BBHT;
    CHECK_FALSE(dimred_solve(odd, bbht, rng).point);
    CHECK_FALSE(classical_solve(odd).point);
  }

  TEST_CASE("exact mode instances solve in oracle mode") {
    StagePolicy p = oracle_counts();
    p.max_retries = 30;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const PlantedInstance inst = generate_instance(2, 8, ArithmeticMode::ExactInteger, seed);
      Rng rng(seed);
      const SolveResult r = dimred_solve(inst.system, p, rng);
      REQUIRE(r.point);
      CHECK(*r.point == inst.solution);
      CHECK(classical_solve(inst.system).point == inst.solution);
    }
  }

  TEST_CASE("stats totals equal stage sums") {
    const PlantedInstance inst = generate_instance(3, 4, ArithmeticMode::ModularM, 30);
    StagePolicy p;
    p.max_retries = 10;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Rng rng(seed);
      const SolveResult r = dimred_solve(inst.system, p, rng);
      std::uint64_t iters = 0, calls = 0;
      int retries = 0;
      for (const auto& st : r.stats.stages) {
        iters += st.iterations;
        calls += st.oracle_calls;
        retries += st.attempts - 1;
      }
      CHECK(r.stats.total_iterations == iters);
      CHECK(r.stats.total_oracle_calls == calls);
      CHECK(r.stats.retries == retries);
      const auto doc = to_json(r.stats);
      CHECK(doc["stages"].size() == r.stats.stages.size());
      CHECK(doc["total_oracle_calls"] == calls);
    }
  }

  TEST_CASE("classical solver agrees with the planted point") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const PlantedInstance m = generate_instance(1 + int(seed % 6), 16, ArithmeticMode::ModularM, seed);
      CHECK(classical_solve(m.system).point == m.solution);
      const PlantedInstance e = generate_instance(1 + int(seed % 6), 16, ArithmeticMode::ExactInteger, seed);
      CHECK(classical_solve(e.system).point == e.solution);
    }
  }
}
