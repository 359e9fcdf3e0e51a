#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qminv/linear_system.hpp"
#include "qminv/numeric.hpp"
#include "qminv/search.hpp"

namespace qminv {

/// Step counts for one (n, M) point of the cost comparison.
struct CostModel {
  std::uint64_t n = 0;
  std::uint64_t M = 0;
  std::uint64_t search_constant = 0;  // floor(pi/4 sqrt(M))
  BigInt quantum_steps;               // 2n (search_constant + n)
  BigInt classical_steps;             // n^3
};

CostModel cost_model(std::uint64_t n, std::uint64_t M);

/// 2n (floor(pi/4 sqrt(M)) + n). The factor two is the backward pass.
BigInt quantum_cost(std::uint64_t n, std::uint64_t M);
BigInt classical_cost(std::uint64_t n);

/// Smallest n with classical_cost(n) >= quantum_cost(n, M).
std::uint64_t crossover(std::uint64_t M);

/// C(n, k) <= n^k in exact integers. Requires 1 <= k <= n.
bool lemma1_check(std::uint64_t n, std::uint64_t k);

struct Lemma2Result {
  double lhs = 0.0;  // (1 - p)^n
  double rhs = 0.0;  // (1 - 2np) / (1 - np)
  bool holds = false;
};

/// (1 - p)^n > (1 - 2np)/(1 - np), decided in 50-digit arithmetic. At p = 0
/// both sides equal 1 and the non-strict comparison is reported instead.
Lemma2Result lemma2_check(double p, std::uint64_t n);

struct SuccessBound {
  double bound = 0.0;   // (1 - 2n/M) / (1 - n/M), from exact rationals
  double actual = 0.0;  // (1 - 1/M)^n
};

SuccessBound success_lower_bound(std::uint64_t n, std::uint64_t M);

/// sin^2((2k + 1) asin(sqrt(t/N))).
double grover_success_closed_form(GridIndex N, GridIndex t, std::uint64_t k);

struct MonteCarloRate {
  double rate = 0.0;
  double sigma = 0.0;  // binomial standard error
  std::uint64_t runs = 0;
  std::uint64_t successes = 0;
};

/// Runs `trial` with generators seeded seed, seed + 1, ... and tallies the
/// fraction of successes.
MonteCarloRate monte_carlo_rate(std::uint64_t runs, std::uint64_t seed, const std::function<bool(Rng&)>& trial);

/// Fraction of dimred_solve runs returning the exact solution. Policy
/// retries are honored as given; pass max_retries = 0 for single-shot runs.
MonteCarloRate monte_carlo_success(const LinearSystem& system, std::uint64_t runs, const StagePolicy& policy,
                                   std::uint64_t seed);

struct SweepRow {
  std::uint64_t n = 0;
  std::uint64_t M = 0;
  BigInt quantum_steps;
  BigInt classical_steps;
  double bound = 0.0;
  std::optional<double> empirical_rate;
};

/// One row per n in [n_min, n_max]. The empirical column is filled when the
/// grid fits the desk-scale limit and runs > 0.
std::vector<SweepRow> sweep(std::uint64_t n_min, std::uint64_t n_max, std::uint64_t M, std::uint64_t runs,
                            std::uint64_t seed);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace qminv
