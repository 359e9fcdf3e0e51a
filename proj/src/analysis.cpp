#include "qminv/analysis.hpp"

#include <cmath>
#include <sstream>

namespace qminv {

namespace {

void require_register_size(std::uint64_t M) {
  if (M < 2 || (M & (M - 1)) != 0) throw std::invalid_argument("M must be a power of two >= 2");
}

}  // namespace

CostModel cost_model(std::uint64_t n, std::uint64_t M) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  require_register_size(M);
  CostModel model;
  model.n = n;
  model.M = M;
  model.search_constant = quarter_pi_sqrt_floor(M);
  model.quantum_steps = 2 * BigInt(n) * (BigInt(model.search_constant) + n);
  model.classical_steps = BigInt(n) * n * n;
  return model;
}

BigInt quantum_cost(std::uint64_t n, std::uint64_t M) { return cost_model(n, M).quantum_steps; }

BigInt classical_cost(std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  return BigInt(n) * n * n;
}

std::uint64_t crossover(std::uint64_t M) {
  require_register_size(M);
  // n^3 - 2n(c + n) = n (n^2 - 2n - 2c) is monotone in its sign for n >= 1.
  const BigInt c = quarter_pi_sqrt_floor(M);
  auto quantum_not_worse = [&](std::uint64_t n) {
    const BigInt bn = n;
    return bn * bn >= 2 * c + 2 * bn;
  };
  std::uint64_t hi = 1;
  while (!quantum_not_worse(hi)) hi *= 2;
  std::uint64_t lo = hi / 2 + 1;
  if (hi == 1) return 1;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (quantum_not_worse(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

bool lemma1_check(std::uint64_t n, std::uint64_t k) {
  if (k < 1 || k > n) throw std::invalid_argument("lemma 1 requires 1 <= k <= n");
  BigInt binom = 1;
  for (std::uint64_t i = 1; i <= k; ++i) binom = binom * (n - k + i) / i;
  return binom <= boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(k));
}

Lemma2Result lemma2_check(double p, std::uint64_t n) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("lemma 2 requires 0 <= p <= 1");
  if (n < 1) throw std::invalid_argument("lemma 2 requires n >= 1");
  const WideFloat wp = p;
  const WideFloat np = wp * n;
  if (np >= 1) throw std::invalid_argument("lemma 2 requires np < 1");
  const WideFloat lhs = boost::multiprecision::pow(1 - wp, WideFloat(n));
  const WideFloat rhs = (1 - 2 * np) / (1 - np);
  return {static_cast<double>(lhs), static_cast<double>(rhs), p == 0.0 ? lhs >= rhs : lhs > rhs};
}

SuccessBound success_lower_bound(std::uint64_t n, std::uint64_t M) {
  if (n < 1 || M < 2 || n >= M) throw std::invalid_argument("success bound requires 1 <= n < M");
  const Rational bound(BigInt(M) - 2 * BigInt(n), BigInt(M) - BigInt(n));
  const WideFloat actual = boost::multiprecision::exp(WideFloat(n) * boost::multiprecision::log1p(-1 / WideFloat(M)));
  return {static_cast<double>(bound), static_cast<double>(actual)};
}

double grover_success_closed_form(GridIndex N, GridIndex t, std::uint64_t k) {
  if (N == 0 || t > N) throw std::invalid_argument("closed form requires t <= N");
  const double theta = std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(N)));
  const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta);
  return s * s;
}

MonteCarloRate monte_carlo_rate(std::uint64_t runs, std::uint64_t seed, const std::function<bool(Rng&)>& trial) {
  if (runs == 0) throw std::invalid_argument("monte carlo needs at least one run");
  MonteCarloRate out;
  out.runs = runs;
  for (std::uint64_t r = 0; r < runs; ++r) {
    Rng rng(seed + r);
    out.successes += trial(rng) ? 1 : 0;
  }
  out.rate = static_cast<double>(out.successes) / static_cast<double>(runs);
  out.sigma = std::sqrt(out.rate * (1.0 - out.rate) / static_cast<double>(runs));
  return out;
}

MonteCarloRate monte_carlo_success(const LinearSystem& system, std::uint64_t runs, const StagePolicy& policy,
                                   std::uint64_t seed) {
  if (runs < 100) throw std::invalid_argument("monte carlo success needs at least 100 runs");
  return monte_carlo_rate(runs, seed, [&](Rng& rng) {
    const SolveResult result = dimred_solve(system, policy, rng);
    return result.point && is_solution(system, *result.point);
  });
}

std::vector<SweepRow> sweep(std::uint64_t n_min, std::uint64_t n_max, std::uint64_t M, std::uint64_t runs,
                            std::uint64_t seed) {
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("sweep needs 1 <= n_min <= n_max");
  require_register_size(M);
  std::vector<SweepRow> rows;
  for (std::uint64_t n = n_min; n <= n_max; ++n) {
    const CostModel model = cost_model(n, M);
    SweepRow row{n, M, model.quantum_steps, model.classical_steps, 0.0, std::nullopt};
    row.bound = n < M ? success_lower_bound(n, M).bound : 0.0;
    const Domain domain{static_cast<int>(n), static_cast<Integer>(M)};
    if (runs > 0 && M <= (std::uint64_t{1} << 62) && domain.desk_scale()) {
      const PlantedInstance inst =
          generate_instance(static_cast<int>(n), static_cast<Integer>(M), ArithmeticMode::ModularM, seed + n);
      row.empirical_rate = monte_carlo_rate(runs, seed, [&](Rng& rng) {
                             const SolveResult r = dimred_solve(inst.system, StagePolicy{}, rng);
                             return r.point && is_solution(inst.system, *r.point);
                           }).rate;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out.precision(10);
  out << "n,M,quantum_steps,classical_steps,bound,empirical_rate\n";
  for (const SweepRow& r : rows) {
    out << r.n << ',' << r.M << ',' << r.quantum_steps << ',' << r.classical_steps << ',' << r.bound << ',';
    if (r.empirical_rate) out << *r.empirical_rate;
    out << '\n';
  }
  return out.str();
}

}  // namespace qminv
