#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qminv/types.hpp"

namespace qminv {

/// Boolean oracle over grid points. Evaluation must be pure.
struct Predicate {
  std::function<bool(const GridPoint&)> test;
  std::string label;

  bool operator()(const GridPoint& x) const { return test(x); }

  static Predicate always(bool value) {
    return {[value](const GridPoint&) { return value; }, value ? "true" : "false"};
  }
};

/// Amplitudes over the data registers x in {0..M-1}^n.
///
/// Storage is either dense over the whole grid (support() empty, position k
/// is grid index k) or restricted to a sorted support set after a collapse.
/// Entries outside the support are exactly zero.
template <typename Scalar = double>
class SearchState {
 public:
  using Complex = std::complex<Scalar>;
  using AmplitudeVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  SearchState(Domain domain, AmplitudeVector dense) : domain_(domain), amplitudes_(std::move(dense)) {
    if (static_cast<GridIndex>(amplitudes_.size()) != domain_.size())
      throw ContractViolation("dense amplitude vector must cover the whole grid");
  }

  SearchState(Domain domain, std::vector<GridIndex> support, AmplitudeVector amplitudes)
      : domain_(domain), support_(std::move(support)), amplitudes_(std::move(amplitudes)), restricted_(true) {
    if (static_cast<Eigen::Index>(support_.size()) != amplitudes_.size())
      throw ContractViolation("support and amplitude lengths differ");
    if (!std::is_sorted(support_.begin(), support_.end()))
      throw ContractViolation("support must be sorted by grid index");
  }

  const Domain& domain() const { return domain_; }
  bool restricted() const { return restricted_; }
  const std::vector<GridIndex>& support() const { return support_; }

  /// Number of stored entries (M^n when dense).
  Eigen::Index size() const { return amplitudes_.size(); }
  GridIndex index_at(Eigen::Index k) const { return restricted_ ? support_[k] : static_cast<GridIndex>(k); }

  const AmplitudeVector& amplitudes() const { return amplitudes_; }
  AmplitudeVector& amplitudes() { return amplitudes_; }

  Complex amplitude(GridIndex index) const {
    if (!restricted_) return index < domain_.size() ? amplitudes_[static_cast<Eigen::Index>(index)] : Complex{};
    auto it = std::lower_bound(support_.begin(), support_.end(), index);
    if (it == support_.end() || *it != index) return Complex{};
    return amplitudes_[it - support_.begin()];
  }

  Scalar norm() const { return amplitudes_.norm(); }

  bool same_layout(const SearchState& other) const {
    return domain_ == other.domain_ && restricted_ == other.restricted_ && support_ == other.support_ &&
           amplitudes_.size() == other.amplitudes_.size();
  }

  // Oracle bookkeeping: quantum oracle applications, and the number of
  // classical predicate evaluations spent simulating them.
  std::uint64_t oracle_queries = 0;
  std::uint64_t predicate_evaluations = 0;

 private:
  Domain domain_;
  std::vector<GridIndex> support_;
  AmplitudeVector amplitudes_;
  bool restricted_ = false;
};

/// Marks of `pred` over the stored entries of `state`, in storage order.
template <typename Scalar>
std::vector<bool> evaluate_marks(const SearchState<Scalar>& state, const Predicate& pred) {
  std::vector<bool> marks(static_cast<std::size_t>(state.size()));
  GridPoint x;
  for (Eigen::Index k = 0; k < state.size(); ++k) {
    state.domain().decode(state.index_at(k), x);
    marks[static_cast<std::size_t>(k)] = pred(x);
  }
  return marks;
}

/// Every amplitude M^(-n/2): the Hadamard layer applied to |0...0>.
template <typename Scalar = double>
SearchState<Scalar> init_uniform(int n, Integer M) {
  const Domain domain{n, M};
  if (n < 1 || M < 2) throw ContractViolation("grid needs n >= 1 and M >= 2");
  domain.require_desk_scale();
  const auto size = static_cast<Eigen::Index>(domain.size());
  const Scalar amp = Scalar(1) / std::sqrt(static_cast<Scalar>(size));
  using Amplitudes = typename SearchState<Scalar>::AmplitudeVector;
  return SearchState<Scalar>(domain, Amplitudes::Constant(size, amp));
}

/// Negates the amplitude of every marked point.
template <typename Scalar>
SearchState<Scalar> oracle_phase_flip(SearchState<Scalar> state, const Predicate& pred) {
  GridPoint x;
  for (Eigen::Index k = 0; k < state.size(); ++k) {
    state.domain().decode(state.index_at(k), x);
    if (pred(x)) state.amplitudes()[k] = -state.amplitudes()[k];
  }
  state.oracle_queries += 1;
  state.predicate_evaluations += static_cast<std::uint64_t>(state.size());
  return state;
}

/// Same as oracle_phase_flip with the marks already evaluated.
template <typename Scalar>
SearchState<Scalar> oracle_phase_flip(SearchState<Scalar> state, const std::vector<bool>& marks) {
  if (marks.size() != static_cast<std::size_t>(state.size())) throw ContractViolation("mark vector length mismatch");
  for (Eigen::Index k = 0; k < state.size(); ++k)
    if (marks[static_cast<std::size_t>(k)]) state.amplitudes()[k] = -state.amplitudes()[k];
  state.oracle_queries += 1;
  return state;
}

inline constexpr double kReferenceNormTolerance = 1e-9;

/// (2|ref><ref| - I) applied to `state`.
template <typename Scalar>
SearchState<Scalar> reflect_about(SearchState<Scalar> state, const SearchState<Scalar>& reference) {
  if (std::abs(reference.norm() - Scalar(1)) > Scalar(kReferenceNormTolerance))
    throw ContractViolation("reflection reference is not normalized");
  if (!state.same_layout(reference)) throw ContractViolation("reflection reference has a different support");
  const auto overlap = reference.amplitudes().dot(state.amplitudes());  // conjugates the reference
  state.amplitudes() = Scalar(2) * overlap * reference.amplitudes() - state.amplitudes();
  return state;
}

/// One Grover iteration: phase flip, then reflection about `start`.
template <typename Scalar>
SearchState<Scalar> grover_iterate(SearchState<Scalar> state, const std::vector<bool>& marks,
                                   const SearchState<Scalar>& start) {
  return reflect_about(oracle_phase_flip(std::move(state), marks), start);
}

/// `iterations` Grover steps from `start`, reflecting about `start`.
template <typename Scalar>
SearchState<Scalar> amplify(const SearchState<Scalar>& start, const std::vector<bool>& marks, std::uint64_t iterations) {
  SearchState<Scalar> state = start;
  for (std::uint64_t k = 0; k < iterations; ++k) state = grover_iterate(std::move(state), marks, start);
  return state;
}

template <typename Scalar>
Scalar success_probability(const SearchState<Scalar>& state, const std::vector<bool>& marks) {
  Scalar p = 0;
  for (Eigen::Index k = 0; k < state.size(); ++k)
    if (marks[static_cast<std::size_t>(k)]) p += std::norm(state.amplitudes()[k]);
  return p;
}

/// Probability mass on points satisfying `pred`.
template <typename Scalar>
Scalar success_probability(const SearchState<Scalar>& state, const Predicate& pred) {
  return success_probability(state, evaluate_marks(state, pred));
}

inline constexpr double kImpossibleBranchTolerance = 1e-15;

/// Restriction of `state` to the entries whose mark equals `outcome`,
/// renormalized by 1/sqrt(p). Zero-amplitude entries are dropped from the
/// support.
template <typename Scalar>
SearchState<Scalar> collapse(const SearchState<Scalar>& state, const std::vector<bool>& marks, bool outcome) {
  Scalar p = 0;
  std::vector<GridIndex> support;
  std::vector<std::complex<Scalar>> kept;
  for (Eigen::Index k = 0; k < state.size(); ++k) {
    if (marks[static_cast<std::size_t>(k)] != outcome) continue;
    const auto a = state.amplitudes()[k];
    if (std::abs(a) <= Scalar(kImpossibleBranchTolerance)) continue;
    p += std::norm(a);
    support.push_back(state.index_at(k));
    kept.push_back(a);
  }
  if (p <= Scalar(kImpossibleBranchTolerance)) throw ImpossibleBranch("measured branch has zero probability");

  const Scalar scale = Scalar(1) / std::sqrt(p);
  typename SearchState<Scalar>::AmplitudeVector amps(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) amps[static_cast<Eigen::Index>(k)] = kept[k] * scale;
  SearchState<Scalar> out(state.domain(), std::move(support), std::move(amps));
  out.oracle_queries = state.oracle_queries;
  out.predicate_evaluations = state.predicate_evaluations;
  return out;
}

template <typename Scalar>
SearchState<Scalar> collapse(const SearchState<Scalar>& state, const Predicate& pred, bool outcome) {
  return collapse(state, evaluate_marks(state, pred), outcome);
}

template <typename Scalar>
struct FlagMeasurement {
  bool outcome;
  SearchState<Scalar> state;
  Scalar p_true;
};

/// Measures the flag register holding pred(x) and collapses accordingly.
template <typename Scalar>
FlagMeasurement<Scalar> measure_flag(const SearchState<Scalar>& state, const std::vector<bool>& marks, Rng& rng) {
  const Scalar total = state.amplitudes().squaredNorm();
  const Scalar p_true = std::clamp(success_probability(state, marks) / total, Scalar(0), Scalar(1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool outcome = unit(rng) < static_cast<double>(p_true);
  return {outcome, collapse(state, marks, outcome), p_true};
}

template <typename Scalar>
FlagMeasurement<Scalar> measure_flag(const SearchState<Scalar>& state, const Predicate& pred, Rng& rng) {
  return measure_flag(state, evaluate_marks(state, pred), rng);
}

/// Born-rule draw of a grid point.
template <typename Scalar>
GridPoint sample_point(const SearchState<Scalar>& state, Rng& rng) {
  const Scalar total = state.amplitudes().squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Scalar target = static_cast<Scalar>(unit(rng)) * total;
  Scalar acc = 0;
  Eigen::Index chosen = -1;
  for (Eigen::Index k = 0; k < state.size(); ++k) {
    const Scalar w = std::norm(state.amplitudes()[k]);
    if (w == Scalar(0)) continue;
    chosen = k;
    acc += w;
    if (target < acc) break;
  }
  if (chosen < 0) throw ImpossibleBranch("cannot sample from a zero state");
  return state.domain().decode(state.index_at(chosen));
}

}  // namespace qminv
