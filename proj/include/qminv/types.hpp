#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace qminv {

using Integer = std::int64_t;
using IntMatrix = Eigen::Matrix<Integer, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<Integer, Eigen::Dynamic, 1>;

// Coordinates x_1..x_n, each in [0, M-1].
using GridPoint = IntVector;
// Little-endian mixed-radix index: x_1 varies fastest.
using GridIndex = std::uint64_t;

using Rng = std::mt19937_64;

// Largest grid we are willing to hold as amplitudes or enumerate.
inline constexpr GridIndex kDeskScaleLimit = GridIndex{1} << 26;

struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct EnumerationTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LedgerError : std::logic_error {
  using std::logic_error::logic_error;
};

struct ImpossibleBranch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr bool is_power_of_two(Integer v) { return v > 0 && (v & (v - 1)) == 0; }

/// Shape of the search grid: n coordinates, M points each.
struct Domain {
  int n = 0;
  Integer M = 0;

  /// M^n, or 0 when it does not fit in 64 bits.
  GridIndex size() const {
    GridIndex total = 1;
    for (int i = 0; i < n; ++i) {
      if (total > std::numeric_limits<GridIndex>::max() / static_cast<GridIndex>(M)) return 0;
      total *= static_cast<GridIndex>(M);
    }
    return total;
  }

  bool desk_scale() const {
    const GridIndex s = size();
    return s != 0 && s <= kDeskScaleLimit;
  }

  void require_desk_scale() const {
    if (!desk_scale())
      throw EnumerationTooLarge("grid M^n = " + std::to_string(M) + "^" + std::to_string(n) +
                                " is too large to enumerate (limit 2^26)");
  }

  void decode(GridIndex index, GridPoint& out) const {
    out.resize(n);
    const auto m = static_cast<GridIndex>(M);
    for (int j = 0; j < n; ++j) {
      out[j] = static_cast<Integer>(index % m);
      index /= m;
    }
  }

  GridPoint decode(GridIndex index) const {
    GridPoint p;
    decode(index, p);
    return p;
  }

  GridIndex encode(const GridPoint& x) const {
    if (x.size() != n) throw ContractViolation("grid point has wrong dimension");
    GridIndex index = 0;
    for (int j = n - 1; j >= 0; --j) {
      if (x[j] < 0 || x[j] >= M) throw ContractViolation("grid coordinate out of range");
      index = index * static_cast<GridIndex>(M) + static_cast<GridIndex>(x[j]);
    }
    return index;
  }

  friend bool operator==(const Domain&, const Domain&) = default;
};

}  // namespace qminv
