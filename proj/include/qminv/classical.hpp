#pragma once

#include <cstdint>
#include <optional>

#include "qminv/linear_system.hpp"

namespace qminv {

struct ClassicalSolution {
  std::optional<GridPoint> point;  // empty if the solution is not a grid point
  std::uint64_t op_count = 0;      // multiply-add updates during elimination
};

/// Reference Gaussian elimination. ModularM: elimination over Z/MZ with odd
/// pivots. ExactInteger: elimination over the rationals; the result is a grid
/// point only when it is integral and inside [0, M-1]^n.
ClassicalSolution classical_solve(const LinearSystem& system);

}  // namespace qminv
