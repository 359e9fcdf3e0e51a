#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qminv/types.hpp"

namespace qminv {

enum class ArithmeticMode {
  ModularM,      // register wraparound: residuals live in [0, M-1]
  ExactInteger,  // unbounded integer residuals
};

std::string to_string(ArithmeticMode mode);
ArithmeticMode parse_mode(const std::string& text);

/// Square integer system A x + b = 0 searched over the grid {0..M-1}^n.
///
/// Construction validates the shape and solvability invariants: A is n x n,
/// M is a power of two, and det(A) is odd (ModularM) or nonzero
/// (ExactInteger). Instances are immutable afterwards.
class LinearSystem {
 public:
  LinearSystem(IntMatrix A, IntVector b, Integer M, ArithmeticMode mode = ArithmeticMode::ModularM);

  int n() const { return static_cast<int>(b_.size()); }
  Integer M() const { return M_; }
  ArithmeticMode mode() const { return mode_; }
  const IntMatrix& A() const { return A_; }
  const IntVector& b() const { return b_; }
  Domain domain() const { return {n(), M_}; }

  /// f_row for a single (0-based) row.
  Integer row_residual(int row, const GridPoint& x) const;

 private:
  IntMatrix A_;
  IntVector b_;
  Integer M_;
  ArithmeticMode mode_;
};

using Residual = IntVector;

/// f_i = sum_j a_ij x_j + b_i, reduced into [0, M-1] in ModularM mode.
Residual residual(const LinearSystem& system, const GridPoint& x);

bool is_solution(const LinearSystem& system, const GridPoint& x);

/// Grid points whose first `rows` residuals vanish, sorted by grid index.
std::vector<GridPoint> brute_force_solutions(const LinearSystem& system, int rows);

/// Size of brute_force_solutions(system, rows); rows == 0 short-circuits to M^n.
GridIndex count_solutions(const LinearSystem& system, int rows);

/// Per row: 2 max_j |a_ij| <= sum_j |a_ij| + |b_i| / M, compared exactly.
std::vector<bool> check_complete_intersection(const LinearSystem& system);

/// det(A) over the integers (Bareiss), returned as a decimal string since it
/// may exceed 64 bits.
std::string determinant_string(const IntMatrix& A);
bool determinant_is_zero(const IntMatrix& A);
/// Parity of every leading principal minor, computed over GF(2).
bool leading_minors_odd(const IntMatrix& A);

struct PlantedInstance {
  LinearSystem system;
  GridPoint solution;
};

inline constexpr int kGenerationDrawCap = 10'000;

/// Draws x* uniformly from the grid and a_ij uniformly from [-M/2, M/2 - 1],
/// then sets b = -A x*. ModularM instances are redrawn until every leading
/// principal minor is odd; ExactInteger instances until det(A) != 0.
PlantedInstance generate_instance(int n, Integer M, ArithmeticMode mode, std::uint64_t seed);

}  // namespace qminv
