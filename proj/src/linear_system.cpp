#include "qminv/linear_system.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace qminv {

namespace {

using boost::multiprecision::cpp_int;

Integer mod_reduce(Integer value, Integer M) {
  return static_cast<Integer>(static_cast<std::uint64_t>(value) & static_cast<std::uint64_t>(M - 1));
}

// det of the leading k x k block by fraction-free elimination.
cpp_int bareiss_det(const IntMatrix& A, Eigen::Index k) {
  std::vector<std::vector<cpp_int>> m(k, std::vector<cpp_int>(k));
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) m[i][j] = A(i, j);

  cpp_int sign = 1;
  cpp_int prev = 1;
  for (Eigen::Index p = 0; p < k; ++p) {
    if (m[p][p] == 0) {
      Eigen::Index swap = p + 1;
      while (swap < k && m[swap][p] == 0) ++swap;
      if (swap == k) return 0;
      std::swap(m[p], m[swap]);
      sign = -sign;
    }
    for (Eigen::Index i = p + 1; i < k; ++i) {
      for (Eigen::Index j = p + 1; j < k; ++j) m[i][j] = (m[i][j] * m[p][p] - m[i][p] * m[p][j]) / prev;
    }
    prev = m[p][p];
  }
  return sign * m[k - 1][k - 1];
}

}  // namespace

std::string to_string(ArithmeticMode mode) {
  return mode == ArithmeticMode::ModularM ? "modular" : "exact";
}

ArithmeticMode parse_mode(const std::string& text) {
  if (text == "modular") return ArithmeticMode::ModularM;
  if (text == "exact") return ArithmeticMode::ExactInteger;
  throw std::invalid_argument("unknown arithmetic mode '" + text + "' (expected modular|exact)");
}

LinearSystem::LinearSystem(IntMatrix A, IntVector b, Integer M, ArithmeticMode mode)
    : A_(std::move(A)), b_(std::move(b)), M_(M), mode_(mode) {
  if (b_.size() < 1) throw std::invalid_argument("system needs at least one unknown");
  if (A_.rows() != b_.size() || A_.cols() != b_.size())
    throw std::invalid_argument("A must be square with as many rows as b");
  if (M_ < 2 || !is_power_of_two(M_) || M_ > (Integer{1} << 62))
    throw std::invalid_argument("M must be a power of two in [2, 2^62]");
  if (mode_ == ArithmeticMode::ModularM) {
    cpp_int det = bareiss_det(A_, A_.rows());
    if ((det & 1) == 0) throw std::invalid_argument("det(A) must be odd (invertible mod M) in modular mode");
  } else if (determinant_is_zero(A_)) {
    throw std::invalid_argument("det(A) must be nonzero in exact mode");
  }
}

Integer LinearSystem::row_residual(int row, const GridPoint& x) const {
  if (x.size() != n()) throw ContractViolation("grid point dimension does not match system");
  if (mode_ == ArithmeticMode::ModularM) {
    std::uint64_t acc = static_cast<std::uint64_t>(b_[row]);
    for (int j = 0; j < n(); ++j) acc += static_cast<std::uint64_t>(A_(row, j)) * static_cast<std::uint64_t>(x[j]);
    return mod_reduce(static_cast<Integer>(acc), M_);
  }
  __int128 acc = b_[row];
  for (int j = 0; j < n(); ++j) acc += static_cast<__int128>(A_(row, j)) * x[j];
  if (acc > std::numeric_limits<Integer>::max() || acc < std::numeric_limits<Integer>::min())
    throw std::overflow_error("exact residual exceeds 64 bits");
  return static_cast<Integer>(acc);
}

Residual residual(const LinearSystem& system, const GridPoint& x) {
  if (x.size() != system.n()) throw ContractViolation("grid point dimension does not match system");
  Residual f(system.n());
  for (int i = 0; i < system.n(); ++i) f[i] = system.row_residual(i, x);
  return f;
}

bool is_solution(const LinearSystem& system, const GridPoint& x) {
  for (int i = 0; i < system.n(); ++i)
    if (system.row_residual(i, x) != 0) return false;
  return true;
}

std::vector<GridPoint> brute_force_solutions(const LinearSystem& system, int rows) {
  if (rows < 0 || rows > system.n()) throw ContractViolation("row prefix out of range");
  const Domain domain = system.domain();
  domain.require_desk_scale();

  std::vector<GridPoint> out;
  GridPoint x;
  for (GridIndex idx = 0; idx < domain.size(); ++idx) {
    domain.decode(idx, x);
    bool ok = true;
    for (int i = 0; i < rows && ok; ++i) ok = system.row_residual(i, x) == 0;
    if (ok) out.push_back(x);
  }
  return out;
}

GridIndex count_solutions(const LinearSystem& system, int rows) {
  if (rows < 0 || rows > system.n()) throw ContractViolation("row prefix out of range");
  const Domain domain = system.domain();
  domain.require_desk_scale();
  if (rows == 0) return domain.size();

  GridIndex count = 0;
  GridPoint x;
  for (GridIndex idx = 0; idx < domain.size(); ++idx) {
    domain.decode(idx, x);
    bool ok = true;
    for (int i = 0; i < rows && ok; ++i) ok = system.row_residual(i, x) == 0;
    count += ok;
  }
  return count;
}

std::vector<bool> check_complete_intersection(const LinearSystem& system) {
  // Multiply through by M: 2 M max|a| <= M sum|a| + |b|.
  std::vector<bool> flags;
  flags.reserve(system.n());
  const cpp_int M = system.M();
  for (int i = 0; i < system.n(); ++i) {
    cpp_int largest = 0;
    cpp_int total = 0;
    for (int j = 0; j < system.n(); ++j) {
      cpp_int a = boost::multiprecision::abs(cpp_int(system.A()(i, j)));
      largest = std::max(largest, a);
      total += a;
    }
    const cpp_int b = boost::multiprecision::abs(cpp_int(system.b()[i]));
    flags.push_back(2 * M * largest <= M * total + b);
  }
  return flags;
}

std::string determinant_string(const IntMatrix& A) {
  if (A.rows() != A.cols()) throw ContractViolation("determinant of non-square matrix");
  return bareiss_det(A, A.rows()).str();
}

bool determinant_is_zero(const IntMatrix& A) {
  if (A.rows() != A.cols()) throw ContractViolation("determinant of non-square matrix");
  return bareiss_det(A, A.rows()) == 0;
}

bool leading_minors_odd(const IntMatrix& A) {
  // Over GF(2) all leading minors are nonzero iff elimination succeeds
  // without row exchanges.
  const Eigen::Index n = A.rows();
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = static_cast<std::uint8_t>(A(i, j) & 1);

  for (Eigen::Index p = 0; p < n; ++p) {
    if (m(p, p) == 0) return false;
    for (Eigen::Index i = p + 1; i < n; ++i)
      if (m(i, p))
        for (Eigen::Index j = p; j < n; ++j) m(i, j) ^= m(p, j);
  }
  return true;
}

PlantedInstance generate_instance(int n, Integer M, ArithmeticMode mode, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (M < 2 || !is_power_of_two(M) || M > (Integer{1} << 62))
    throw std::invalid_argument("M must be a power of two in [2, 2^62]");

  Rng rng(seed);
  std::uniform_int_distribution<Integer> coord(0, M - 1);
  std::uniform_int_distribution<Integer> coeff(-M / 2, M / 2 - 1);

  GridPoint solution(n);
  for (int j = 0; j < n; ++j) solution[j] = coord(rng);

  IntMatrix A(n, n);
  for (int draw = 0; draw < kGenerationDrawCap; ++draw) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = coeff(rng);
    const bool ok = mode == ArithmeticMode::ModularM ? leading_minors_odd(A) : !determinant_is_zero(A);
    if (!ok) continue;

    IntVector b(n);
    for (int i = 0; i < n; ++i) {
      if (mode == ArithmeticMode::ModularM) {
        std::uint64_t acc = 0;
        for (int j = 0; j < n; ++j) acc += static_cast<std::uint64_t>(A(i, j)) * static_cast<std::uint64_t>(solution[j]);
        b[i] = mod_reduce(static_cast<Integer>(0 - acc), M);
      } else {
        __int128 acc = 0;
        for (int j = 0; j < n; ++j) acc += static_cast<__int128>(A(i, j)) * solution[j];
        if (acc > std::numeric_limits<Integer>::max() || -acc > std::numeric_limits<Integer>::max())
          throw std::overflow_error("planted b exceeds 64 bits");
        b[i] = static_cast<Integer>(-acc);
      }
    }
    return {LinearSystem(A, b, M, mode), solution};
  }
  throw GenerationFailure("no admissible coefficient matrix after " + std::to_string(kGenerationDrawCap) + " draws");
}

}  // namespace qminv
