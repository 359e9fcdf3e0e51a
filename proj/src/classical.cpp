#include "qminv/classical.hpp"

#include <utility>
#include <vector>

#include "qminv/numeric.hpp"

namespace qminv {

namespace {

// Inverse of an odd value modulo 2^64 by Newton iteration; each step doubles
// the number of correct low bits.
std::uint64_t odd_inverse(std::uint64_t a) {
  std::uint64_t x = a;  // correct to 3 bits for odd a
  for (int i = 0; i < 5; ++i) x *= 2 - a * x;
  return x;
}

ClassicalSolution solve_modular(const LinearSystem& system) {
  const int n = system.n();
  const std::uint64_t mask = static_cast<std::uint64_t>(system.M()) - 1;
  // Augmented [A | -b], wrapping arithmetic reduced by the mask at the end.
  std::vector<std::vector<std::uint64_t>> m(n, std::vector<std::uint64_t>(n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = static_cast<std::uint64_t>(system.A()(i, j));
    m[i][n] = 0 - static_cast<std::uint64_t>(system.b()[i]);
  }

  ClassicalSolution out;
  for (int p = 0; p < n; ++p) {
    int pivot = p;
    while (pivot < n && (m[pivot][p] & 1) == 0) ++pivot;
    if (pivot == n) return out;  // unreachable for odd det
    std::swap(m[p], m[pivot]);
    const std::uint64_t inv = odd_inverse(m[p][p]);
    for (int j = p; j <= n; ++j) m[p][j] *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == p || m[i][p] == 0) continue;
      const std::uint64_t factor = m[i][p];
      for (int j = p; j <= n; ++j) m[i][j] -= factor * m[p][j];
      out.op_count += static_cast<std::uint64_t>(n + 1 - p);
    }
  }
  GridPoint x(n);
  for (int i = 0; i < n; ++i) x[i] = static_cast<Integer>(m[i][n] & mask);
  out.point = std::move(x);
  return out;
}

ClassicalSolution solve_exact(const LinearSystem& system) {
  const int n = system.n();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = Rational(system.A()(i, j));
    m[i][n] = -Rational(system.b()[i]);
  }

  ClassicalSolution out;
  for (int p = 0; p < n; ++p) {
    int pivot = p;
    while (pivot < n && m[pivot][p] == 0) ++pivot;
    if (pivot == n) return out;
    std::swap(m[p], m[pivot]);
    for (int i = p + 1; i < n; ++i) {
      if (m[i][p] == 0) continue;
      const Rational factor = m[i][p] / m[p][p];
      for (int j = p; j <= n; ++j) m[i][j] -= factor * m[p][j];
      out.op_count += static_cast<std::uint64_t>(n + 1 - p);
    }
  }
  std::vector<Rational> x(n);
  for (int i = n - 1; i >= 0; --i) {
    Rational acc = m[i][n];
    for (int j = i + 1; j < n; ++j) acc -= m[i][j] * x[j];
    x[i] = acc / m[i][i];
    out.op_count += static_cast<std::uint64_t>(n - i);
  }

  GridPoint point(n);
  for (int i = 0; i < n; ++i) {
    if (boost::multiprecision::denominator(x[i]) != 1) return out;
    const BigInt v = boost::multiprecision::numerator(x[i]);
    if (v < 0 || v >= system.M()) return out;
    point[i] = static_cast<Integer>(v);
  }
  out.point = std::move(point);
  return out;
}

}  // namespace

ClassicalSolution classical_solve(const LinearSystem& system) {
  return system.mode() == ArithmeticMode::ModularM ? solve_modular(system) : solve_exact(system);
}

}  // namespace qminv
