#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qminv/search_state.hpp"
#include "qminv/types.hpp"

namespace qminv {

/// Status of one logical register. `row` is the 0-based row whose product or
/// residual the register holds; -1 when clean.
struct RegisterSlot {
  enum class Status { Clean, HoldsProduct, HoldsResidual };
  Status status = Status::Clean;
  int row = -1;

  bool clean() const { return status == Status::Clean; }
  friend bool operator==(const RegisterSlot&, const RegisterSlot&) = default;
};

struct LedgerEvent {
  std::string kind;  // "prepare" | "compute_row" | "uncompute"
  int row = -1;
  std::uint64_t op_count = 0;
  std::uint64_t uncompute_count = 0;
};

/// Bookkeeping for the 3n logical registers: n data registers holding x, n
/// work registers for the products a_ij x_j, and n residual registers f_i.
///
/// Only the data registers carry amplitudes in the simulator. Work and
/// residual registers are injective functions of x, so their contents are
/// tracked here symbolically together with the step counts.
///
/// Counting convention: one Hadamard layer per data register, one step per
/// register-level multiply, one per addition into f_i (b_i included). The
/// backward pass that clears a row's products is counted separately in
/// uncompute_count.
class RegisterLedger {
 public:
  explicit RegisterLedger(int n);

  int n() const { return n_; }
  const std::vector<RegisterSlot>& work() const { return work_; }
  const std::vector<RegisterSlot>& residuals() const { return residuals_; }

  std::uint64_t op_count() const { return multiply_count_ + add_count_ + hadamard_count_; }
  std::uint64_t multiply_count() const { return multiply_count_; }
  std::uint64_t add_count() const { return add_count_; }
  std::uint64_t hadamard_count() const { return hadamard_count_; }
  std::uint64_t uncompute_count() const { return uncompute_count_; }

  bool work_clean() const;
  /// True when the first `rows` residual registers are held and all others,
  /// plus every work register, are clean.
  bool at_stage_boundary(int rows) const;

  const std::vector<LedgerEvent>& trace() const { return trace_; }
  /// One JSON object per line, in transition order.
  std::string trace_json_lines() const;

  // Transitions. Each returns the successor ledger; *this is untouched.
  RegisterLedger with_hadamard_layer() const;
  RegisterLedger with_row_computed(int row) const;
  RegisterLedger with_garbage_uncomputed(int row) const;

 private:
  void record(const char* kind, int row);

  int n_;
  std::vector<RegisterSlot> work_;
  std::vector<RegisterSlot> residuals_;
  std::uint64_t hadamard_count_ = 0;
  std::uint64_t multiply_count_ = 0;
  std::uint64_t add_count_ = 0;
  std::uint64_t uncompute_count_ = 0;
  std::vector<LedgerEvent> trace_;
};

/// Fresh ledger after the Hadamard layer on the data registers.
RegisterLedger prepare_ledger(int n);
RegisterLedger compute_row(const RegisterLedger& ledger, int row);
RegisterLedger uncompute_garbage(const RegisterLedger& ledger, int row);

/// compute_row + uncompute_garbage for rows [0, rows).
RegisterLedger preparation_sweep(RegisterLedger ledger, int rows);

/// |psi(0)>: uniform data registers and an all-clean ledger.
template <typename Scalar = double>
std::pair<RegisterLedger, SearchState<Scalar>> prepare_initial(int n, Integer M) {
  SearchState<Scalar> state = init_uniform<Scalar>(n, M);
  return {prepare_ledger(n), std::move(state)};
}

}  // namespace qminv
