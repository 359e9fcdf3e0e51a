#include "qminv/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace qminv {

RegisterLedger::RegisterLedger(int n) : n_(n), work_(n), residuals_(n) {
  if (n < 1) throw std::invalid_argument("ledger needs at least one row");
}

bool RegisterLedger::work_clean() const {
  return std::all_of(work_.begin(), work_.end(), [](const RegisterSlot& s) { return s.clean(); });
}

bool RegisterLedger::at_stage_boundary(int rows) const {
  if (!work_clean()) return false;
  for (int i = 0; i < n_; ++i) {
    const bool held = residuals_[i].status == RegisterSlot::Status::HoldsResidual && residuals_[i].row == i;
    if (held != (i < rows)) return false;
  }
  return true;
}

void RegisterLedger::record(const char* kind, int row) {
  trace_.push_back({kind, row, op_count(), uncompute_count_});
}

std::string RegisterLedger::trace_json_lines() const {
  std::ostringstream out;
  for (const LedgerEvent& e : trace_) {
    nlohmann::json line{{"event", e.kind}, {"op_count", e.op_count}, {"uncompute_count", e.uncompute_count}};
    if (e.row >= 0) line["row"] = e.row + 1;
    out << line.dump() << '\n';
  }
  return out.str();
}

RegisterLedger RegisterLedger::with_hadamard_layer() const {
  RegisterLedger next = *this;
  next.hadamard_count_ += static_cast<std::uint64_t>(n_);
  next.record("prepare", -1);
  return next;
}

RegisterLedger RegisterLedger::with_row_computed(int row) const {
  if (row < 0 || row >= n_) throw LedgerError("row index out of range");
  if (!work_clean()) throw LedgerError("work registers must be uncomputed before row " + std::to_string(row + 1));
  if (!residuals_[row].clean()) throw LedgerError("residual register " + std::to_string(row + 1) + " already holds a value");

  RegisterLedger next = *this;
  for (RegisterSlot& slot : next.work_) slot = {RegisterSlot::Status::HoldsProduct, row};
  next.multiply_count_ += static_cast<std::uint64_t>(n_);
  next.residuals_[row] = {RegisterSlot::Status::HoldsResidual, row};
  next.add_count_ += static_cast<std::uint64_t>(n_);
  next.record("compute_row", row);
  return next;
}

RegisterLedger RegisterLedger::with_garbage_uncomputed(int row) const {
  if (row < 0 || row >= n_) throw LedgerError("row index out of range");
  const bool holds = std::all_of(work_.begin(), work_.end(), [row](const RegisterSlot& s) {
    return s.status == RegisterSlot::Status::HoldsProduct && s.row == row;
  });
  if (!holds) throw LedgerError("no products of row " + std::to_string(row + 1) + " to uncompute");

  RegisterLedger next = *this;
  for (RegisterSlot& slot : next.work_) slot = {};
  next.uncompute_count_ += static_cast<std::uint64_t>(n_);
  next.record("uncompute", row);
  return next;
}

RegisterLedger prepare_ledger(int n) { return RegisterLedger(n).with_hadamard_layer(); }

RegisterLedger compute_row(const RegisterLedger& ledger, int row) { return ledger.with_row_computed(row); }

RegisterLedger uncompute_garbage(const RegisterLedger& ledger, int row) { return ledger.with_garbage_uncomputed(row); }

RegisterLedger preparation_sweep(RegisterLedger ledger, int rows) {
  for (int i = 0; i < rows; ++i) ledger = uncompute_garbage(compute_row(ledger, i), i);
  return ledger;
}

}  // namespace qminv
