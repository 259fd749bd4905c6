#pragma once

// Structural zero/one detection. A PartialTable tracks which cells are still
// open, the residual margin of every line (margin minus ones already placed on
// it) and the number of open cells per line. Propagation forces a line when
// its residual is 0 (remaining cells are zeros) or equals its open count
// (remaining cells are ones), and repeats until nothing changes.

#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "zotab/tables.hpp"

namespace zotab {

struct LineRef {
  int axis = 0;
  std::size_t index = 0;
  friend bool operator==(const LineRef&, const LineRef&) = default;
};

inline LineRef line_through(const Dims& dims, int axis, std::span<const int> coords) {
  return {axis, dims.line_of(axis, dims.index(coords))};
}

struct InfeasibleMargins : std::runtime_error {
  LineRef line;
  int residual;
  int open;
  InfeasibleMargins(LineRef l, int r, int o)
      : std::runtime_error("infeasible margins: line " + std::to_string(l.index) + " along axis " +
                           std::to_string(l.axis) + " needs " + std::to_string(r) + " ones in " +
                           std::to_string(o) + " open cells"),
        line(l),
        residual(r),
        open(o) {}
};

class PartialTable {
 public:
  static constexpr std::int8_t kOpen = -1;

  PartialTable() = default;

  explicit PartialTable(const MarginalSet& m)
      : dims_(m.dims), cells_(m.dims.cells(), kOpen), open_total_(m.dims.cells()) {
    const int d = dims_.d();
    residual_.resize(static_cast<std::size_t>(d));
    open_.resize(static_cast<std::size_t>(d));
    queued_.resize(static_cast<std::size_t>(d));
    strides_.resize(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
      if (m.margin(a).size() != dims_.lines(a)) throw std::invalid_argument("margin shape does not match dims");
      residual_[a] = m.margin(a);
      open_[a].assign(dims_.lines(a), dims_[a]);
      queued_[a].assign(dims_.lines(a), 0);
      strides_[a] = dims_.stride(a);
    }
    for (int a = 0; a < d; ++a)
      for (std::size_t l = 0; l < dims_.lines(a); ++l) enqueue(a, l);
  }

  const Dims& dims() const { return dims_; }
  std::int8_t cell(std::size_t idx) const { return cells_[idx]; }
  bool is_open(std::size_t idx) const { return cells_[idx] == kOpen; }
  int residual(int axis, std::size_t line) const { return residual_[axis][line]; }
  int open_count(int axis, std::size_t line) const { return open_[axis][line]; }
  std::size_t open_cells() const { return open_total_; }
  bool complete() const { return open_total_ == 0; }

  // Cells of a line in order of the coordinate along `axis`.
  std::size_t line_cell(int axis, std::size_t line, int t) const {
    const std::size_t st = strides_[axis];
    return (line / st) * st * static_cast<std::size_t>(dims_[axis]) + line % st + static_cast<std::size_t>(t) * st;
  }

  // Fixes an open cell. Lines through it are queued for the next propagate().
  void assign(std::size_t idx, int value) {
    if (cells_[idx] != kOpen) throw std::logic_error("cell already determined");
    cells_[idx] = static_cast<std::int8_t>(value);
    --open_total_;
    for (int a = 0; a < dims_.d(); ++a) {
      const std::size_t l = line_of(a, idx);
      --open_[a][l];
      residual_[a][l] -= value;
      enqueue(a, l);
    }
  }

  // Runs structure detection to a fixpoint. Returns false (and records the
  // offending line) if some line cannot be completed.
  bool propagate() {
    while (!queue_.empty()) {
      const auto [a, l] = queue_.front();
      queue_.pop_front();
      if (scope_ >= 0 && !in_scope(a, l)) {
        deferred_.emplace_back(a, l);
        continue;
      }
      queued_[a][l] = 0;
      const int r = residual_[a][l];
      const int f = open_[a][l];
      if (r < 0 || r > f) {
        failure_ = LineRef{a, l};
        queue_.clear();
        deferred_.clear();
        return false;
      }
      if (f == 0 || (r != 0 && r != f)) continue;
      const int value = r == 0 ? 0 : 1;
      for (int t = 0; t < dims_[a]; ++t) {
        const std::size_t idx = line_cell(a, l, t);
        if (cells_[idx] == kOpen) assign(idx, value);
      }
    }
    return true;
  }

  const LineRef& failure() const { return failure_; }

  // While a layer (coordinate on axis 0) is in scope, propagate() only looks
  // at lines lying inside that layer; every other queued line waits until the
  // scope is cleared with layer = -1.
  void set_scope(int layer) {
    scope_ = layer;
    if (layer >= 0) return;
    for (const auto& x : deferred_) queue_.push_back(x);
    deferred_.clear();
  }

  bool in_scope(int axis, std::size_t line) const {
    if (axis == 0) return false;
    const std::size_t per_layer = dims_.lines(axis) / static_cast<std::size_t>(dims_[0]);
    return line / per_layer == static_cast<std::size_t>(scope_);
  }

  BinaryTable to_table() const {
    if (!complete()) throw std::logic_error("table still has open cells");
    BinaryTable t{dims_};
    for (std::size_t i = 0; i < cells_.size(); ++i) t.cells[i] = static_cast<std::uint8_t>(cells_[i]);
    return t;
  }

  std::size_t line_of(int axis, std::size_t cell) const {
    const std::size_t st = strides_[axis];
    return (cell / (st * static_cast<std::size_t>(dims_[axis]))) * st + cell % st;
  }

 private:
  void enqueue(int a, std::size_t l) {
    if (queued_[a][l]) return;
    queued_[a][l] = 1;
    queue_.emplace_back(a, l);
  }

  Dims dims_;
  std::vector<std::int8_t> cells_;
  std::size_t open_total_ = 0;
  std::vector<std::vector<int>> residual_;
  std::vector<std::vector<int>> open_;
  std::vector<std::vector<std::uint8_t>> queued_;
  std::vector<std::size_t> strides_;
  std::deque<std::pair<int, std::size_t>> queue_;
  LineRef failure_;
  int scope_ = -1;
  std::vector<std::pair<int, std::size_t>> deferred_;
};

struct ReducedProblem {
  StructureMasks masks;
  // Input margins minus the forced ones on each line.
  MarginalSet reduced;
  // Open (unstructured) cells per line, indexed like the margins.
  std::vector<std::vector<int>> open_counts;
};

inline ReducedProblem reduce(const PartialTable& pt) {
  const Dims& dims = pt.dims();
  ReducedProblem rp;
  rp.masks.determined.assign(dims.cells(), 0);
  rp.masks.forced_one.assign(dims.cells(), 0);
  for (std::size_t i = 0; i < dims.cells(); ++i) {
    if (pt.is_open(i)) continue;
    rp.masks.determined[i] = 1;
    rp.masks.forced_one[i] = pt.cell(i) == 1;
  }
  rp.reduced.dims = dims;
  rp.reduced.margins.resize(static_cast<std::size_t>(dims.d()));
  rp.open_counts.resize(static_cast<std::size_t>(dims.d()));
  for (int a = 0; a < dims.d(); ++a)
    for (std::size_t l = 0; l < dims.lines(a); ++l) {
      rp.reduced.margins[a].push_back(pt.residual(a, l));
      rp.open_counts[a].push_back(pt.open_count(a, l));
    }
  return rp;
}

// Structures implied by the margins alone. Throws InfeasibleMargins when
// propagation finds a line that cannot be completed.
inline ReducedProblem detect_structures(const MarginalSet& m) {
  PartialTable pt(m);
  if (!pt.propagate()) {
    const LineRef bad = pt.failure();
    throw InfeasibleMargins(bad, pt.residual(bad.axis, bad.index), pt.open_count(bad.axis, bad.index));
  }
  return reduce(pt);
}

// Structural zeros on a line: determined cells that are not forced ones.
inline int free_count(const ReducedProblem& rp, LineRef line) {
  const Dims& dims = rp.reduced.dims;
  const std::size_t base = dims.line_base(line.axis, line.index);
  const std::size_t st = dims.stride(line.axis);
  int zeros = 0;
  for (int t = 0; t < dims[line.axis]; ++t) {
    const std::size_t idx = base + static_cast<std::size_t>(t) * st;
    zeros += rp.masks.determined[idx] && !rp.masks.forced_one[idx];
  }
  return zeros;
}

}  // namespace zotab
