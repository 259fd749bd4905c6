#pragma once

// Sampling one layer (fixed coordinate on axis 0) column by column. A column
// is a line along the last axis; its open cells are drawn jointly from the CP
// distribution with weights built from the residual sums of the lines that
// cross each cell. After every column the structure propagation is rerun on
// the lines of the layer, so the next column never sees a trivial cell.
// Lines running across layers are only re-examined once the layer is done;
// conflicts that show up there become rejections.

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zotab/cp.hpp"
#include "zotab/structure.hpp"

namespace zotab {

struct RejectStage {
  std::string phase;  // "structure", "column" or "cp"
  int layer = -1;
  std::size_t column = 0;
  LineRef failed_line;
  std::string describe() const {
    std::string s = phase;
    if (layer >= 0) s += " layer=" + std::to_string(layer);
    if (phase != "structure") s += " column=" + std::to_string(column);
    s += " line(axis=" + std::to_string(failed_line.axis) + ", index=" + std::to_string(failed_line.index) + ")";
    return s;
  }
};

struct ColumnDraw {
  std::size_t column = 0;           // line index along the last axis
  std::vector<std::size_t> cells;   // open cells of the column
  WeightVector weights;             // one odds weight per open cell
  int ones = 0;                     // residual sum of the column
};

// Indices sorted by decreasing sum; ties keep ascending index.
inline std::vector<std::size_t> order_by_decreasing(std::span<const int> sums) {
  std::vector<std::size_t> order(sums.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sums[a] > sums[b]; });
  return order;
}

inline int column_axis(const Dims& dims) { return dims.d() - 1; }

// Column (last-axis line) indices belonging to layer `layer` of axis 0.
inline std::pair<std::size_t, std::size_t> layer_column_range(const Dims& dims, int layer) {
  const std::size_t per_layer = dims.lines(column_axis(dims)) / static_cast<std::size_t>(dims[0]);
  return {static_cast<std::size_t>(layer) * per_layer, static_cast<std::size_t>(layer + 1) * per_layer};
}

// Open columns of a layer, largest residual first.
inline std::vector<std::size_t> reorder_columns(const PartialTable& st, int layer) {
  const int ax = column_axis(st.dims());
  const auto [lo, hi] = layer_column_range(st.dims(), layer);
  std::vector<std::size_t> cols;
  std::vector<int> sums;
  for (std::size_t c = lo; c < hi; ++c) {
    if (st.open_count(ax, c) == 0) continue;
    cols.push_back(c);
    sums.push_back(st.residual(ax, c));
  }
  std::vector<std::size_t> out;
  for (std::size_t i : order_by_decreasing(sums)) out.push_back(cols[i]);
  return out;
}

// CP weights for the open cells of a column. For each crossing axis b the
// line through the cell has residual r_b and n_b - g_b open cells, with g_b
// counting every already-determined cell of the line.
inline ColumnDraw column_weights(const PartialTable& st, std::size_t column) {
  const Dims& dims = st.dims();
  const int ax = column_axis(dims);
  const int cross = dims.d() - 1;
  ColumnDraw draw;
  draw.column = column;
  draw.ones = st.residual(ax, column);
  std::vector<double> lw;
  std::vector<int> r(static_cast<std::size_t>(cross)), n(static_cast<std::size_t>(cross)), g(static_cast<std::size_t>(cross));
  for (int t = 0; t < dims[ax]; ++t) {
    const std::size_t idx = st.line_cell(ax, column, t);
    if (!st.is_open(idx)) continue;
    for (int b = 0; b < cross; ++b) {
      const std::size_t line = st.line_of(b, idx);
      r[b] = st.residual(b, line);
      n[b] = dims[b];
      g[b] = dims[b] - st.open_count(b, line);
    }
    draw.cells.push_back(idx);
    lw.push_back(log_odds_d(r, n, g));
  }
  draw.weights = WeightVector::from_log(std::move(lw));
  return draw;
}

// Open cells of a column whose value is already implied by a crossing line
// that propagation has not visited yet (an empty or saturated line outside
// the layer in scope). Returns (cell, value) pairs.
inline std::vector<std::pair<std::size_t, int>> implied_cells(const PartialTable& st, std::size_t column) {
  const Dims& dims = st.dims();
  const int ax = column_axis(dims);
  std::vector<std::pair<std::size_t, int>> out;
  for (int t = 0; t < dims[ax]; ++t) {
    const std::size_t idx = st.line_cell(ax, column, t);
    if (!st.is_open(idx)) continue;
    for (int b = 0; b < ax; ++b) {
      const std::size_t line = st.line_of(b, idx);
      const int r = st.residual(b, line);
      if (r <= 0 || r >= st.open_count(b, line)) {
        out.emplace_back(idx, r <= 0 ? 0 : 1);
        break;
      }
    }
  }
  return out;
}

// Writes the CP choice into the table and propagates. False on infeasibility.
inline bool apply_column(PartialTable& st, const ColumnDraw& draw, const CPSample& pick) {
  std::vector<std::uint8_t> one(draw.cells.size(), 0);
  for (std::size_t k : pick.chosen) one[k] = 1;
  for (std::size_t k = 0; k < draw.cells.size(); ++k)
    if (st.is_open(draw.cells[k])) st.assign(draw.cells[k], one[k]);
  return st.propagate();
}

// Chooser that draws from the CP law with the drafting sampler.
template <class URBG>
struct DraftChooser {
  URBG& rng;
  CPSample operator()(const WeightVector& w, int ones) { return cp_draft_sample(w, ones, rng); }
};

struct LayerResult {
  bool ok = true;
  double log_q = 0.0;
  std::optional<RejectStage> rejected;
};

// Draws one column: weights, CP choice, propagation. Returns the log CP
// probability or a rejection.
template <class Chooser>
std::optional<double> draw_column(PartialTable& st, std::size_t column, Chooser& choose, RejectStage& why) {
  // Implied cells are probability-one events; fix them first.
  for (auto implied = implied_cells(st, column); !implied.empty(); implied = implied_cells(st, column)) {
    for (const auto& [idx, v] : implied)
      if (st.is_open(idx)) st.assign(idx, v);
    if (!st.propagate()) {
      why.phase = "column";
      why.column = column;
      why.failed_line = st.failure();
      return std::nullopt;
    }
  }
  if (st.open_count(column_axis(st.dims()), column) == 0) return 0.0;
  const ColumnDraw draw = column_weights(st, column);
  CPSample pick;
  try {
    pick = choose(draw.weights, draw.ones);
  } catch (const CPDegenerate&) {
    why.phase = "cp";
    why.column = column;
    why.failed_line = {column_axis(st.dims()), column};
    return std::nullopt;
  }
  if (!apply_column(st, draw, pick)) {
    why.phase = "column";
    why.column = column;
    why.failed_line = st.failure();
    return std::nullopt;
  }
  return pick.log_prob;
}

template <class Chooser>
LayerResult sample_layer(PartialTable& st, int layer, Chooser& choose) {
  LayerResult out;
  st.set_scope(layer);
  for (;;) {
    const auto order = reorder_columns(st, layer);
    if (order.empty()) break;
    RejectStage why;
    why.layer = layer;
    const auto lp = draw_column(st, order.front(), choose, why);
    if (!lp) {
      out.ok = false;
      out.rejected = why;
      break;
    }
    out.log_q += *lp;
  }
  st.set_scope(-1);
  return out;
}

}  // namespace zotab
