#pragma once

// Sequential importance sampling of zero-one tables with fixed (d-1)-way
// margins. Every sample either completes into a table X that meets all
// margins, together with log q(X), or is rejected. Rejections stay in the
// weight stream as zeros so that mean(1{accepted}/q) stays unbiased for |Sigma|.
//
// 3-way tables are sampled layer by layer along axis 0 (largest residual
// layer first) and column by column inside a layer. For d != 3 the columns
// along the last axis are processed globally, largest residual first; this
// ordering is our extension, only the per-column CP law is given for d-way.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "zotab/layer.hpp"
#include "zotab/rng.hpp"
#include "zotab/structure.hpp"
#include "zotab/tables.hpp"

namespace zotab {

struct SampleOutcome {
  bool accepted = false;
  BinaryTable table;  // valid iff accepted
  double log_q = 0.0; // valid iff accepted
  std::optional<RejectStage> reject;
};

struct SisConfig {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  int layer_axis = 0;
  int workers = 1;
};

namespace detail {

inline void require_valid(const MarginalSet& m) {
  if (auto v = validate_marginals(m)) throw std::invalid_argument(std::string(to_string(v->kind)) + ": " + v->detail);
}

inline SampleOutcome rejected(RejectStage why) {
  SampleOutcome out;
  out.reject = std::move(why);
  return out;
}

inline SampleOutcome finish(const PartialTable& st, const MarginalSet& m, double log_q) {
  SampleOutcome out;
  out.table = st.to_table();
  if (!(marginals_of(out.table) == m)) throw std::logic_error("sampled table does not reproduce the margins");
  out.accepted = true;
  out.log_q = log_q;
  return out;
}

// Open layer of axis 0 with the largest residual sum, or -1 when none is open.
inline int pick_layer(const PartialTable& st) {
  const Dims& dims = st.dims();
  const int ax = column_axis(dims);
  int best = -1;
  long best_sum = -1;
  for (int i = 0; i < dims[0]; ++i) {
    const auto [lo, hi] = layer_column_range(dims, i);
    long sum = 0, open = 0;
    for (std::size_t c = lo; c < hi; ++c) {
      sum += st.residual(ax, c);
      open += st.open_count(ax, c);
    }
    if (open > 0 && sum > best_sum) {
      best = i;
      best_sum = sum;
    }
  }
  return best;
}

inline std::vector<int> front_permutation(int d, int axis) {
  std::vector<int> perm{axis};
  for (int a = 0; a < d; ++a)
    if (a != axis) perm.push_back(a);
  return perm;
}

inline std::vector<int> inverse(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t t = 0; t < perm.size(); ++t) inv[static_cast<std::size_t>(perm[t])] = static_cast<int>(t);
  return inv;
}

template <class Chooser>
SampleOutcome sample_layers(const MarginalSet& m, Chooser& choose) {
  PartialTable st(m);
  if (!st.propagate()) return rejected({"structure", -1, 0, st.failure()});
  double log_q = 0.0;
  for (int layer = pick_layer(st); layer >= 0; layer = pick_layer(st)) {
    LayerResult lr = sample_layer(st, layer, choose);
    if (!lr.ok) return rejected(*lr.rejected);
    if (!st.propagate()) return rejected({"structure", layer, 0, st.failure()});
    log_q += lr.log_q;
  }
  return finish(st, m, log_q);
}

}  // namespace detail

// Three-way sampler driven by an arbitrary CP chooser (a callable
// (const WeightVector&, int ones) -> CPSample). `layer_axis` selects which
// axis the layers are cut along; columns run along the last remaining axis.
template <class Chooser>
SampleOutcome sample_table3_with(const MarginalSet& m, Chooser& choose, int layer_axis = 0) {
  if (m.dims.d() != 3) throw std::invalid_argument("sample_table3 expects a 3-way table");
  if (layer_axis < 0 || layer_axis > 2) throw std::invalid_argument("layer_axis must be 0, 1 or 2");
  detail::require_valid(m);
  if (layer_axis == 0) return detail::sample_layers(m, choose);

  const auto perm = detail::front_permutation(3, layer_axis);
  SampleOutcome out = detail::sample_layers(permute_axes(m, perm), choose);
  if (out.accepted) out.table = permute_axes(out.table, detail::inverse(perm));
  return out;
}

template <class URBG>
SampleOutcome sample_table3(const MarginalSet& m, URBG& rng, int layer_axis = 0) {
  DraftChooser<URBG> choose{rng};
  return sample_table3_with(m, choose, layer_axis);
}

template <class Chooser>
SampleOutcome sample_table_d_with(const MarginalSet& m, Chooser& choose) {
  if (m.dims.d() == 3) return sample_table3_with(m, choose);
  detail::require_valid(m);
  PartialTable st(m);
  if (!st.propagate()) return detail::rejected({"structure", -1, 0, st.failure()});
  const int ax = column_axis(m.dims);
  const std::size_t columns = m.dims.lines(ax);
  double log_q = 0.0;
  for (;;) {
    std::size_t best = columns;
    int best_sum = -1;
    for (std::size_t c = 0; c < columns; ++c)
      if (st.open_count(ax, c) > 0 && st.residual(ax, c) > best_sum) {
        best = c;
        best_sum = st.residual(ax, c);
      }
    if (best == columns) break;
    RejectStage why;
    const auto lp = draw_column(st, best, choose, why);
    if (!lp) return detail::rejected(why);
    log_q += *lp;
  }
  return detail::finish(st, m, log_q);
}

template <class URBG>
SampleOutcome sample_table_d(const MarginalSet& m, URBG& rng) {
  DraftChooser<URBG> choose{rng};
  return sample_table_d_with(m, choose);
}

// Dispatches on dimension; the 3-way path honours the configured layer axis.
template <class URBG>
SampleOutcome sample_table(const MarginalSet& m, URBG& rng, int layer_axis = 0) {
  if (m.dims.d() == 3) return sample_table3(m, rng, layer_axis);
  return sample_table_d(m, rng);
}

// Importance weights Y_i = 1{accepted}/q(X_i), stored as log Y_i with -inf
// for rejections.
struct WeightStream {
  std::vector<double> log_y;

  std::size_t size() const { return log_y.size(); }
  std::size_t accepted() const {
    return static_cast<std::size_t>(std::count_if(log_y.begin(), log_y.end(), [](double v) { return v > kNegInf; }));
  }
};

// Sample i uses its own generator derived from (seed, i), so the stream is
// identical for any worker count.
inline WeightStream run_sis(const MarginalSet& m, const SisConfig& cfg) {
  if (cfg.samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
  detail::require_valid(m);

  WeightStream ws;
  ws.log_y.assign(cfg.samples, kNegInf);
  auto work = [&](std::size_t first, std::size_t step) {
    for (std::size_t i = first; i < cfg.samples; i += step) {
      auto rng = stream_rng(cfg.seed, i);
      const SampleOutcome s = sample_table(m, rng, cfg.layer_axis);
      if (s.accepted) ws.log_y[i] = -s.log_q;
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), cfg.samples);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          work(w, workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return ws;
}

}  // namespace zotab
