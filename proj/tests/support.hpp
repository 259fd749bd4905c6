#pragma once

// Test-only helpers that deliberately avoid the library's search and
// propagation code, so they can serve as independent references.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "zotab/cp.hpp"
#include "zotab/tables.hpp"

namespace zt {

// All size-k subsets of {0..n-1} as index lists, in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = from; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// Counts 3-way tables by listing, per layer i, every n x l zero-one matrix
// with row sums sk[i,.] and column sums sj[i,.], then stacking layers while
// keeping the partial sums below si.
inline std::uint64_t brute_count3(const zotab::MarginalSet& ms) {
  const int m = ms.dims[0], n = ms.dims[1], l = ms.dims[2];
  const auto& si = ms.margin(0);
  const auto& sj = ms.margin(1);
  const auto& sk = ms.margin(2);
  std::vector<std::vector<std::vector<int>>> layers(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    std::vector<std::vector<std::vector<std::size_t>>> row_opts;
    for (int j = 0; j < n; ++j) row_opts.push_back(subsets(static_cast<std::size_t>(l), static_cast<std::size_t>(sk[i * n + j])));
    std::vector<int> mat(static_cast<std::size_t>(n * l));
    std::function<void(int)> rec = [&](int j) {
      if (j == n) {
        for (int k = 0; k < l; ++k) {
          int s = 0;
          for (int jj = 0; jj < n; ++jj) s += mat[jj * l + k];
          if (s != sj[i * l + k]) return;
        }
        layers[i].push_back(mat);
        return;
      }
      for (const auto& pick : row_opts[j]) {
        std::fill(mat.begin() + j * l, mat.begin() + (j + 1) * l, 0);
        for (auto k : pick) mat[j * l + static_cast<int>(k)] = 1;
        rec(j + 1);
      }
    };
    rec(0);
  }
  std::uint64_t total = 0;
  std::vector<int> acc(static_cast<std::size_t>(n * l), 0);
  std::function<void(int)> stack = [&](int i) {
    if (i == m) {
      if (std::equal(acc.begin(), acc.end(), si.begin())) ++total;
      return;
    }
    for (const auto& lay : layers[i]) {
      bool ok = true;
      for (std::size_t c = 0; c < acc.size(); ++c) {
        acc[c] += lay[c];
        ok = ok && acc[c] <= si[c];
      }
      if (ok) stack(i + 1);
      for (std::size_t c = 0; c < acc.size(); ++c) acc[c] -= lay[c];
    }
  };
  stack(0);
  return total;
}

// Counts d-way tables by trying all 2^cells fillings; only for tiny shapes.
inline std::uint64_t brute_count_small(const zotab::MarginalSet& ms) {
  const std::size_t cells = ms.dims.cells();
  std::uint64_t total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
    zotab::BinaryTable t{ms.dims};
    for (std::size_t c = 0; c < cells; ++c) t.cells[c] = (mask >> c) & 1;
    if (zotab::marginals_of(t) == ms) ++total;
  }
  return total;
}

inline zotab::BinaryTable random_table(const zotab::Dims& dims, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution bit(p);
  zotab::BinaryTable t{dims};
  for (auto& c : t.cells) c = bit(rng) ? 1 : 0;
  return t;
}

// CP chooser that walks every decision path of a sampler in turn. Each call
// offers all subsets of the requested size over the positive-weight units and
// returns the one selected by the current odometer position, with its exact
// CP probability. Use as:
//   PathChooser pc;
//   do { run sampler with pc; ... } while (pc.next());
class PathChooser {
 public:
  zotab::CPSample operator()(const zotab::WeightVector& w, int ones) {
    std::vector<std::size_t> positive;
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w.log_weight(k) > zotab::kNegInf) positive.push_back(k);
    const auto options = subsets(positive.size(), static_cast<std::size_t>(ones));
    if (options.empty()) throw zotab::CPDegenerate("no subset of the requested size");
    if (depth_ == choice_.size()) {
      choice_.push_back(0);
      count_.push_back(options.size());
    }
    zotab::CPSample s;
    for (auto i : options[choice_[depth_]]) s.chosen.push_back(positive[i]);
    s.log_prob = zotab::cp_pmf_log(w, ones, s.chosen);
    log_prob_ += s.log_prob;
    ++depth_;
    return s;
  }

  // log probability of the choices made so far on the current path.
  double log_prob() const { return log_prob_; }

  // Moves to the next path; false once every path has been visited.
  bool next() {
    choice_.resize(depth_);
    count_.resize(depth_);
    depth_ = 0;
    log_prob_ = 0.0;
    while (!choice_.empty()) {
      if (++choice_.back() < count_.back()) return true;
      choice_.pop_back();
      count_.pop_back();
    }
    return false;
  }

 private:
  std::vector<std::size_t> choice_, count_;
  std::size_t depth_ = 0;
  double log_prob_ = 0.0;
};

}  // namespace zt
