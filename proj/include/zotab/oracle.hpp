#pragma once

// Exact counting and enumeration of all zero-one tables with given margins:
// depth-first search over cells in lexicographic order, with structure
// propagation after every assignment. Intended for desk-scale inputs; a node
// budget keeps runaway searches bounded.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "zotab/structure.hpp"
#include "zotab/tables.hpp"

namespace zotab {

using BigCount = boost::multiprecision::cpp_int;

struct BudgetExceeded : std::runtime_error {
  std::uint64_t nodes;
  BigCount partial;
  BudgetExceeded(std::uint64_t n, BigCount p)
      : std::runtime_error("search budget of " + std::to_string(n) + " nodes exceeded after counting " +
                           p.str() + " tables"),
        nodes(n),
        partial(std::move(p)) {}
};

struct OracleOptions {
  std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max();
};

namespace detail {

// Shape errors are caller bugs; any other violation just means no table exists.
inline bool margins_unsatisfiable(const MarginalSet& m) {
  const auto v = validate_marginals(m);
  if (v && v->kind == ViolationKind::shape_mismatch) throw std::invalid_argument("shape mismatch: " + v->detail);
  return v.has_value();
}

class TableSearch {
 public:
  TableSearch(std::uint64_t budget, std::size_t limit, std::vector<BinaryTable>* sink)
      : budget_(budget), limit_(limit), sink_(sink) {}

  void run(const MarginalSet& m) {
    PartialTable root(m);
    if (!root.propagate()) return;
    visit(root, 0);
  }

  const BigCount& count() const { return count_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  bool full() const { return sink_ && sink_->size() >= limit_; }

  void visit(const PartialTable& st, std::size_t from) {
    if (++nodes_ > budget_) throw BudgetExceeded(budget_, count_);
    if (full()) return;
    std::size_t idx = from;
    const std::size_t n = st.dims().cells();
    while (idx < n && !st.is_open(idx)) ++idx;
    if (idx == n) {
      ++count_;
      if (sink_) sink_->push_back(st.to_table());
      return;
    }
    for (int v = 0; v <= 1; ++v) {
      PartialTable child = st;
      child.assign(idx, v);
      if (child.propagate()) visit(child, idx + 1);
      if (full()) return;
    }
  }

  std::uint64_t budget_;
  std::size_t limit_;
  std::vector<BinaryTable>* sink_;
  std::uint64_t nodes_ = 0;
  BigCount count_ = 0;
};

}  // namespace detail

// |Sigma|, the number of zero-one tables meeting every margin.
inline BigCount exact_count(const MarginalSet& m, const OracleOptions& opt = {}) {
  if (detail::margins_unsatisfiable(m)) return 0;
  detail::TableSearch search(opt.node_budget, 0, nullptr);
  search.run(m);
  return search.count();
}

// Up to `limit` distinct tables meeting every margin, in lexicographic order
// of their cells.
inline std::vector<BinaryTable> exact_enumerate(const MarginalSet& m, std::size_t limit,
                                                const OracleOptions& opt = {}) {
  std::vector<BinaryTable> out;
  if (detail::margins_unsatisfiable(m) || limit == 0) return out;
  detail::TableSearch search(opt.node_budget, limit, &out);
  search.run(m);
  return out;
}

}  // namespace zotab
