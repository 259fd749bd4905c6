#pragma once

// Dense zero-one tables, their (d-1)-way margins, and the shape arithmetic
// shared by the rest of the library.
//
// Storage is row-major. The margin along axis `a` (the sums obtained by
// collapsing axis `a`) is stored row-major over the remaining axes in their
// original order, so for a 3-way m x n x l table:
//   margin 0 = X_{+jk}  (n x l)
//   margin 1 = X_{i+k}  (m x l)
//   margin 2 = X_{ij+}  (m x n)

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace zotab {

struct Dims {
  std::vector<int> sizes;

  Dims() = default;
  explicit Dims(std::vector<int> s) : sizes(std::move(s)) { check(); }
  Dims(std::initializer_list<int> s) : sizes(s) { check(); }

  int d() const { return static_cast<int>(sizes.size()); }
  int operator[](int axis) const { return sizes[static_cast<std::size_t>(axis)]; }

  std::size_t cells() const {
    std::size_t n = 1;
    for (int s : sizes) n *= static_cast<std::size_t>(s);
    return n;
  }

  // Stride of `axis` in the row-major cell index.
  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int a = d() - 1; a > axis; --a) s *= static_cast<std::size_t>(sizes[a]);
    return s;
  }

  // Number of lines (fibres) running along `axis`, i.e. entries of margin `axis`.
  std::size_t lines(int axis) const { return cells() / static_cast<std::size_t>(sizes[axis]); }

  std::vector<int> without(int axis) const {
    std::vector<int> out;
    for (int a = 0; a < d(); ++a)
      if (a != axis) out.push_back(sizes[a]);
    return out;
  }

  // Index of the line along `axis` that passes through `cell`.
  std::size_t line_of(int axis, std::size_t cell) const {
    const std::size_t st = stride(axis);
    const std::size_t hi = cell / (st * static_cast<std::size_t>(sizes[axis]));
    return hi * st + cell % st;
  }

  // First cell (coordinate 0 along `axis`) of a line.
  std::size_t line_base(int axis, std::size_t line) const {
    const std::size_t st = stride(axis);
    return (line / st) * st * static_cast<std::size_t>(sizes[axis]) + line % st;
  }

  std::vector<int> coords(std::size_t cell) const {
    std::vector<int> c(sizes.size());
    for (int a = d() - 1; a >= 0; --a) {
      c[a] = static_cast<int>(cell % static_cast<std::size_t>(sizes[a]));
      cell /= static_cast<std::size_t>(sizes[a]);
    }
    return c;
  }

  std::size_t index(std::span<const int> c) const {
    std::size_t idx = 0;
    for (int a = 0; a < d(); ++a) idx = idx * static_cast<std::size_t>(sizes[a]) + static_cast<std::size_t>(c[a]);
    return idx;
  }

  friend bool operator==(const Dims&, const Dims&) = default;

 private:
  void check() const {
    if (sizes.size() < 2) throw std::invalid_argument("a table needs at least two axes");
    for (int s : sizes)
      if (s < 1) throw std::invalid_argument("every axis size must be >= 1");
  }
};

inline std::string to_string(const Dims& dims) {
  std::ostringstream os;
  for (int a = 0; a < dims.d(); ++a) os << (a ? "x" : "") << dims[a];
  return os.str();
}

struct BinaryTable {
  Dims dims;
  std::vector<std::uint8_t> cells;

  BinaryTable() = default;
  explicit BinaryTable(Dims d) : dims(std::move(d)), cells(dims.cells(), 0) {}
  BinaryTable(Dims d, std::vector<std::uint8_t> c) : dims(std::move(d)), cells(std::move(c)) {
    if (cells.size() != dims.cells()) throw std::invalid_argument("cell count does not match dims");
    for (auto v : cells)
      if (v > 1) throw std::invalid_argument("table cells must be 0 or 1");
  }

  std::uint8_t at(std::span<const int> c) const { return cells[dims.index(c)]; }
  std::uint8_t at(std::initializer_list<int> c) const { return at(std::span<const int>(c.begin(), c.size())); }
  void set(std::span<const int> c, std::uint8_t v) { cells[dims.index(c)] = v; }

  std::int64_t ones() const { return std::accumulate(cells.begin(), cells.end(), std::int64_t{0}); }

  friend bool operator==(const BinaryTable&, const BinaryTable&) = default;
  friend auto operator<=>(const BinaryTable& a, const BinaryTable& b) { return a.cells <=> b.cells; }
};

struct MarginalSet {
  Dims dims;
  // margins[a] has dims.lines(a) entries.
  std::vector<std::vector<int>> margins;

  const std::vector<int>& margin(int axis) const { return margins[static_cast<std::size_t>(axis)]; }

  friend bool operator==(const MarginalSet&, const MarginalSet&) = default;
};

// A: the cell's value is determined by the margins; B: determined and equal to 1.
struct StructureMasks {
  std::vector<std::uint8_t> determined;
  std::vector<std::uint8_t> forced_one;
};

enum class ViolationKind { shape_mismatch, negative_entry, bound_exceeded, total_mismatch, projection_mismatch };

struct MarginViolation {
  ViolationKind kind;
  std::string detail;
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::shape_mismatch: return "shape mismatch";
    case ViolationKind::negative_entry: return "negative entry";
    case ViolationKind::bound_exceeded: return "bound exceeded";
    case ViolationKind::total_mismatch: return "grand-total mismatch";
    case ViolationKind::projection_mismatch: return "inconsistent shared projection";
  }
  return "?";
}

// Index of the (d-2)-way line obtained by dropping axes a and b from `cell`.
inline std::size_t drop_two(const Dims& dims, std::size_t cell, int a, int b) {
  Dims reduced;
  reduced.sizes = dims.without(a);
  return reduced.line_of(b > a ? b - 1 : b, dims.line_of(a, cell));
}

// Necessary conditions only: passing does not mean a realizing table exists.
inline std::optional<MarginViolation> validate_marginals(const MarginalSet& m) {
  const Dims& dims = m.dims;
  const int d = dims.d();
  auto fail = [](ViolationKind k, std::string s) { return MarginViolation{k, std::move(s)}; };

  if (static_cast<int>(m.margins.size()) != d)
    return fail(ViolationKind::shape_mismatch, "expected " + std::to_string(d) + " margin arrays, got " +
                                                   std::to_string(m.margins.size()));
  for (int a = 0; a < d; ++a)
    if (m.margin(a).size() != dims.lines(a))
      return fail(ViolationKind::shape_mismatch, "margin " + std::to_string(a) + " has " +
                                                     std::to_string(m.margin(a).size()) + " entries, expected " +
                                                     std::to_string(dims.lines(a)));
  for (int a = 0; a < d; ++a)
    for (std::size_t i = 0; i < m.margin(a).size(); ++i) {
      const int v = m.margin(a)[i];
      if (v < 0)
        return fail(ViolationKind::negative_entry, "margin " + std::to_string(a) + " entry " + std::to_string(i));
      if (v > dims[a])
        return fail(ViolationKind::bound_exceeded, "margin " + std::to_string(a) + " entry " + std::to_string(i) +
                                                       " = " + std::to_string(v) + " > " + std::to_string(dims[a]));
    }

  std::vector<std::int64_t> totals;
  for (int a = 0; a < d; ++a)
    totals.push_back(std::accumulate(m.margin(a).begin(), m.margin(a).end(), std::int64_t{0}));
  for (int a = 1; a < d; ++a)
    if (totals[a] != totals[0])
      return fail(ViolationKind::total_mismatch, "margin 0 sums to " + std::to_string(totals[0]) + ", margin " +
                                                     std::to_string(a) + " sums to " + std::to_string(totals[a]));

  // Collapsing margin a along b and margin b along a gives the same (d-2)-way array.
  if (d >= 3) {
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) {
        const std::size_t size = dims.cells() / static_cast<std::size_t>(dims[a]) / static_cast<std::size_t>(dims[b]);
        std::vector<std::int64_t> via_a(size, 0), via_b(size, 0);
        const std::size_t sa = dims.stride(a), sb = dims.stride(b);
        for (std::size_t cell = 0; cell < dims.cells(); ++cell) {
          const bool a0 = (cell / sa) % static_cast<std::size_t>(dims[a]) == 0;
          const bool b0 = (cell / sb) % static_cast<std::size_t>(dims[b]) == 0;
          if (!a0 && !b0) continue;
          const std::size_t key = drop_two(dims, cell, a, b);
          if (a0) via_a[key] += m.margin(a)[dims.line_of(a, cell)];
          if (b0) via_b[key] += m.margin(b)[dims.line_of(b, cell)];
        }
        if (via_a != via_b)
          return fail(ViolationKind::projection_mismatch,
                      "margins " + std::to_string(a) + " and " + std::to_string(b) + " disagree on their shared sums");
      }
  }
  return std::nullopt;
}

inline MarginalSet marginals_of(const BinaryTable& t) {
  MarginalSet m{t.dims, {}};
  const int d = t.dims.d();
  m.margins.resize(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) m.margins[a].assign(t.dims.lines(a), 0);
  for (std::size_t cell = 0; cell < t.cells.size(); ++cell) {
    if (!t.cells[cell]) continue;
    for (int a = 0; a < d; ++a) ++m.margins[a][t.dims.line_of(a, cell)];
  }
  return m;
}

// New axis t is old axis perm[t].
inline BinaryTable permute_axes(const BinaryTable& t, std::span<const int> perm) {
  const int d = t.dims.d();
  std::vector<int> sizes(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) sizes[a] = t.dims[perm[a]];
  BinaryTable out{Dims(sizes)};
  std::vector<int> nc(static_cast<std::size_t>(d));
  for (std::size_t cell = 0; cell < t.cells.size(); ++cell) {
    const auto oc = t.dims.coords(cell);
    for (int a = 0; a < d; ++a) nc[a] = oc[perm[a]];
    out.cells[out.dims.index(nc)] = t.cells[cell];
  }
  return out;
}

inline MarginalSet permute_axes(const MarginalSet& m, std::span<const int> perm) {
  const int d = m.dims.d();
  std::vector<int> sizes(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) sizes[a] = m.dims[perm[a]];
  MarginalSet out{Dims(sizes), std::vector<std::vector<int>>(static_cast<std::size_t>(d))};
  for (int a = 0; a < d; ++a) out.margins[a].assign(out.dims.lines(a), 0);
  std::vector<int> oc(static_cast<std::size_t>(d));
  for (std::size_t cell = 0; cell < out.dims.cells(); ++cell) {
    const auto nc = out.dims.coords(cell);
    for (int a = 0; a < d; ++a) oc[perm[a]] = nc[a];
    const std::size_t old_cell = m.dims.index(oc);
    for (int a = 0; a < d; ++a)
      out.margins[a][out.dims.line_of(a, cell)] = m.margin(perm[a])[m.dims.line_of(perm[a], old_cell)];
  }
  return out;
}

// Convenience constructor for the 3-way case using the si/sj/sk naming.
inline MarginalSet three_way(int m, int n, int l, std::vector<int> si, std::vector<int> sj, std::vector<int> sk) {
  return MarginalSet{Dims{m, n, l}, {std::move(si), std::move(sj), std::move(sk)}};
}

}  // namespace zotab
