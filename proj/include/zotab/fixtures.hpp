#pragma once

// Built-in margin sets: the worked examples ex5_1 ... ex5_13 (3-way, si/sj/sk
// orientation) and generated semimagic cubes "cube_m<m>_s<s>" in which every
// two-way margin of an m x m x m table equals s. With s = 1 these are the
// Latin squares of order m.

#include <algorithm>
#include <charconv>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zotab/tables.hpp"

namespace zotab {

struct Fixture3 {
  const char* name;
  int m, n, l;
  std::vector<int> si, sj, sk;
};

inline const std::vector<Fixture3>& example_fixtures() {
  static const std::vector<Fixture3> all = {
      {"ex5_1", 3, 3, 3, {1, 1, 1, 1, 1, 1, 1, 1, 1}, {1, 1, 1, 1, 1, 1, 1, 1, 1}, {1, 1, 1, 1, 1, 1, 1, 1, 1}},
      {"ex5_2", 3, 3, 4,
       {2, 2, 2, 2, 1, 3, 2, 2, 2, 3, 3, 2},
       {2, 3, 2, 2, 1, 3, 3, 3, 2, 2, 2, 1},
       {3, 3, 3, 3, 3, 4, 2, 2, 3}},
      {"ex5_3", 3, 4, 4,
       {2, 2, 2, 1, 1, 1, 1, 0, 1, 1, 1, 2, 1, 1, 2, 3},
       {3, 3, 2, 1, 1, 0, 2, 2, 1, 2, 2, 3},
       {3, 2, 2, 2, 1, 0, 2, 2, 3, 1, 1, 3}},
      {"ex5_4", 3, 4, 4,
       {1, 2, 2, 1, 0, 1, 1, 2, 1, 0, 2, 1, 0, 1, 3, 2},
       {1, 2, 3, 2, 1, 1, 2, 3, 0, 1, 3, 1},
       {3, 1, 1, 3, 1, 2, 2, 2, 2, 1, 1, 1}},
      {"ex5_5", 4, 4, 4,
       {2, 3, 3, 2, 1, 3, 2, 1, 1, 2, 3, 0, 4, 2, 2, 2},
       {2, 2, 4, 1, 3, 2, 2, 2, 2, 3, 3, 1, 1, 3, 1, 1},
       {2, 2, 3, 2, 3, 2, 1, 3, 3, 2, 2, 2, 2, 1, 0, 3}},
      {"ex5_6", 4, 4, 4,
       {2, 3, 2, 3, 1, 2, 3, 2, 2, 2, 3, 2, 3, 2, 3, 2},
       {1, 4, 1, 3, 4, 2, 4, 2, 1, 2, 4, 3, 2, 1, 2, 1},
       {2, 2, 2, 3, 3, 3, 3, 3, 3, 2, 2, 3, 2, 1, 2, 1}},
      {"ex5_7", 4, 4, 4,
       {1, 2, 3, 1, 2, 3, 2, 3, 2, 4, 2, 1, 2, 1, 4, 1},
       {2, 3, 2, 0, 3, 2, 3, 2, 1, 3, 3, 1, 1, 2, 3, 3},
       {2, 1, 2, 2, 3, 2, 3, 2, 1, 4, 2, 1, 1, 3, 2, 3}},
      {"ex5_8", 4, 4, 4,
       {2, 4, 1, 3, 1, 2, 1, 2, 1, 1, 0, 3, 4, 1, 0, 2},
       {2, 1, 1, 2, 3, 1, 1, 3, 1, 2, 0, 2, 2, 4, 0, 3},
       {3, 1, 1, 1, 3, 1, 2, 2, 1, 2, 1, 1, 3, 2, 1, 3}},
      {"ex5_9", 4, 4, 4,
       {1, 3, 1, 3, 1, 1, 2, 2, 2, 3, 1, 0, 3, 2, 2, 3},
       {2, 2, 2, 2, 2, 1, 2, 1, 1, 3, 1, 2, 2, 3, 1, 3},
       {3, 1, 1, 3, 1, 2, 1, 2, 2, 0, 3, 2, 2, 3, 1, 3}},
      {"ex5_10", 4, 4, 4,
       {2, 1, 0, 1, 2, 3, 1, 2, 3, 1, 2, 1, 1, 3, 2, 2},
       {2, 3, 2, 1, 2, 1, 2, 3, 2, 1, 0, 1, 2, 3, 1, 1},
       {1, 2, 2, 3, 1, 1, 3, 3, 1, 3, 0, 0, 1, 2, 2, 2}},
      {"ex5_11", 4, 4, 5,
       {2, 0, 3, 3, 2, 0, 0, 1, 0, 0, 1, 0, 1, 1, 1, 0, 1, 0, 1, 0},
       {1, 0, 0, 2, 1, 1, 0, 2, 1, 1, 1, 1, 1, 1, 1, 0, 0, 2, 1, 0},
       {3, 0, 0, 1, 4, 1, 0, 0, 1, 0, 3, 1, 2, 0, 1, 0}},
      {"ex5_12", 4, 4, 5,
       {1, 0, 1, 1, 1, 2, 1, 0, 1, 2, 0, 1, 1, 1, 0, 1, 1, 1, 1, 1},
       {2, 1, 0, 0, 2, 1, 2, 1, 2, 1, 1, 0, 1, 1, 1, 0, 0, 1, 1, 0},
       {2, 3, 0, 0, 1, 3, 2, 1, 0, 0, 1, 3, 1, 0, 0, 1}},
      {"ex5_13", 4, 4, 5,
       {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 0, 0, 1, 2, 0, 1, 1, 2},
       {0, 0, 1, 1, 0, 1, 0, 1, 0, 1, 2, 2, 0, 1, 2, 2, 2, 1, 1, 2},
       {0, 2, 0, 0, 1, 0, 0, 2, 1, 3, 1, 2, 3, 0, 3, 2}},
  };
  return all;
}

inline MarginalSet semimagic_cube(int m, int s) {
  if (m < 1 || s < 0 || s > m) throw std::invalid_argument("semimagic cube needs m >= 1 and 0 <= s <= m");
  const std::vector<int> face(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), s);
  return three_way(m, m, m, face, face, face);
}

inline std::string semimagic_name(int m, int s) { return "cube_m" + std::to_string(m) + "_s" + std::to_string(s); }

namespace detail {

inline std::optional<int> take_int(std::string_view& sv) {
  int v = 0;
  const auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (ec != std::errc() || p == sv.data()) return std::nullopt;
  sv.remove_prefix(static_cast<std::size_t>(p - sv.data()));
  return v;
}

inline bool take_prefix(std::string_view& sv, std::string_view pre) {
  if (!sv.starts_with(pre)) return false;
  sv.remove_prefix(pre.size());
  return true;
}

}  // namespace detail

// Looks up a built-in fixture by name; nullopt for unknown names.
inline std::optional<MarginalSet> find_fixture(std::string_view name) {
  for (const auto& f : example_fixtures())
    if (name == f.name) return three_way(f.m, f.n, f.l, f.si, f.sj, f.sk);
  std::string_view sv = name;
  if (!detail::take_prefix(sv, "cube_m")) return std::nullopt;
  const auto m = detail::take_int(sv);
  if (!m || !detail::take_prefix(sv, "_s")) return std::nullopt;
  const auto s = detail::take_int(sv);
  if (!s || !sv.empty() || *m < 1 || *m > 64 || *s < 0 || *s > *m) return std::nullopt;
  return semimagic_cube(*m, *s);
}

// Names shown by `fixtures list`: the examples plus cubes for m in 4..10.
inline std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& f : example_fixtures()) out.emplace_back(f.name);
  for (int m = 4; m <= 10; ++m)
    for (int s = 1; s <= m / 2; ++s) out.push_back(semimagic_name(m, s));
  return out;
}

}  // namespace zotab
