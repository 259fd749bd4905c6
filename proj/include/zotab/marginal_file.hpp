#pragma once

// Plain-text margin files.
//
//   # comment to end of line
//   dims 4 4 5
//   margin si        # or: margin 0
//   2 0 3 3 2
//   ...
//   margin sj
//   ...
//
// `dims` comes first and lists the axis sizes. Each `margin <a>` block then
// holds the entries of the sums over axis a, row-major over the remaining
// axes; line breaks inside a block carry no meaning. For 3-way tables si, sj
// and sk name margins 0, 1 and 2. Every margin must appear exactly once.

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zotab/tables.hpp"

namespace zotab {

struct ParseError : std::runtime_error {
  std::string source;
  int line = 0;
  int column = 0;
  ParseError(std::string src, int ln, int col, const std::string& msg)
      : std::runtime_error(src + ":" + std::to_string(ln) + ":" + std::to_string(col) + ": " + msg),
        source(std::move(src)),
        line(ln),
        column(col) {}
};

namespace detail {

struct Token {
  std::string text;
  int line = 0;
  int column = 0;
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
    } else {
      Token t{{}, line, col};
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#') {
        t.text += text[i++];
        ++col;
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

inline std::optional<int> to_int(const std::string& s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

inline MarginalSet parse_marginal_text(std::string_view text, const std::string& source = "<input>") {
  const auto tokens = detail::tokenize(text);
  std::size_t pos = 0;
  auto fail = [&](const detail::Token& t, const std::string& msg) { return ParseError(source, t.line, t.column, msg); };
  auto end_error = [&](const std::string& msg) {
    const int ln = tokens.empty() ? 1 : tokens.back().line;
    return ParseError(source, ln, tokens.empty() ? 1 : tokens.back().column, msg);
  };

  if (tokens.empty()) throw ParseError(source, 1, 1, "empty margin file: expected 'dims'");
  if (tokens[pos].text != "dims") throw fail(tokens[pos], "expected 'dims', found '" + tokens[pos].text + "'");
  ++pos;
  std::vector<int> sizes;
  while (pos < tokens.size() && tokens[pos].text != "margin") {
    const auto v = detail::to_int(tokens[pos].text);
    if (!v || *v < 1) throw fail(tokens[pos], "axis size must be a positive integer, got '" + tokens[pos].text + "'");
    sizes.push_back(*v);
    ++pos;
  }
  if (sizes.size() < 2) {
    if (pos < tokens.size()) throw fail(tokens[pos], "'dims' needs at least two axis sizes");
    throw end_error("'dims' needs at least two axis sizes");
  }
  MarginalSet m{Dims(sizes), std::vector<std::vector<int>>(sizes.size())};
  const int d = m.dims.d();
  std::vector<bool> seen(sizes.size(), false);

  while (pos < tokens.size()) {
    const auto& kw = tokens[pos];
    if (kw.text != "margin") throw fail(kw, "expected 'margin', found '" + kw.text + "'");
    if (++pos >= tokens.size()) throw end_error("'margin' needs an axis");
    const auto& name = tokens[pos++];
    std::optional<int> axis = detail::to_int(name.text);
    if (d == 3 && !axis) {
      if (name.text == "si") axis = 0;
      if (name.text == "sj") axis = 1;
      if (name.text == "sk") axis = 2;
    }
    if (!axis || *axis < 0 || *axis >= d) throw fail(name, "unknown margin '" + name.text + "'");
    if (seen[*axis]) throw fail(name, "margin '" + name.text + "' given twice");
    seen[*axis] = true;
    const std::size_t want = m.dims.lines(*axis);
    auto& dst = m.margins[*axis];
    while (pos < tokens.size() && tokens[pos].text != "margin") {
      const auto v = detail::to_int(tokens[pos].text);
      if (!v) throw fail(tokens[pos], "expected an integer, found '" + tokens[pos].text + "'");
      if (dst.size() == want)
        throw fail(tokens[pos], "too many entries for margin '" + name.text + "' (expected " + std::to_string(want) + ")");
      dst.push_back(*v);
      ++pos;
    }
    if (dst.size() != want)
      throw fail(name, "margin '" + name.text + "' has " + std::to_string(dst.size()) + " entries, expected " +
                           std::to_string(want));
  }
  for (int a = 0; a < d; ++a)
    if (!seen[a]) throw end_error("missing margin " + std::to_string(a));
  if (auto v = validate_marginals(m))
    throw ParseError(source, 1, 1, std::string(to_string(v->kind)) + ": " + v->detail);
  return m;
}

inline MarginalSet parse_marginal_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_marginal_text(ss.str(), path);
}

// Inverse of parse_marginal_text; one output row per run of the last
// remaining axis. `comment` lines are written as '#' comments at the top.
inline std::string emit_marginal_text(const MarginalSet& m, const std::vector<std::string>& comment = {}) {
  std::ostringstream out;
  for (const auto& c : comment) out << "# " << c << '\n';
  out << "dims";
  for (int s : m.dims.sizes) out << ' ' << s;
  out << '\n';
  const int d = m.dims.d();
  static const char* names3[] = {"si", "sj", "sk"};
  for (int a = 0; a < d; ++a) {
    out << "margin " << (d == 3 ? std::string(names3[a]) : std::to_string(a)) << '\n';
    const int row = m.dims[a == d - 1 ? d - 2 : d - 1];
    const auto& v = m.margin(a);
    for (std::size_t i = 0; i < v.size(); ++i) out << v[i] << ((i + 1) % static_cast<std::size_t>(row) ? ' ' : '\n');
  }
  return out.str();
}

}  // namespace zotab
