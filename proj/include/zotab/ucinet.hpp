#pragma once

// Reader for UCINET DL files holding a stack of square relation matrices in
// full-matrix layout, e.g.
//
//   dl n=18 nm=10 format=fullmatrix
//   labels:
//   ROMUL,BONAVEN,...
//   level labels:
//   SAMPLK1 SAMPLK2 ...
//   data:
//   0 0 1 ...
//
// Every nonzero entry (a rank or a weight) becomes a 1, so the result is an
// n x n x nm zero-one table with axes (actor, actor, relation), relations in
// file order.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zotab/marginal_file.hpp"
#include "zotab/tables.hpp"

namespace zotab {

struct RelationStack {
  int nodes = 0;
  std::vector<std::string> labels;     // actor labels, possibly empty
  std::vector<std::string> relations;  // relation (level) names, possibly empty
  BinaryTable table;                   // nodes x nodes x relations
};

struct UcinetOptions {
  std::optional<int> expect_nodes;
  std::optional<int> expect_relations;
};

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct DlReader {
  std::string text;
  std::string source;
  std::size_t i = 0;
  int line = 1, col = 1;

  ParseError error(const std::string& msg) const { return ParseError(source, line, col, msg); }

  void advance() {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  }
  // Whitespace and commas both separate items in DL files.
  void skip_separators() {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) advance();
  }
  bool done() {
    skip_separators();
    return i >= text.size();
  }
  // Next item: a quoted string, or a run up to a separator, '=' or ':'.
  std::string item() {
    skip_separators();
    std::string out;
    if (i < text.size() && text[i] == '"') {
      advance();
      while (i < text.size() && text[i] != '"') {
        out += text[i];
        advance();
      }
      if (i >= text.size()) throw error("unterminated quoted label");
      advance();
      return out;
    }
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != ',' && text[i] != '=' &&
           text[i] != ':') {
      out += text[i];
      advance();
    }
    return out;
  }
  bool take(char c) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) advance();
    if (i < text.size() && text[i] == c) {
      advance();
      return true;
    }
    return false;
  }
  // Looks ahead for a section keyword ("labels:", "level labels:", "data:" ...)
  // without consuming anything; returns its lower-case name.
  std::optional<std::string> peek_section() {
    skip_separators();
    const std::size_t save_i = i;
    const int save_line = line, save_col = col;
    std::string words;
    for (int k = 0; k < 3; ++k) {
      std::string w = lower(item());
      if (w.empty()) break;
      words += (words.empty() ? "" : " ") + w;
      if (take(':')) {
        i = save_i;
        line = save_line;
        col = save_col;
        return words;
      }
      // a multi-word keyword stays on one line
      while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) advance();
      if (i >= text.size() || text[i] == '\n' || text[i] == '\r' || text[i] == ',') break;
    }
    i = save_i;
    line = save_line;
    col = save_col;
    return std::nullopt;
  }
  void consume_section() {
    while (!take(':')) {
      if (item().empty()) throw error("malformed section header");
    }
  }
};

}  // namespace detail

inline RelationStack parse_ucinet_dl_text(const std::string& text, const std::string& source = "<input>",
                                          const UcinetOptions& opt = {}) {
  detail::DlReader r{text, source};
  if (detail::lower(r.item()) != "dl") throw r.error("malformed header: file must start with 'DL'");

  std::optional<int> n, nr, nc;
  int nm = 1;
  std::string format = "fullmatrix";
  while (!r.peek_section()) {
    if (r.done()) throw r.error("missing DATA: section");
    const int key_line = r.line, key_col = r.col;
    const std::string key = detail::lower(r.item());
    if (key.empty() || !r.take('='))
      throw ParseError(source, key_line, key_col, "malformed header: expected key=value, got '" + key + "'");
    const std::string value = r.item();
    auto number = [&]() {
      char* end = nullptr;
      const long v = std::strtol(value.c_str(), &end, 10);
      if (value.empty() || *end != '\0' || v < 1) throw r.error("malformed header: bad value for " + key);
      return static_cast<int>(v);
    };
    if (key == "n") n = number();
    else if (key == "nr") nr = number();
    else if (key == "nc") nc = number();
    else if (key == "nm") nm = number();
    else if (key == "format") format = detail::lower(value);
    else throw r.error("malformed header: unknown key '" + key + "'");
  }
  if (nr || nc) {
    if (!nr || !nc || *nr != *nc) throw r.error("non-square matrix: nr and nc differ");
    if (n && *n != *nr) throw r.error("non-square matrix: n disagrees with nr/nc");
    n = nr;
  }
  if (!n) throw r.error("malformed header: missing n=");
  if (format != "fullmatrix" && format != "full") throw r.error("unsupported format '" + format + "'");
  if (opt.expect_nodes && *n != *opt.expect_nodes)
    throw r.error("expected " + std::to_string(*opt.expect_nodes) + " nodes, header declares " + std::to_string(*n));
  if (opt.expect_relations && nm != *opt.expect_relations)
    throw r.error("wrong relation count: expected " + std::to_string(*opt.expect_relations) + ", header declares " +
                  std::to_string(nm));

  RelationStack out;
  out.nodes = *n;
  bool have_data = false;
  while (auto section = r.peek_section()) {
    r.consume_section();
    std::vector<std::string>* dst = nullptr;
    std::size_t count = 0;
    if (*section == "labels" || *section == "row labels" || *section == "column labels" || *section == "col labels") {
      dst = &out.labels;
      count = static_cast<std::size_t>(*n);
      if (!out.labels.empty()) dst = nullptr;  // row and column labels repeat the same actors
    } else if (*section == "level labels" || *section == "matrix labels") {
      dst = &out.relations;
      count = static_cast<std::size_t>(nm);
    } else if (*section == "data") {
      have_data = true;
      break;
    } else {
      throw r.error("unknown section '" + *section + ":'");
    }
    std::vector<std::string> items;
    for (std::size_t k = 0; k < count; ++k) {
      if (r.done() || r.peek_section()) throw r.error("expected " + std::to_string(count) + " labels");
      items.push_back(r.item());
    }
    if (dst) *dst = std::move(items);
  }
  if (!have_data) throw r.error("missing DATA: section");

  const std::size_t per = static_cast<std::size_t>(*n) * static_cast<std::size_t>(*n);
  const std::size_t total = per * static_cast<std::size_t>(nm);
  std::vector<double> values;
  values.reserve(total);
  while (!r.done()) {
    const int ln = r.line, cl = r.col;
    const std::string tok = r.item();
    if (tok.empty()) throw r.error("unexpected character in DATA:");
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (*end != '\0') throw ParseError(source, ln, cl, "non-numeric entry '" + tok + "'");
    if (values.size() == total)
      throw ParseError(source, ln, cl, "wrong entry count: more than " + std::to_string(total) + " values");
    values.push_back(v);
  }
  if (values.size() != total)
    throw r.error("wrong entry count: expected " + std::to_string(total) + " values (" + std::to_string(nm) +
                  " matrices of " + std::to_string(*n) + "x" + std::to_string(*n) + "), got " +
                  std::to_string(values.size()));

  out.table = BinaryTable{Dims{*n, *n, nm}};
  for (int rel = 0; rel < nm; ++rel)
    for (int a = 0; a < *n; ++a)
      for (int b = 0; b < *n; ++b) {
        const double v = values[static_cast<std::size_t>(rel) * per + static_cast<std::size_t>(a) * *n + b];
        if (a == b && v != 0.0)
          throw r.error("self-nomination: nonzero diagonal in relation " + std::to_string(rel + 1) + " at actor " +
                        std::to_string(a + 1));
        const int c[] = {a, b, rel};
        out.table.set(c, v != 0.0 ? 1 : 0);
      }
  return out;
}

inline RelationStack parse_ucinet_dl(const std::string& path, const UcinetOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ucinet_dl_text(ss.str(), path, opt);
}

}  // namespace zotab
