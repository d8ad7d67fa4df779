#pragma once

// Plain-text input formats. Blank lines and '#' comments are skipped.
//
// Matrix:      "n", then n*n lines (row-major), each a comma-separated
//              integer coefficient list, constant term first.
// Sym. matrix: "n", then n lines of n comma-separated integers.
// Graph:       "n m", m lines "u v w", then optional
//              "marked_edges: i,j,..." and "marked_vertices: a,b,..." lines.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "permod/error.hpp"
#include "permod/graph.hpp"
#include "permod/hafnian.hpp"
#include "permod/zpoly.hpp"

namespace permod {

struct GraphFile {
  WeightedGraph graph;
  std::vector<std::size_t> marked_edges;
  std::vector<std::size_t> marked_vertices;
};

namespace detail {

struct Line {
  std::size_t number;
  std::string text;
};

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<Line> content_lines(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  std::size_t no = 0;
  while (std::getline(in, raw)) {
    ++no;
    std::string_view s = raw;
    if (auto h = s.find('#'); h != std::string_view::npos) s = s.substr(0, h);
    s = trim(s);
    if (!s.empty()) out.push_back({no, std::string(s)});
  }
  return out;
}

[[noreturn]] inline void fail_at(std::size_t line, const std::string& msg) {
  throw Error("line " + std::to_string(line) + ": " + msg);
}

template <class T>
T parse_int(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  T v{};
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || tok.empty()) {
    fail_at(line, "expected an integer, got '" + std::string(tok) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto p = s.find(sep);
    out.push_back(trim(s.substr(0, p)));
    if (p == std::string_view::npos) return out;
    s.remove_prefix(p + 1);
  }
}

inline std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::size_t parse_dimension(const std::vector<Line>& lines) {
  if (lines.empty()) throw Error("empty input");
  return parse_int<std::size_t>(lines[0].text, lines[0].number);
}

}  // namespace detail

inline ZxMatrix parse_matrix(std::istream& in) {
  const auto lines = detail::content_lines(in);
  const std::size_t n = detail::parse_dimension(lines);
  if (lines.size() != 1 + n * n) {
    const std::size_t at = lines.size() > 1 + n * n ? lines[1 + n * n].number : lines.back().number;
    detail::fail_at(at, "expected " + std::to_string(n * n) + " entry lines, found " +
                            std::to_string(lines.size() - 1));
  }
  ZxMatrix a(n, n, ZxPoly{});
  for (std::size_t idx = 0; idx < n * n; ++idx) {
    const auto& line = lines[1 + idx];
    std::vector<BigInt> coeffs;
    for (auto tok : detail::split(line.text, ',')) {
      coeffs.emplace_back(detail::parse_int<std::int64_t>(tok, line.number));
    }
    a(idx / n, idx % n) = ZxPoly(std::move(coeffs));
  }
  return a;
}

inline SymMatZ parse_sym_matrix(std::istream& in) {
  const auto lines = detail::content_lines(in);
  const std::size_t n = detail::parse_dimension(lines);
  if (lines.size() != 1 + n) {
    detail::fail_at(lines.back().number, "expected " + std::to_string(n) + " matrix rows, found " +
                                             std::to_string(lines.size() - 1));
  }
  SymMatZ a(n, n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto toks = detail::split(lines[1 + i].text, ',');
    if (toks.size() != n) detail::fail_at(lines[1 + i].number, "expected " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) a(i, j) = detail::parse_int<std::int64_t>(toks[j], lines[1 + i].number);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (a(i, j) != a(j, i)) detail::fail_at(lines[1 + i].number, "matrix not symmetric");
    }
  }
  return a;
}

inline GraphFile parse_graph(std::istream& in) {
  const auto lines = detail::content_lines(in);
  if (lines.empty()) throw Error("empty input");
  const auto head = detail::words(lines[0].text);
  if (head.size() != 2) detail::fail_at(lines[0].number, "expected 'n m'");
  const auto n = detail::parse_int<std::size_t>(head[0], lines[0].number);
  const auto m = detail::parse_int<std::size_t>(head[1], lines[0].number);
  if (lines.size() < 1 + m) detail::fail_at(lines.back().number, "expected " + std::to_string(m) + " edge lines");
  GraphFile out{WeightedGraph(n), {}, {}};
  for (std::size_t i = 0; i < m; ++i) {
    const auto& line = lines[1 + i];
    const auto f = detail::words(line.text);
    if (f.size() != 3) detail::fail_at(line.number, "expected 'u v w'");
    try {
      out.graph.add_edge(detail::parse_int<std::size_t>(f[0], line.number),
                         detail::parse_int<std::size_t>(f[1], line.number),
                         detail::parse_int<std::uint64_t>(f[2], line.number));
    } catch (const Error& e) {
      const std::string what = e.what();
      if (what.rfind("line ", 0) == 0) throw;
      detail::fail_at(line.number, what);
    }
  }
  for (std::size_t i = 1 + m; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const std::string_view s = line.text;
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) detail::fail_at(line.number, "unexpected line '" + line.text + "'");
    const auto key = detail::trim(s.substr(0, colon));
    std::vector<std::size_t>* dst = nullptr;
    if (key == "marked_edges") {
      dst = &out.marked_edges;
    } else if (key == "marked_vertices") {
      dst = &out.marked_vertices;
    } else {
      detail::fail_at(line.number, "unknown key '" + std::string(key) + "'");
    }
    const auto rest = detail::trim(s.substr(colon + 1));
    if (rest.empty()) continue;
    for (auto tok : detail::split(rest, ',')) {
      const auto v = detail::parse_int<std::size_t>(tok, line.number);
      if (dst == &out.marked_edges ? v >= m : v >= n) detail::fail_at(line.number, "index out of range");
      dst->push_back(v);
    }
  }
  return out;
}

template <class F>
auto parse_file(const std::string& path, F parse) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return parse(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

inline ZxMatrix read_matrix_file(const std::string& path) {
  return parse_file(path, [](std::istream& in) { return parse_matrix(in); });
}

inline SymMatZ read_sym_matrix_file(const std::string& path) {
  return parse_file(path, [](std::istream& in) { return parse_sym_matrix(in); });
}

inline GraphFile read_graph_file(const std::string& path) {
  return parse_file(path, [](std::istream& in) { return parse_graph(in); });
}

}  // namespace permod
