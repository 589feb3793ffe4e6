// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

// Minimal header-keyed CSV reader used by the network loaders.

#pragma once

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "gridshift/error.hpp"

namespace gridshift::csv {

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

class Table {
 public:
  Table(std::string source, std::vector<std::string> header) : source_(std::move(source)), header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells, std::size_t line) {
    if (cells.size() != header_.size()) {
      throw InputError(fmt::format("{}:{}: expected {} fields, found {}", source_, line, header_.size(), cells.size()));
    }
    rows_.push_back(std::move(cells));
    lines_.push_back(line);
  }

  std::size_t rows() const { return rows_.size(); }
  bool has_column(const std::string& name) const {
    return std::find(header_.begin(), header_.end(), name) != header_.end();
  }
  std::string where(std::size_t r) const { return fmt::format("{}:{}", source_, lines_[r]); }

  const std::string& get(std::size_t r, const std::string& col) const { return rows_[r][column(col)]; }

  double get_double(std::size_t r, const std::string& col) const {
    const auto& s = get(r, col);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw InputError(fmt::format("{}: column '{}' is not a number: '{}'", where(r), col, s));
    }
    return v;
  }

  int get_int(std::size_t r, const std::string& col) const {
    const auto& s = get(r, col);
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw InputError(fmt::format("{}: column '{}' is not an integer: '{}'", where(r), col, s));
    }
    return v;
  }

  bool get_bool(std::size_t r, const std::string& col) const {
    std::string s = get(r, col);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no" || s.empty()) return false;
    throw InputError(fmt::format("{}: column '{}' is not a boolean: '{}'", where(r), col, s));
  }

 private:
  std::size_t column(const std::string& name) const {
    auto it = std::find(header_.begin(), header_.end(), name);
    if (it == header_.end()) throw InputError(fmt::format("{}: missing column '{}'", source_, name));
    return static_cast<std::size_t>(it - header_.begin());
  }

  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

/// Reads a CSV with a header row. Blank lines and lines starting with '#'
/// are skipped. Throws InputError if a required column is absent.
inline Table read(const std::filesystem::path& path, std::initializer_list<const char*> required) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    header = split_line(t);
    break;
  }
  if (header.empty()) throw InputError(fmt::format("{}: empty file", path.string()));
  Table table(path.string(), header);
  for (const char* col : required) {
    if (!table.has_column(col)) throw InputError(fmt::format("{}: missing column '{}'", path.string(), col));
  }
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    table.add_row(split_line(t), lineno);
  }
  return table;
}

}  // namespace gridshift::csv
