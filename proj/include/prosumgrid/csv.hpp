#pragma once

// Minimal CSV reading and writing: comma separated, no quoting, header row.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace prosumgrid::csv {

struct Table {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row

  long column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<long>(i);
    return -1;
  }
};

inline std::string trim(std::string s) {
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(s[i])) ++i;
  return s.substr(i);
}

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

/// Reads a CSV file. Blank lines and lines starting with '#' are skipped.
inline Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open file");
  Table t;
  t.file = path.filename().string();
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (!have_header) {
      t.header = split(s);
      have_header = true;
    } else {
      t.rows.push_back(split(s));
      t.lines.push_back(lineno);
    }
  }
  if (!have_header) throw std::runtime_error(path.string() + ": empty file");
  return t;
}

/// Parses a number; accepts "inf"/"-inf". Returns false on garbage.
inline bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end && *end == '\0' && !std::isnan(out);
}

/// Shortest text that round-trips the double exactly.
inline std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw std::runtime_error(path.string() + ": cannot write");
  }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((put(cells, first)), ...);
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed");
  }

 private:
  void put(const std::string& s, bool& first) { sep(first), out_ << s; }
  void put(const char* s, bool& first) { sep(first), out_ << s; }
  void put(double v, bool& first) { sep(first), out_ << num(v); }
  void put(int v, bool& first) { sep(first), out_ << v; }
  void put(std::size_t v, bool& first) { sep(first), out_ << v; }
  void sep(bool& first) {
    if (!first) out_ << ',';
    first = false;
  }

  std::ofstream out_;
};

}  // namespace prosumgrid::csv
