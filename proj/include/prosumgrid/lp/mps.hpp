#pragma once

// Free-format MPS writer. Ranged rows go to RANGES, bounds to BOUNDS, and a
// nonzero objective offset is written as the negated RHS of the objective
// row (the convention HiGHS, CPLEX and Gurobi read).

#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "prosumgrid/lp/problem.hpp"

namespace prosumgrid::lp {

namespace detail {

inline bool mps_char_ok(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '.' ||
         c == '-' || c == '[' || c == ']' || c == '(' || c == ')' || c == ',' || c == ':' || c == '#' || c == '@';
}

// Replaces every character MPS cannot carry with '_' and de-duplicates.
class NameTable {
 public:
  std::string add(const std::string& raw, const std::string& fallback) {
    std::string name = raw.empty() ? fallback : raw;
    for (char& c : name)
      if (!mps_char_ok(c)) c = '_';
    if (name.front() == '$' || name.front() == '*') name.insert(name.begin(), '_');
    std::string unique = name;
    for (int k = 1; used_.count(unique); ++k) unique = name + "#" + std::to_string(k);
    used_.insert(unique);
    return unique;
  }

 private:
  std::set<std::string> used_;
};

inline std::string mps_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Writes `p` as free MPS. Output is byte-identical for identical problems.
inline void write_mps(const LpProblem& p, std::ostream& out) {
  detail::NameTable names;
  const std::string obj = names.add("OBJ", "OBJ");
  std::vector<std::string> rname(p.num_rows()), cname(p.num_variables());
  for (std::size_t i = 0; i < p.num_rows(); ++i) rname[i] = names.add(p.row(i).name, "R" + std::to_string(i));
  for (std::size_t j = 0; j < p.num_variables(); ++j)
    cname[j] = names.add(p.variable(j).name, "C" + std::to_string(j));

  std::string model = p.name();
  for (char& c : model)
    if (!detail::mps_char_ok(c)) c = '_';
  out << "NAME " << (model.empty() ? "LP" : model) << "\n";
  out << "ROWS\n N  " << obj << "\n";
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    const char* type = "N";
    switch (p.sense(i)) {
      case Sense::less_equal: type = "L"; break;
      case Sense::greater_equal:
      case Sense::range: type = "G"; break;
      case Sense::equal: type = "E"; break;
      case Sense::free: type = "N"; break;
    }
    out << " " << type << "  " << rname[i] << "\n";
  }

  // column-major traversal of the row-stored matrix
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(p.num_variables());
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    auto idx = p.row_indices(i);
    auto val = p.row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) cols[idx[k]].emplace_back(i, val[k]);
  }
  out << "COLUMNS\n";
  for (std::size_t j = 0; j < p.num_variables(); ++j) {
    double c = p.variable(j).cost;
    if (c != 0.0 || cols[j].empty()) out << "    " << cname[j] << "  " << obj << "  " << detail::mps_num(c) << "\n";
    for (auto [i, a] : cols[j]) out << "    " << cname[j] << "  " << rname[i] << "  " << detail::mps_num(a) << "\n";
  }

  out << "RHS\n";
  if (p.objective_offset() != 0.0) out << "    RHS  " << obj << "  " << detail::mps_num(-p.objective_offset()) << "\n";
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    double rhs = 0.0;
    switch (p.sense(i)) {
      case Sense::less_equal: rhs = p.row(i).upper; break;
      case Sense::greater_equal:
      case Sense::range:
      case Sense::equal: rhs = p.row(i).lower; break;
      case Sense::free: continue;
    }
    if (rhs != 0.0) out << "    RHS  " << rname[i] << "  " << detail::mps_num(rhs) << "\n";
  }

  bool any_range = false;
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    if (p.sense(i) != Sense::range) continue;
    if (!any_range) out << "RANGES\n";
    any_range = true;
    out << "    RNG  " << rname[i] << "  " << detail::mps_num(p.row(i).upper - p.row(i).lower) << "\n";
  }

  out << "BOUNDS\n";
  for (std::size_t j = 0; j < p.num_variables(); ++j) {
    const auto& v = p.variable(j);
    const std::string& n = cname[j];
    bool lo = std::isfinite(v.lower), hi = std::isfinite(v.upper);
    if (lo && hi && v.lower == v.upper) {
      out << " FX BND  " << n << "  " << detail::mps_num(v.lower) << "\n";
      continue;
    }
    if (!lo && !hi) {
      out << " FR BND  " << n << "\n";
      continue;
    }
    if (!lo) out << " MI BND  " << n << "\n";
    else if (v.lower != 0.0 || (hi && v.upper < 0.0)) out << " LO BND  " << n << "  " << detail::mps_num(v.lower) << "\n";
    if (hi) out << " UP BND  " << n << "  " << detail::mps_num(v.upper) << "\n";
  }
  out << "ENDATA\n";
}

inline std::string to_mps(const LpProblem& p) {
  std::ostringstream os;
  write_mps(p, os);
  return os.str();
}

}  // namespace prosumgrid::lp
