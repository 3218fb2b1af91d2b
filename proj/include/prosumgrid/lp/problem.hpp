#pragma once

// Linear program container: named bounded variables, a minimization
// objective with constant offset, and ranged linear rows lo <= a.x <= hi.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace prosumgrid::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct VarId {
  int index = -1;
  friend bool operator==(VarId, VarId) = default;
};

struct RowId {
  int index = -1;
  friend bool operator==(RowId, RowId) = default;
};

struct Term {
  VarId var;
  double coef = 0.0;
};

enum class Sense { less_equal, equal, greater_equal, range, free };

inline const char* to_string(Sense s) {
  switch (s) {
    case Sense::less_equal: return "<=";
    case Sense::equal: return "=";
    case Sense::greater_equal: return ">=";
    case Sense::range: return "range";
    case Sense::free: return "free";
  }
  return "?";
}

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
};

struct RowInfo {
  std::string name;
  double lower = -kInf;
  double upper = kInf;
};

class LpProblem {
 public:
  explicit LpProblem(std::string name = "lp") : name_(std::move(name)) { row_start_.push_back(0); }

  const std::string& name() const { return name_; }

  VarId add_variable(std::string name, double lower, double upper, double cost = 0.0) {
    vars_.push_back({std::move(name), lower, upper, cost});
    return VarId{static_cast<int>(vars_.size()) - 1};
  }

  /// Adds lower <= sum(terms) <= upper. Repeated variables are merged and
  /// exact zeros dropped.
  RowId add_row(std::string name, std::span<const Term> terms, double lower, double upper) {
    std::size_t first = cols_.size();
    for (const Term& t : terms) {
      if (t.var.index < 0 || t.var.index >= static_cast<int>(vars_.size()))
        throw std::invalid_argument("row '" + name + "' references unknown variable index " +
                                    std::to_string(t.var.index));
      cols_.push_back(t.var.index);
      vals_.push_back(t.coef);
    }
    merge_tail(first);
    rows_.push_back({std::move(name), lower, upper});
    row_start_.push_back(cols_.size());
    return RowId{static_cast<int>(rows_.size()) - 1};
  }

  RowId add_row(std::string name, std::initializer_list<Term> terms, double lower, double upper) {
    return add_row(std::move(name), std::span<const Term>(terms.begin(), terms.size()), lower, upper);
  }

  RowId add_constraint(std::string name, std::span<const Term> terms, Sense sense, double rhs) {
    switch (sense) {
      case Sense::less_equal: return add_row(std::move(name), terms, -kInf, rhs);
      case Sense::greater_equal: return add_row(std::move(name), terms, rhs, kInf);
      case Sense::equal: return add_row(std::move(name), terms, rhs, rhs);
      default: throw std::invalid_argument("add_constraint: sense must be <=, = or >=");
    }
  }

  RowId add_constraint(std::string name, std::initializer_list<Term> terms, Sense sense, double rhs) {
    return add_constraint(std::move(name), std::span<const Term>(terms.begin(), terms.size()), sense, rhs);
  }

  void set_cost(VarId v, double cost) { vars_.at(v.index).cost = cost; }
  void set_bounds(VarId v, double lower, double upper) {
    auto& var = vars_.at(v.index);
    var.lower = lower;
    var.upper = upper;
  }
  void set_row_bounds(RowId r, double lower, double upper) {
    auto& row = rows_.at(r.index);
    row.lower = lower;
    row.upper = upper;
  }
  void set_objective_offset(double offset) { offset_ = offset; }
  double objective_offset() const { return offset_; }

  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_nonzeros() const { return cols_.size(); }

  const Variable& variable(VarId v) const { return vars_.at(v.index); }
  const Variable& variable(std::size_t j) const { return vars_[j]; }
  const std::vector<Variable>& variables() const { return vars_; }
  const RowInfo& row(RowId r) const { return rows_.at(r.index); }
  const RowInfo& row(std::size_t i) const { return rows_[i]; }

  Sense sense(std::size_t i) const {
    const RowInfo& r = rows_[i];
    bool lo = std::isfinite(r.lower), hi = std::isfinite(r.upper);
    if (lo && hi) return r.lower == r.upper ? Sense::equal : Sense::range;
    if (lo) return Sense::greater_equal;
    if (hi) return Sense::less_equal;
    return Sense::free;
  }

  /// Column indices and coefficients of row i.
  std::span<const int> row_indices(std::size_t i) const {
    return {cols_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {vals_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
  }

  double row_activity(std::size_t i, std::span<const double> x) const {
    double s = 0.0;
    auto idx = row_indices(i);
    auto val = row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) s += val[k] * x[idx[k]];
    return s;
  }

  double objective_value(std::span<const double> x) const {
    double obj = offset_;
    for (std::size_t j = 0; j < vars_.size(); ++j) obj += vars_[j].cost * x[j];
    return obj;
  }

  /// Throws std::invalid_argument on NaN data or crossed bounds.
  void validate() const {
    for (const auto& v : vars_) {
      if (std::isnan(v.lower) || std::isnan(v.upper) || std::isnan(v.cost) || !std::isfinite(v.cost))
        throw std::invalid_argument("variable '" + v.name + "' has NaN/infinite data");
      if (v.lower > v.upper)
        throw std::invalid_argument("variable '" + v.name + "' has lower bound above upper bound");
      if (v.lower == kInf || v.upper == -kInf)
        throw std::invalid_argument("variable '" + v.name + "' has an infinite bound on the wrong side");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto& r = rows_[i];
      if (std::isnan(r.lower) || std::isnan(r.upper))
        throw std::invalid_argument("row '" + r.name + "' has NaN bounds");
      if (r.lower > r.upper) throw std::invalid_argument("row '" + r.name + "' has lower bound above upper bound");
      for (double a : row_values(i))
        if (!std::isfinite(a)) throw std::invalid_argument("row '" + r.name + "' has a non-finite coefficient");
    }
  }

 private:
  void merge_tail(std::size_t first) {
    // small rows: insertion-style merge keeps first-occurrence order
    std::size_t out = first;
    for (std::size_t k = first; k < cols_.size(); ++k) {
      bool merged = false;
      for (std::size_t q = first; q < out; ++q) {
        if (cols_[q] == cols_[k]) {
          vals_[q] += vals_[k];
          merged = true;
          break;
        }
      }
      if (!merged) {
        cols_[out] = cols_[k];
        vals_[out] = vals_[k];
        ++out;
      }
    }
    std::size_t keep = first;
    for (std::size_t k = first; k < out; ++k) {
      if (vals_[k] != 0.0) {
        cols_[keep] = cols_[k];
        vals_[keep] = vals_[k];
        ++keep;
      }
    }
    cols_.resize(keep);
    vals_.resize(keep);
  }

  std::string name_;
  std::vector<Variable> vars_;
  std::vector<RowInfo> rows_;
  std::vector<std::size_t> row_start_;
  std::vector<int> cols_;
  std::vector<double> vals_;
  double offset_ = 0.0;
};

enum class Status { optimal, infeasible, unbounded, numerical_failure, iteration_limit };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::numerical_failure: return "numerical_failure";
    case Status::iteration_limit: return "iteration_limit";
  }
  return "?";
}

struct LpSolution {
  Status status = Status::numerical_failure;
  double objective = 0.0;
  std::vector<double> primal;         // per variable
  std::vector<double> duals;          // per row: d(objective)/d(row bound)
  std::vector<double> reduced_costs;  // per variable
  std::size_t iterations = 0;

  bool optimal() const { return status == Status::optimal; }
  double value(VarId v) const { return primal.at(v.index); }
  double dual(RowId r) const { return duals.at(r.index); }
};

/// Largest violation of a row or variable bound by `x`.
inline double max_primal_violation(const LpProblem& p, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < p.num_variables(); ++j) {
    const auto& v = p.variable(j);
    worst = std::max({worst, v.lower - x[j], x[j] - v.upper});
  }
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    double a = p.row_activity(i, x);
    worst = std::max({worst, p.row(i).lower - a, a - p.row(i).upper});
  }
  return worst;
}

/// Lagrangian dual bound given row duals y and reduced costs d. Multipliers
/// paired with an infinite bound are treated as zero when |value| <= tol and
/// make the bound -inf otherwise.
inline double dual_objective(const LpProblem& p, std::span<const double> y, std::span<const double> d,
                             double tol = 1e-7) {
  double obj = p.objective_offset();
  auto term = [&](double mult, double lo, double hi) {
    double bound = mult >= 0.0 ? lo : hi;
    if (std::isinf(bound)) return std::abs(mult) <= tol ? 0.0 : -kInf;
    return mult * bound;
  };
  for (std::size_t i = 0; i < p.num_rows(); ++i) obj += term(y[i], p.row(i).lower, p.row(i).upper);
  for (std::size_t j = 0; j < p.num_variables(); ++j)
    obj += term(d[j], p.variable(j).lower, p.variable(j).upper);
  return obj;
}

}  // namespace prosumgrid::lp
