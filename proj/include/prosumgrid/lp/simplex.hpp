#pragma once

// Bounded-variable primal revised simplex.
//
// The problem  min c'x  s.t.  lo_r <= A x <= hi_r,  lo_x <= x <= hi_x  is solved
// in the homogeneous form  A x - s = 0  with one logical s_i per row carrying
// the row bounds, so every right-hand side lives in the bounds and the slack
// basis B = -I is always a valid start. Phase 1 minimizes the sum of bound
// infeasibilities of basic variables; phase 2 the true objective.
//
// The basis is factorized with KLU and updated in product form (eta file)
// between refactorizations. Phase 2 prices with Devex reference weights and
// updates reduced costs from the pivot row. A run of degenerate pivots first
// widens all bounds by small deterministic amounts (removed again before
// optimality is declared); a longer run falls back to Bland's rule until the
// objective moves. The ratio test is Harris two-pass with bound flipping for
// boxed entering variables.

#include <klu.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "prosumgrid/lp/problem.hpp"

namespace prosumgrid::lp {

struct SimplexOptions {
  double primal_tolerance = 1e-7;
  double dual_tolerance = 1e-7;
  double pivot_tolerance = 1e-7;
  std::size_t refactor_interval = 80;
  std::size_t max_iterations = 0;   // 0: derived from problem size
  std::size_t perturb_trigger = 30;  // consecutive degenerate pivots before bounds are perturbed
  std::size_t bland_trigger = 200;   // consecutive degenerate pivots before Bland's rule
  bool scale = true;
  std::ostream* log = nullptr;
};

namespace detail {

// Owns a KLU factorization of a square CSC matrix.
class KluFactor {
 public:
  KluFactor() {
    klu_defaults(&common_);
    common_.tol = 0.01;
  }
  KluFactor(const KluFactor&) = delete;
  KluFactor& operator=(const KluFactor&) = delete;
  ~KluFactor() { release(); }

  bool factor(int n, std::vector<int>& ap, std::vector<int>& ai, std::vector<double>& ax) {
    release();
    n_ = n;
    if (n == 0) return true;
    symbolic_ = klu_analyze(n, ap.data(), ai.data(), &common_);
    if (!symbolic_) return false;
    numeric_ = klu_factor(ap.data(), ai.data(), ax.data(), symbolic_, &common_);
    return numeric_ != nullptr;
  }

  void solve(double* b) const {
    if (n_) klu_solve(symbolic_, numeric_, n_, 1, b, &common_);
  }
  void solve_transposed(double* b) const {
    if (n_) klu_tsolve(symbolic_, numeric_, n_, 1, b, &common_);
  }

 private:
  void release() {
    if (numeric_) klu_free_numeric(&numeric_, &common_);
    if (symbolic_) klu_free_symbolic(&symbolic_, &common_);
  }

  mutable klu_common common_{};
  klu_symbolic* symbolic_ = nullptr;
  klu_numeric* numeric_ = nullptr;
  int n_ = 0;
};

class BoundedSimplex {
 public:
  BoundedSimplex(const LpProblem& p, const SimplexOptions& opt) : p_(p), opt_(opt) {
    n_ = p.num_variables();
    m_ = p.num_rows();
    build_matrix();
    if (opt_.scale) compute_scaling();
    else {
      row_scale_.assign(m_, 1.0);
      col_scale_.assign(n_, 1.0);
    }
    apply_scaling();
  }

  LpSolution run() {
    LpSolution sol;
    max_iter_ = opt_.max_iterations ? opt_.max_iterations : 50 * (n_ + m_) + 20000;
    Status st = init_basis() ? iterate() : Status::numerical_failure;
    sol.status = st;
    sol.iterations = iterations_;
    extract(sol);
    if (opt_.log)
      *opt_.log << "simplex: " << to_string(st) << " after " << iterations_ << " iterations ("
                << phase1_iterations_ << " in phase 1), objective " << sol.objective << "\n";
    return sol;
  }

 private:
  enum class State : std::uint8_t { basic, at_lower, at_upper, at_zero };

  struct Eta {
    int row;
    double pivot;
    std::vector<int> idx;
    std::vector<double> val;
  };

  // --- setup -------------------------------------------------------------

  void build_matrix() {
    // row-wise copy for pivot rows, column-wise copy for FTRAN and pricing
    // explicit zeros are dropped
    row_start_.assign(m_ + 1, 0);
    std::vector<std::size_t> count(n_ + 1, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      auto idx = p_.row_indices(i);
      auto val = p_.row_values(i);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (val[k] == 0.0) continue;
        row_col_.push_back(static_cast<int>(idx[k]));
        row_val_.push_back(val[k]);
        ++count[idx[k] + 1];
      }
      row_start_[i + 1] = row_col_.size();
    }
    col_start_.assign(n_ + 1, 0);
    for (std::size_t j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j + 1];
    col_row_.resize(col_start_[n_]);
    col_val_.resize(col_start_[n_]);
    std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) {
        std::size_t pos = fill[row_col_[k]]++;
        col_row_[pos] = static_cast<int>(i);
        col_val_[pos] = row_val_[k];
      }
  }

  // Geometric-mean equilibration rounded to powers of two (exact in binary).
  void compute_scaling() {
    row_scale_.assign(m_, 1.0);
    col_scale_.assign(n_, 1.0);
    std::vector<double> rmin(m_), rmax(m_);
    for (int pass = 0; pass < 6; ++pass) {
      std::fill(rmin.begin(), rmin.end(), kInf);
      std::fill(rmax.begin(), rmax.end(), 0.0);
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          double a = std::abs(col_val_[k]) * col_scale_[j];
          rmin[col_row_[k]] = std::min(rmin[col_row_[k]], a);
          rmax[col_row_[k]] = std::max(rmax[col_row_[k]], a);
        }
      for (std::size_t i = 0; i < m_; ++i)
        if (rmax[i] > 0.0) row_scale_[i] = pow2(1.0 / std::sqrt(rmin[i] * rmax[i]));
      for (std::size_t j = 0; j < n_; ++j) {
        double cmin = kInf, cmax = 0.0;
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          double a = std::abs(col_val_[k]) * row_scale_[col_row_[k]];
          cmin = std::min(cmin, a);
          cmax = std::max(cmax, a);
        }
        if (cmax > 0.0) col_scale_[j] = pow2(1.0 / std::sqrt(cmin * cmax));
      }
    }
  }

  // Nearest power of two, limited to [2^-16, 2^16] so tiny coefficients
  // cannot push bounds below the feasibility tolerance.
  static double pow2(double v) {
    long e = std::lround(std::log2(v));
    return std::ldexp(1.0, static_cast<int>(std::clamp(e, -16L, 16L)));
  }

  void apply_scaling() {
    std::size_t total = n_ + m_;
    lo_.resize(total);
    up_.resize(total);
    cost_.assign(total, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      const auto& v = p_.variable(j);
      lo_[j] = v.lower / col_scale_[j];
      up_[j] = v.upper / col_scale_[j];
      cost_[j] = v.cost * col_scale_[j];
      for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
        col_val_[k] *= row_scale_[col_row_[k]] * col_scale_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      lo_[n_ + i] = p_.row(i).lower * row_scale_[i];
      up_[n_ + i] = p_.row(i).upper * row_scale_[i];
      for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k)
        row_val_[k] *= row_scale_[i] * col_scale_[row_col_[k]];
    }
  }

  bool init_basis() {
    std::size_t total = n_ + m_;
    x_.assign(total, 0.0);
    state_.assign(total, State::at_zero);
    head_.resize(m_);
    d_.assign(total, 0.0);
    weight_.assign(total, 1.0);
    work_.assign(m_, 0.0);
    prow_.assign(total, 0.0);
    for (std::size_t j = 0; j < n_; ++j) place_at_bound(j);
    for (std::size_t i = 0; i < m_; ++i) {
      head_[i] = static_cast<int>(n_ + i);
      state_[n_ + i] = State::basic;
    }
    return refactor();
  }

  void place_at_bound(std::size_t j) {
    if (std::isfinite(lo_[j])) {
      state_[j] = State::at_lower;
      x_[j] = lo_[j];
    } else if (std::isfinite(up_[j])) {
      state_[j] = State::at_upper;
      x_[j] = up_[j];
    } else {
      state_[j] = State::at_zero;
      x_[j] = 0.0;
    }
  }

  // --- linear algebra ----------------------------------------------------

  template <class F>
  void for_column(std::size_t j, F&& f) const {
    if (j < n_) {
      for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) f(col_row_[k], col_val_[k]);
    } else {
      f(static_cast<int>(j - n_), -1.0);
    }
  }

  bool refactor() {
    std::vector<int> ap(m_ + 1, 0), ai;
    std::vector<double> ax;
    ai.reserve(m_ * 3);
    ax.reserve(m_ * 3);
    for (std::size_t i = 0; i < m_; ++i) {
      for_column(head_[i], [&](int r, double a) {
        ai.push_back(r);
        ax.push_back(a);
      });
      ap[i + 1] = static_cast<int>(ai.size());
    }
    etas_.clear();
    if (!lu_.factor(static_cast<int>(m_), ap, ai, ax)) return false;
    recompute_basics();
    return true;
  }

  void recompute_basics() {
    std::fill(work_.begin(), work_.end(), 0.0);
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (state_[j] == State::basic || x_[j] == 0.0) continue;
      double xj = x_[j];
      for_column(j, [&](int r, double a) { work_[r] -= a * xj; });
    }
    ftran(work_);
    for (std::size_t i = 0; i < m_; ++i) x_[head_[i]] = work_[i];
  }

  void ftran(std::vector<double>& v) const {
    lu_.solve(v.data());
    for (const Eta& e : etas_) {
      double vr = v[e.row] / e.pivot;
      if (vr != 0.0)
        for (std::size_t k = 0; k < e.idx.size(); ++k) v[e.idx[k]] -= e.val[k] * vr;
      v[e.row] = vr;
    }
  }

  void btran(std::vector<double>& c) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = c[it->row];
      for (std::size_t k = 0; k < it->idx.size(); ++k) s -= it->val[k] * c[it->idx[k]];
      c[it->row] = s / it->pivot;
    }
    lu_.solve_transposed(c.data());
  }

  void push_eta(int r, const std::vector<double>& alpha) {
    Eta e;
    e.row = r;
    e.pivot = alpha[r];
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (static_cast<int>(i) == r || std::abs(alpha[i]) < 1e-14) continue;
      e.idx.push_back(static_cast<int>(i));
      e.val.push_back(alpha[i]);
    }
    etas_.push_back(std::move(e));
  }

  // --- pricing -----------------------------------------------------------

  double phase_cost(std::size_t v, int phase) const {
    if (phase == 2) return cost_[v];
    double tol = opt_.primal_tolerance;
    if (x_[v] < lo_[v] - tol) return -1.0;
    if (x_[v] > up_[v] + tol) return 1.0;
    return 0.0;
  }

  double total_infeasibility() const {
    double s = 0.0, tol = opt_.primal_tolerance;
    for (std::size_t i = 0; i < m_; ++i) {
      std::size_t v = head_[i];
      if (x_[v] < lo_[v] - tol) s += lo_[v] - x_[v];
      else if (x_[v] > up_[v] + tol) s += x_[v] - up_[v];
    }
    return s;
  }

  void compute_duals(int phase, std::vector<double>& y) const {
    y.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = phase_cost(head_[i], phase);
    btran(y);
  }

  void recompute_reduced_costs(int phase) {
    compute_duals(phase, y_);
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (state_[j] == State::basic) {
        d_[j] = 0.0;
        continue;
      }
      double d = phase == 2 ? cost_[j] : 0.0;
      for_column(j, [&](int r, double a) { d -= y_[r] * a; });
      d_[j] = d;
    }
  }

  int eligible_direction(std::size_t j) const {
    State s = state_[j];
    if (s == State::basic || up_[j] <= lo_[j]) return 0;
    double d = d_[j], tol = opt_.dual_tolerance;
    if (s == State::at_lower) return d < -tol ? 1 : 0;
    if (s == State::at_upper) return d > tol ? -1 : 0;
    if (std::abs(d) > tol) return d < 0 ? 1 : -1;
    return 0;
  }

  long choose_entering(int& dir) const {
    long best = -1;
    double best_score = 0.0;
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      int dj = eligible_direction(j);
      if (!dj) continue;
      if (bland_) {
        dir = dj;
        return static_cast<long>(j);
      }
      double score = d_[j] * d_[j] / weight_[j];
      if (score > best_score) {
        best_score = score;
        best = static_cast<long>(j);
        dir = dj;
      }
    }
    return best;
  }

  // Row r of B^-1 [A, -I] into prow_, nonzero positions listed in touched_.
  void compute_pivot_row(std::size_t r) {
    for (int j : touched_) {
      prow_[j] = 0.0;
      mark_[j] = 0;
    }
    touched_.clear();
    std::fill(work_.begin(), work_.end(), 0.0);
    work_[r] = 1.0;
    btran(work_);
    for (std::size_t i = 0; i < m_; ++i) {
      double rho = work_[i];
      if (std::abs(rho) < 1e-13) continue;
      for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) {
        int j = row_col_[k];
        if (!mark_[j]) {
          mark_[j] = 1;
          touched_.push_back(j);
        }
        prow_[j] += rho * row_val_[k];
      }
      int logical = static_cast<int>(n_ + i);
      mark_[logical] = 1;
      touched_.push_back(logical);
      prow_[logical] = -rho;
    }
  }

  // --- ratio test --------------------------------------------------------

  struct Step {
    long leave_row = -1;
    bool flip = false;
    bool unbounded = false;
    double theta = 0.0;
    double target = 0.0;  // bound the leaving variable lands on
  };

  bool target_of(std::size_t i, double delta, int phase, double& target) const {
    const double ftol = opt_.primal_tolerance;
    std::size_t v = head_[i];
    double xv = x_[v];
    if (delta > 0.0) {
      if (phase == 1 && xv < lo_[v] - ftol) target = lo_[v];
      else if (phase == 1 && xv > up_[v] + ftol) return false;
      else target = up_[v];
    } else {
      if (phase == 1 && xv > up_[v] + ftol) target = up_[v];
      else if (phase == 1 && xv < lo_[v] - ftol) return false;
      else target = lo_[v];
    }
    return std::isfinite(target);
  }

  Step ratio_test(std::size_t q, int dir, const std::vector<double>& alpha, int phase) const {
    const double ftol = opt_.primal_tolerance;
    double amax = 0.0;
    for (double a : alpha) amax = std::max(amax, std::abs(a));
    const double ptol = std::max(opt_.pivot_tolerance, 1e-11 * amax);

    double theta_max = kInf;
    for (std::size_t i = 0; i < m_; ++i) {
      double a = alpha[i];
      if (std::abs(a) <= ptol) continue;
      double delta = -dir * a, target;
      if (!target_of(i, delta, phase, target)) continue;
      double relaxed = (target - x_[head_[i]]) / delta + ftol / std::abs(delta);
      theta_max = std::min(theta_max, relaxed);
    }

    Step st;
    double range = up_[q] - lo_[q];
    if (std::isfinite(range) && range <= theta_max) {
      st.flip = true;
      st.theta = range;
      return st;
    }
    if (!std::isfinite(theta_max)) {
      st.unbounded = true;
      return st;
    }

    double best_piv = -1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      double a = alpha[i];
      if (std::abs(a) <= ptol) continue;
      double delta = -dir * a, target;
      if (!target_of(i, delta, phase, target)) continue;
      double dist = (target - x_[head_[i]]) / delta;
      if (dist > theta_max) continue;
      bool better;
      if (bland_)
        better = st.leave_row < 0 || dist < st.theta - 1e-12 ||
                 (std::abs(dist - st.theta) <= 1e-12 && head_[i] < head_[st.leave_row]);
      else better = std::abs(a) > best_piv;
      if (better) {
        best_piv = std::abs(a);
        st.leave_row = static_cast<long>(i);
        st.theta = dist;
        st.target = target;
      }
    }
    st.theta = std::max(st.theta, 0.0);
    return st;
  }

  // --- main loop ---------------------------------------------------------

  Status iterate() {
    int phase = total_infeasibility() > 0.0 ? 1 : 2;
    bool fresh = false;  // d_ holds valid phase-2 reduced costs
    std::size_t degenerate_run = 0;
    int recoveries = 0;
    std::vector<double> alpha(m_);
    mark_.assign(n_ + m_, 0);
    auto t0 = std::chrono::steady_clock::now();

    while (true) {
      if (iterations_ >= max_iter_) return Status::iteration_limit;
      if (etas_.size() >= opt_.refactor_interval) {
        if (!refactor() && !recover(recoveries)) return Status::numerical_failure;
        fresh = false;
        log_progress(phase, t0);
      }
      bool infeasible = total_infeasibility() > 0.0;
      if (phase == 2 && infeasible) phase = 1;
      if (phase == 1 && !infeasible) {
        phase = 2;
        fresh = false;
        std::fill(weight_.begin(), weight_.end(), 1.0);
      }
      if (phase == 1 || !fresh) {
        recompute_reduced_costs(phase);
        fresh = phase == 2;
      }

      int dir = 0;
      long q = choose_entering(dir);
      if (q < 0) {
        // confirm on a fresh factorization before declaring the phase done
        if (!etas_.empty()) {
          if (!refactor() && !recover(recoveries)) return Status::numerical_failure;
          fresh = false;
          continue;
        }
        if (phase == 1) return Status::infeasible;
        if (perturbed_) {
          restore_bounds();
          fresh = false;
          continue;
        }
        if (bland_) {
          bland_ = false;
          continue;
        }
        return Status::optimal;
      }

      std::fill(alpha.begin(), alpha.end(), 0.0);
      for_column(static_cast<std::size_t>(q), [&](int r, double a) { alpha[r] = a; });
      ftran(alpha);
      Step st = ratio_test(static_cast<std::size_t>(q), dir, alpha, phase);
      if (st.unbounded) return phase == 2 ? Status::unbounded : Status::numerical_failure;
      ++iterations_;
      if (phase == 1) ++phase1_iterations_;

      double dq = d_[q];
      if (st.theta * std::abs(dq) <= 1e-12) {
        ++degenerate_run;
        if (phase == 2 && !perturb_used_ && degenerate_run > opt_.perturb_trigger) {
          perturb_bounds();
          fresh = false;
          degenerate_run = 0;
        }
        if (degenerate_run > opt_.bland_trigger) bland_ = true;
      } else {
        degenerate_run = 0;
        bland_ = false;
      }

      double step = dir * st.theta;
      x_[q] += step;
      if (step != 0.0)
        for (std::size_t i = 0; i < m_; ++i) x_[head_[i]] -= step * alpha[i];

      if (st.flip) {
        if (dir > 0) {
          state_[q] = State::at_upper;
          x_[q] = up_[q];
        } else {
          state_[q] = State::at_lower;
          x_[q] = lo_[q];
        }
        continue;
      }

      std::size_t r = static_cast<std::size_t>(st.leave_row);
      std::size_t leaving = head_[r];
      double pivot = alpha[r];

      if (phase == 2 && fresh) {
        compute_pivot_row(r);
        if (std::abs(prow_[q] - pivot) > 1e-7 * (1.0 + std::abs(pivot))) fresh = false;
        double theta_d = dq / pivot;
        double wq = weight_[q];
        for (int j : touched_) {
          if (state_[j] == State::basic) continue;
          double arj = prow_[j];
          d_[j] -= theta_d * arj;
          double ratio = arj / pivot;
          weight_[j] = std::max(weight_[j], ratio * ratio * wq);
        }
        d_[q] = 0.0;
        d_[leaving] = -theta_d;
        weight_[leaving] = std::max(wq / (pivot * pivot), 1.0);
        if (weight_[leaving] > 1e8) std::fill(weight_.begin(), weight_.end(), 1.0);
      }

      x_[leaving] = st.target;
      state_[leaving] = st.target == lo_[leaving] ? State::at_lower : State::at_upper;
      head_[r] = static_cast<int>(q);
      state_[q] = State::basic;
      push_eta(static_cast<int>(r), alpha);
    }
  }

  // Widens every finite bound of a non-fixed variable by a relative amount in
  // [1, 2) x 1e-6, varying with the index. Nonbasic variables follow their bound.
  void perturb_bounds() {
    if (perturb_used_) return;
    perturb_used_ = perturbed_ = true;
    orig_lo_ = lo_;
    orig_up_ = up_;
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (!(up_[j] > lo_[j])) continue;
      double u = static_cast<double>((j * 2654435761u) % 1000003u) / 1000003.0;
      double base = 1e-6 * (1.0 + u);
      if (std::isfinite(lo_[j])) lo_[j] -= base * (1.0 + std::abs(lo_[j]));
      if (std::isfinite(up_[j])) up_[j] += base * (1.0 + std::abs(up_[j]));
      snap_nonbasic(j);
    }
    recompute_basics();
  }

  void restore_bounds() {
    perturbed_ = false;
    lo_ = orig_lo_;
    up_ = orig_up_;
    for (std::size_t j = 0; j < n_ + m_; ++j) snap_nonbasic(j);
    recompute_basics();
    bland_ = false;
  }

  void snap_nonbasic(std::size_t j) {
    if (state_[j] == State::at_lower) x_[j] = lo_[j];
    else if (state_[j] == State::at_upper) x_[j] = up_[j];
  }

  // Singular basis: fall back to the slack basis, keeping nonbasic values.
  bool recover(int& recoveries) {
    if (recoveries++ > 2) return false;
    for (std::size_t i = 0; i < m_; ++i) {
      std::size_t v = head_[i];
      if (v < n_) place_at_bound(v);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      head_[i] = static_cast<int>(n_ + i);
      state_[n_ + i] = State::basic;
    }
    bland_ = false;
    return refactor();
  }

  void log_progress(int phase, std::chrono::steady_clock::time_point t0) const {
    if (!opt_.log) return;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    *opt_.log << "  iter " << iterations_ << " phase " << phase << " infeas " << total_infeasibility()
              << " t=" << secs << "s\n";
  }

  // --- results -----------------------------------------------------------

  void extract(LpSolution& sol) {
    sol.primal.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) sol.primal[j] = x_[j] * col_scale_[j];
    sol.objective = p_.objective_value(sol.primal);
    sol.duals.assign(m_, 0.0);
    sol.reduced_costs.assign(n_, 0.0);
    if (sol.status != Status::optimal) return;
    compute_duals(2, y_);
    for (std::size_t i = 0; i < m_; ++i) sol.duals[i] = y_[i] * row_scale_[i];
    for (std::size_t j = 0; j < n_; ++j) sol.reduced_costs[j] = p_.variable(j).cost;
    for (std::size_t i = 0; i < m_; ++i) {
      auto idx = p_.row_indices(i);
      auto val = p_.row_values(i);
      for (std::size_t k = 0; k < idx.size(); ++k) sol.reduced_costs[idx[k]] -= sol.duals[i] * val[k];
    }
  }

  const LpProblem& p_;
  SimplexOptions opt_;
  std::size_t n_ = 0, m_ = 0;
  std::vector<std::size_t> row_start_, col_start_;
  std::vector<int> row_col_, col_row_;
  std::vector<double> row_val_, col_val_;
  std::vector<double> row_scale_, col_scale_;
  std::vector<double> lo_, up_, cost_, x_;
  std::vector<double> d_, weight_, y_, work_, prow_;
  std::vector<int> touched_;
  std::vector<char> mark_;
  std::vector<State> state_;
  std::vector<int> head_;
  KluFactor lu_;
  std::vector<Eta> etas_;
  bool bland_ = false;
  bool perturbed_ = false, perturb_used_ = false;
  std::vector<double> orig_lo_, orig_up_;
  std::size_t iterations_ = 0, phase1_iterations_ = 0, max_iter_ = 0;
};

}  // namespace detail

/// Solves `problem` to optimality. Deterministic for identical input.
/// Throws std::invalid_argument if the problem is malformed.
inline LpSolution solve(const LpProblem& problem, const SimplexOptions& options = {}) {
  problem.validate();
  detail::BoundedSimplex simplex(problem, options);
  return simplex.run();
}

}  // namespace prosumgrid::lp
