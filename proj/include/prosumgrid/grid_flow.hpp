#pragma once

// Lossless DC load flow: susceptance matrix, PTDF, flows and line-limit rows.

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "prosumgrid/csv.hpp"
#include "prosumgrid/lp/problem.hpp"
#include "prosumgrid/scenario.hpp"

namespace prosumgrid {

class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DcNetwork {
  struct Branch {
    std::string id;
    std::size_t from = 0;
    std::size_t to = 0;
    double susceptance = 0;
    double capacity = kUnlimited;
  };

  std::vector<std::string> nodes;
  std::vector<Branch> lines;
  std::size_t slack = 0;
  std::vector<double> ptdf;  // lines x nodes, row-major

  double factor(std::size_t line, std::size_t node) const { return ptdf[line * nodes.size() + node]; }
};

namespace detail {

inline bool connected(const DcNetwork& net) {
  std::size_t n = net.nodes.size();
  if (n == 0) return true;
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& l : net.lines) {
    adj[l.from].push_back(l.to);
    adj[l.to].push_back(l.from);
  }
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack = {0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

}  // namespace detail

/// Fills net.ptdf from the reduced B-theta system with the slack angle at 0.
/// Throws GridError for a disconnected network or singular susceptance matrix.
inline void build_ptdf(DcNetwork& net) {
  const std::size_t n = net.nodes.size();
  if (net.slack >= n && n > 0) throw GridError("slack index out of range");
  for (const auto& l : net.lines)
    if (!(l.susceptance > 0) || !std::isfinite(l.susceptance)) throw GridError("line '" + l.id + "' has non-positive reactance");
  if (!detail::connected(net)) throw GridError("network is disconnected; DC flow needs one connected component");

  net.ptdf.assign(net.lines.size() * n, 0.0);
  if (n <= 1) return;
  // reduced index: node k maps to k or k-1 around the slack
  auto red = [&](std::size_t k) { return k < net.slack ? k : k - 1; };
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n - 1, n - 1);
  for (const auto& l : net.lines) {
    if (l.from != net.slack) b(red(l.from), red(l.from)) += l.susceptance;
    if (l.to != net.slack) b(red(l.to), red(l.to)) += l.susceptance;
    if (l.from != net.slack && l.to != net.slack) {
      b(red(l.from), red(l.to)) -= l.susceptance;
      b(red(l.to), red(l.from)) -= l.susceptance;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  if (lu.rank() < static_cast<Eigen::Index>(n - 1)) throw GridError("singular reduced susceptance matrix");
  Eigen::MatrixXd x = lu.inverse();  // angles per unit injection
  for (std::size_t li = 0; li < net.lines.size(); ++li) {
    const auto& l = net.lines[li];
    for (std::size_t k = 0; k < n; ++k) {
      if (k == net.slack) continue;
      double tf = l.from == net.slack ? 0.0 : x(red(l.from), red(k));
      double tt = l.to == net.slack ? 0.0 : x(red(l.to), red(k));
      net.ptdf[li * n + k] = l.susceptance * (tf - tt);
    }
  }
}

/// Network of the scenario's nodes and lines with PTDF computed.
inline DcNetwork make_network(const Scenario& s) {
  DcNetwork net;
  for (const auto& n : s.nodes) net.nodes.push_back(n.id);
  bool found = false;
  for (std::size_t i = 0; i < s.nodes.size() && !found; ++i)
    if (s.nodes[i].slack) {
      net.slack = i;
      found = true;
    }
  for (const auto& l : s.lines)
    net.lines.push_back({l.id, s.node_index(l.from), s.node_index(l.to), 1.0 / l.reactance, l.capacity});
  build_ptdf(net);
  return net;
}

/// Flows [line][hour] for injections [node][hour] (MW, positive = export).
/// Throws GridError if an hour's injections do not sum to zero within 1e-6.
inline std::vector<Series> line_flows(const DcNetwork& net, const std::vector<Series>& injections) {
  const std::size_t n = net.nodes.size();
  if (injections.size() != n) throw GridError("injection matrix does not match node count");
  std::size_t hours = n ? injections[0].size() : 0;
  std::vector<Series> flows(net.lines.size(), Series(hours, 0.0));
  for (std::size_t t = 0; t < hours; ++t) {
    double sum = 0, scale = 1;
    for (std::size_t k = 0; k < n; ++k) {
      sum += injections[k][t];
      scale = std::max(scale, std::abs(injections[k][t]));
    }
    if (std::abs(sum) > 1e-6 * scale)
      throw GridError("unbalanced injections in hour " + std::to_string(t) + " (sum " + csv::num(sum) + ")");
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
      double f = 0;
      for (std::size_t k = 0; k < n; ++k) f += net.factor(l, k) * injections[k][t];
      flows[l][t] = f;
    }
  }
  return flows;
}

struct FlowConstraints {
  std::vector<std::vector<lp::RowId>> line_rows;  // [line][hour]; index -1 when uncapped
  std::vector<lp::RowId> balance_rows;            // [hour]: sum of injections = 0
};

/// Adds -cap <= sum_n PTDF[l][n] INJ[n][t] <= cap for capped lines and
/// sum_n INJ[n][t] = 0 for every hour. `inj` is indexed [node][hour].
inline FlowConstraints emit_flow_constraints(lp::LpProblem& p, const DcNetwork& net,
                                             const std::vector<std::vector<lp::VarId>>& inj,
                                             const std::string& prefix = "") {
  const std::size_t n = net.nodes.size();
  if (inj.size() != n) throw GridError("injection variables do not match node count");
  std::size_t hours = n ? inj[0].size() : 0;
  FlowConstraints out;
  out.line_rows.assign(net.lines.size(), std::vector<lp::RowId>(hours));
  std::vector<lp::Term> terms;
  for (std::size_t t = 0; t < hours; ++t) {
    terms.clear();
    for (std::size_t k = 0; k < n; ++k) terms.push_back({inj[k][t], 1.0});
    out.balance_rows.push_back(p.add_row(prefix + "sum_inj[" + std::to_string(t) + "]", terms, 0.0, 0.0));
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
      double cap = net.lines[l].capacity;
      if (std::isinf(cap)) continue;
      terms.clear();
      for (std::size_t k = 0; k < n; ++k) {
        double f = net.factor(l, k);
        if (std::abs(f) > 1e-12) terms.push_back({inj[k][t], f});
      }
      out.line_rows[l][t] =
          p.add_row(prefix + "flow[" + net.lines[l].id + "," + std::to_string(t) + "]", terms, -cap, cap);
    }
  }
  return out;
}

/// PTDF as CSV: one row per line, one column per node.
inline void write_ptdf_csv(const DcNetwork& net, const std::filesystem::path& path) {
  csv::Writer w(path);
  std::vector<std::string> header = {"line"};
  for (const auto& n : net.nodes) header.push_back(n);
  w.row(header);
  for (std::size_t l = 0; l < net.lines.size(); ++l) {
    std::vector<std::string> cells = {net.lines[l].id};
    for (std::size_t k = 0; k < net.nodes.size(); ++k) cells.push_back(csv::num(net.factor(l, k)));
    w.row(cells);
  }
  w.close();
}

}  // namespace prosumgrid
