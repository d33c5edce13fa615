#include "regionmix/graphcut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "regionmix/errors.hpp"

namespace regionmix {
namespace {

constexpr double kAcceptTol = 1e-12;
constexpr double kSubmodTol = 1e-9;

// Dinic max-flow on double capacities; graphs here have at most a few
// hundred nodes, so no scaling tricks are needed.
class MaxFlow {
 public:
  explicit MaxFlow(int node_count)
      : head_(node_count), level_(node_count), iter_(node_count) {}

  void add_edge(int from, int to, double cap) {
    head_[from].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, cap});
    head_[to].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0.0});
  }

  double solve(int s, int t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      for (;;) {
        const double f = dfs(s, t, std::numeric_limits<double>::infinity());
        if (f <= 0.0) break;
        flow += f;
      }
    }
    return flow;
  }

  // After solve: true if `v` is reachable from s in the residual graph.
  bool source_side(int v) const { return level_[v] >= 0; }

 private:
  struct Edge {
    int to;
    double cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int id : head_[v]) {
        const Edge& e = edges_[id];
        if (e.cap > 1e-15 && level_[e.to] < 0) {
          level_[e.to] = level_[v] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(int v, int t, double f) {
    if (v == t) return f;
    for (int& i = iter_[v]; i < static_cast<int>(head_[v].size()); ++i) {
      const int id = head_[v][i];
      Edge& e = edges_[id];
      if (e.cap > 1e-15 && level_[v] < level_[e.to]) {
        const double d = dfs(e.to, t, std::min(f, e.cap));
        if (d > 0.0) {
          e.cap -= d;
          edges_[id ^ 1].cap += d;
          return d;
        }
      }
    }
    return 0.0;
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> head_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace

BinaryCutResult min_cut_binary(const SwapSubproblem& sub) {
  const int n = sub.size();
  for (const auto& [a, b, e] : sub.pairwise) {
    if (e(kPhi00) + e(kPhi11) > e(kPhi01) + e(kPhi10) + kSubmodTol)
      throw SubmodularityViolation(
          "pairwise table violates binary submodularity");
  }

  // Standard reduction: energy = offset + cut. Label 0 = source side,
  // label 1 = sink side.
  const int s = n, t = n + 1;
  MaxFlow flow(n + 2);
  double offset = 0.0;
  Eigen::VectorXd residual1 = sub.theta1 - sub.theta0;  // extra cost of label 1
  offset += sub.theta0.sum();

  for (const auto& [a, b, e] : sub.pairwise) {
    const double A = e(kPhi00), B = e(kPhi01), C = e(kPhi10), D = e(kPhi11);
    offset += A;
    residual1(a) += C - A;
    residual1(b) += D - C;
    const double cap = B + C - A - D;
    if (cap > 0.0) flow.add_edge(a, b, cap);
  }
  for (int i = 0; i < n; ++i) {
    if (residual1(i) > 0.0) {
      flow.add_edge(s, i, residual1(i));  // cut when i takes label 1
    } else if (residual1(i) < 0.0) {
      offset += residual1(i);
      flow.add_edge(i, t, -residual1(i));  // cut when i takes label 0
    }
  }

  const double cut = flow.solve(s, t);
  BinaryCutResult res;
  res.labels.resize(n);
  for (int i = 0; i < n; ++i) res.labels[i] = flow.source_side(i) ? 0 : 1;
  res.energy = offset + cut;
  return res;
}

SwapSubproblem make_swap_subproblem(const EnergyInstance& inst,
                                    const Mask& current, double lo, double hi,
                                    const std::vector<int>& active) {
  const int k = static_cast<int>(active.size());
  std::vector<int> pos(inst.n(), -1);
  for (int a = 0; a < k; ++a) pos[active[a]] = a;

  SwapSubproblem sub;
  sub.theta0 = Eigen::VectorXd::Zero(k);
  sub.theta1 = Eigen::VectorXd::Zero(k);
  const EnergyParams& p = inst.params;
  for (int a = 0; a < k; ++a) {
    const int i = active[a];
    sub.theta0(a) = unary(i, lo, inst) - p.eta * prior_log_pmf(lo, p.lambda, p.m);
    sub.theta1(a) = unary(i, hi, inst) - p.eta * prior_log_pmf(hi, p.lambda, p.m);
  }
  for (std::size_t e = 0; e < inst.neighbors.size(); ++e) {
    const auto [i, j] = inst.neighbors[e];
    const int a = pos[i], b = pos[j];
    if (a >= 0 && b >= 0) {
      Eigen::Vector4d tab;
      tab(kPhi00) = pairwise_energy(lo, lo, inst.phi_bp[e], p);
      tab(kPhi01) = pairwise_energy(lo, hi, inst.phi_bp[e], p);
      tab(kPhi10) = pairwise_energy(hi, lo, inst.phi_bp[e], p);
      tab(kPhi11) = pairwise_energy(hi, hi, inst.phi_bp[e], p);
      sub.pairwise.emplace_back(a, b, tab);
    } else if (a >= 0) {
      // frozen neighbor: fold into the unary
      sub.theta0(a) += pairwise_energy(lo, current.values(j), inst.phi_bp[e], p);
      sub.theta1(a) += pairwise_energy(hi, current.values(j), inst.phi_bp[e], p);
    } else if (b >= 0) {
      sub.theta0(b) += pairwise_energy(current.values(i), lo, inst.phi_bp[e], p);
      sub.theta1(b) += pairwise_energy(current.values(i), hi, inst.phi_bp[e], p);
    }
  }
  return sub;
}

SwapResult alpha_beta_swap(const EnergyInstance& inst, const Mask& init,
                           int max_sweeps) {
  const MaskLabelSpace space{inst.params.m};
  if (space.level_count() < 2)
    throw DomainError("label space needs at least two labels");

  SwapResult res;
  res.mask = init;
  res.energy = total_energy(res.mask, inst);

  for (res.sweeps = 0; res.sweeps < max_sweeps; ++res.sweeps) {
    bool accepted_any = false;
    for (int t1 = 0; t1 < space.level_count(); ++t1) {
      for (int t2 = t1 + 1; t2 < space.level_count(); ++t2) {
        const double lo = space.label(t1), hi = space.label(t2);
        std::vector<int> active;
        for (int i = 0; i < inst.n(); ++i) {
          const double v = res.mask.values(i);
          if (v == lo || v == hi) active.push_back(i);
        }
        if (active.empty()) continue;

        const SwapSubproblem sub =
            make_swap_subproblem(inst, res.mask, lo, hi, active);
        const BinaryCutResult cut = min_cut_binary(sub);

        Mask candidate = res.mask;
        for (std::size_t a = 0; a < active.size(); ++a)
          candidate.values(active[a]) = cut.labels[a] == 0 ? lo : hi;
        const double e = total_energy(candidate, inst);
        if (e < res.energy - kAcceptTol) {
          res.mask = std::move(candidate);
          res.energy = e;
          res.energy_trace.push_back(e);
          accepted_any = true;
        }
      }
    }
    if (!accepted_any) break;
  }
  return res;
}

}  // namespace regionmix
