#include "regionmix/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "regionmix/errors.hpp"
#include "regionmix/rng.hpp"

namespace regionmix {

bool TransportPlan::is_permutation() const {
  const int sz = n();
  if (sz == 0 || pi.cols() != sz) return false;
  for (int i = 0; i < sz; ++i)
    if (pi.row(i).sum() != 1 || pi.col(i).sum() != 1) return false;
  return true;
}

Eigen::VectorXi TransportPlan::row_targets() const {
  if (!is_permutation()) throw NotConverged("plan is not a permutation");
  Eigen::VectorXi t(n());
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j)
      if (pi(i, j) == 1) t(i) = j;
  return t;
}

TransportPlan TransportPlan::identity(int n) {
  TransportPlan p;
  p.pi = Eigen::MatrixXi::Identity(n, n);
  p.converged = true;
  p.iterations = 0;
  return p;
}

Eigen::MatrixXd build_cost_matrix(int g, double xi) {
  const int n = g * g;
  Eigen::MatrixXd c(n, n);
  const double diag = g > 1 ? (g - 1) * std::sqrt(2.0) : 1.0;
  for (int i = 0; i < n; ++i) {
    const int ri = i / g, ci = i % g;
    for (int j = 0; j < n; ++j) {
      const int rj = j / g, cj = j % g;
      const double dr = ri - rj, dc = ci - cj;
      c(i, j) = xi * std::sqrt(dr * dr + dc * dc) / diag;
    }
  }
  return c;
}

Eigen::MatrixXd discounted_cost(const Eigen::MatrixXd& base,
                                const Eigen::VectorXd& s,
                                const Eigen::VectorXd& z) {
  if (base.rows() != base.cols() || s.size() != base.rows() ||
      z.size() != base.rows())
    throw ShapeError("cost/saliency/mask size mismatch");
  return base - s * z.transpose();
}

double plan_objective(const TransportPlan& plan, const Eigen::MatrixXd& cost) {
  return (plan.pi.cast<double>().array() * cost.array()).sum();
}

namespace {

// Smallest-index argmin over a row or column.
int argmin_vec(const Eigen::VectorXd& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i)
    if (v(i) < v(best)) best = i;
  return best;
}

}  // namespace

TransportPlan masked_transport(const Eigen::MatrixXd& cost,
                               std::optional<double> v,
                               const Eigen::VectorXd* z) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw ShapeError("cost matrix must be square");
  const double penalty =
      v.value_or(cost.maxCoeff() - cost.minCoeff() + 1.0);

  const bool check_props =
      z != nullptr && z->size() == n &&
      ((z->array() == 0.0) || (z->array() == 1.0)).all() && z->sum() > 0.0;
  double prev_partial = std::numeric_limits<double>::infinity();

  // When the penalty exceeds the cost range, an entry penalized k+1 times
  // is always worse than any entry penalized k times, so each row visits
  // its columns in ascending base-cost order (ties by column index). A
  // pointer walk over the presorted order then replaces the per-penalty
  // row rescan; the generic rescan remains for caller-supplied small v.
  const bool sorted_path = penalty > cost.maxCoeff() - cost.minCoeff();
  std::vector<std::vector<int>> order;
  std::vector<long> ptr;
  if (sorted_path) {
    order.assign(n, std::vector<int>(n));
    ptr.assign(n, 0);
    for (int i = 0; i < n; ++i) {
      std::iota(order[i].begin(), order[i].end(), 0);
      std::stable_sort(order[i].begin(), order[i].end(),
                       [&](int a, int b) { return cost(i, a) < cost(i, b); });
    }
  }

  Eigen::MatrixXd c;
  if (!sorted_path) c = cost;
  // current cheapest column per row and its penalized cost
  Eigen::VectorXi target(n);
  Eigen::VectorXd target_cost(n);
  for (int i = 0; i < n; ++i) {
    target(i) = sorted_path ? order[i][0] : argmin_vec(c.row(i));
    target_cost(i) = cost(i, target(i));
  }

  TransportPlan plan;
  std::vector<int> winner(n);
  const long max_iters = static_cast<long>(n) * (n - 1) / 2 + 1;

  for (long t = 0; t < max_iters; ++t) {
    // column conflicts: the cheapest row keeps the column; ascending row
    // scan with strict improvement = smallest-index tie-break
    std::fill(winner.begin(), winner.end(), -1);
    for (int i = 0; i < n; ++i) {
      const int j = target(i);
      if (winner[j] < 0 || target_cost(i) < target_cost(winner[j]))
        winner[j] = i;
    }
    plan.iterations = static_cast<int>(t + 1);

    if (check_props) {
      double part = 0.0;
      for (int j = 0; j < n; ++j) {
        if ((*z)(j) != 1.0) continue;
        if (winner[j] < 0)
          throw Error("masked transport invariant broken: column " +
                      std::to_string(j) + " lost coverage");
        part += cost(winner[j], j);
      }
      if (part > prev_partial + 1e-9)
        throw Error("masked transport invariant broken: partial objective rose");
      prev_partial = part;
    }

    bool any_lost = false;
    for (int i = 0; i < n; ++i) {
      const int j = target(i);
      if (winner[j] == i) continue;
      any_lost = true;
      if (sorted_path) {
        ++ptr[i];
        target(i) = order[i][ptr[i] % n];
        target_cost(i) =
            cost(i, target(i)) + static_cast<double>(ptr[i] / n) * penalty;
      } else {
        c(i, j) += penalty;
        target(i) = argmin_vec(c.row(i));
        target_cost(i) = c(i, target(i));
      }
    }
    if (!any_lost) {
      plan.converged = true;
      break;
    }
  }

  plan.pi = Eigen::MatrixXi::Zero(n, n);
  for (int j = 0; j < n; ++j)
    if (winner[j] >= 0) plan.pi(winner[j], j) = 1;
  return plan;
}

TransportPlan exact_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw ShapeError("cost matrix must be square");
  if (!cost.allFinite()) throw DomainError("cost matrix has non-finite entries");

  // Hungarian algorithm with potentials, 1-indexed internals.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), pot(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - pot[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          pot[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  TransportPlan plan;
  plan.pi = Eigen::MatrixXi::Zero(n, n);
  for (int j = 1; j <= n; ++j) plan.pi(p[j] - 1, j - 1) = 1;
  plan.converged = true;
  plan.iterations = 0;
  return plan;
}

TransportPlan brute_force_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (n > 8) throw TooLarge("factorial oracle limited to n <= 8");

  auto perm_cost = [&](const std::vector<int>& perm) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += cost(i, perm[i]);
    return acc;
  };

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = perm_cost(perm);
  // next_permutation from sorted start enumerates in lexicographic order,
  // so keeping only strict improvements yields the lex-smallest optimum
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double c = perm_cost(perm);
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  }

  TransportPlan plan;
  plan.pi = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) plan.pi(i, best[i]) = 1;
  plan.converged = true;
  return plan;
}

TransportPlan random_permutation_plan(int n, Rng& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.uniform_int(i + 1)]);
  TransportPlan plan;
  plan.pi = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) plan.pi(i, perm[i]) = 1;
  plan.converged = true;
  return plan;
}

ImageTensor apply_plan(const TransportPlan& plan, const ImageTensor& x,
                       const Grid& grid) {
  if (!plan.converged || !plan.is_permutation())
    throw NotConverged("apply_plan needs a converged permutation plan");
  if (plan.n() != grid.n()) throw ShapeError("plan/grid size mismatch");
  if (x.height != grid.g * grid.region_h || x.width != grid.g * grid.region_w)
    throw ShapeError("image does not match grid");

  ImageTensor out(x.channels, x.height, x.width);
  for (int i = 0; i < plan.n(); ++i) {
    for (int j = 0; j < plan.n(); ++j) {
      if (plan.pi(i, j) != 1) continue;
      const int ys = grid.region_row(i) * grid.region_h;
      const int xs = grid.region_col(i) * grid.region_w;
      const int yd = grid.region_row(j) * grid.region_h;
      const int xd = grid.region_col(j) * grid.region_w;
      for (int c = 0; c < x.channels; ++c)
        for (int y = 0; y < grid.region_h; ++y)
          for (int xx = 0; xx < grid.region_w; ++xx)
            out.at(c, yd + y, xd + xx) = x.at(c, ys + y, xs + xx);
    }
  }
  return out;
}

Eigen::VectorXd apply_plan(const TransportPlan& plan,
                           const Eigen::VectorXd& s) {
  if (plan.n() != s.size()) throw ShapeError("plan/vector size mismatch");
  return plan.pi.cast<double>().transpose() * s;
}

}  // namespace regionmix
