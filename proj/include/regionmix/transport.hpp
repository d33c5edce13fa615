#ifndef REGIONMIX_TRANSPORT_HPP_
#define REGIONMIX_TRANSPORT_HPP_

#include <optional>

#include <Eigen/Dense>

#include "regionmix/saliency.hpp"
#include "regionmix/tensor.hpp"

namespace regionmix {

// Binary n x n transport plan. At convergence every row and column sums
// to 1 (a permutation); an intermediate plan may have empty rows.
struct TransportPlan {
  Eigen::MatrixXi pi;
  bool converged = false;
  int iterations = 0;

  int n() const { return static_cast<int>(pi.rows()); }
  bool is_permutation() const;
  // Column assigned to each row; requires a permutation.
  Eigen::VectorXi row_targets() const;
  static TransportPlan identity(int n);
};

// Base geometric cost: Euclidean distance between region centers,
// normalized by the grid diagonal so the largest entry is 1 (g > 1),
// then scaled by xi. Zero diagonal, symmetric.
Eigen::MatrixXd build_cost_matrix(int g, double xi);

// C' = xiC - s z^T. `base` is the already xi-scaled matrix.
Eigen::MatrixXd discounted_cost(const Eigen::MatrixXd& base,
                                const Eigen::VectorXd& s,
                                const Eigen::VectorXd& z);

double plan_objective(const TransportPlan& plan, const Eigen::MatrixXd& cost);

// Greedy masked transport: rows pick their cheapest column, column
// conflicts keep the cheapest row, losers get their chosen entry
// penalized by v, repeat until no row loses. Converges within
// n(n-1)/2 + 1 iterations.
//
// When `z` is supplied and binary with at least one 1, the per-iteration
// guarantees are asserted: every column j with z_j = 1 holds exactly one
// winner, and the partial objective over those columns never increases.
// v defaults to (max(cost) - min(cost)) + 1.
TransportPlan masked_transport(const Eigen::MatrixXd& cost,
                               std::optional<double> v = std::nullopt,
                               const Eigen::VectorXd* z = nullptr);

// Exact minimum-cost assignment (Hungarian algorithm with potentials,
// O(n^3)); handles negative entries.
TransportPlan exact_assignment(const Eigen::MatrixXd& cost);

// Factorial enumeration oracle, n <= 8, lexicographic tie-break.
TransportPlan brute_force_assignment(const Eigen::MatrixXd& cost);

// Uniform random permutation plan, for the benchmark baseline.
TransportPlan random_permutation_plan(int n, class Rng& rng);

// Moves pixel blocks: output region j = input region i where pi(i,j)=1,
// i.e. the image-level action of Pi^T. Requires a converged plan.
ImageTensor apply_plan(const TransportPlan& plan, const ImageTensor& x,
                       const Grid& grid);

// Vector-level action of Pi^T on a region vector.
Eigen::VectorXd apply_plan(const TransportPlan& plan,
                           const Eigen::VectorXd& s);

}  // namespace regionmix

#endif  // REGIONMIX_TRANSPORT_HPP_
