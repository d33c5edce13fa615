#ifndef REGIONMIX_GRAPHCUT_HPP_
#define REGIONMIX_GRAPHCUT_HPP_

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "regionmix/energy.hpp"

namespace regionmix {

// A binary two-label problem extracted from one alpha-beta swap move.
// Label 0 stands for the lower swap label, label 1 for the higher one.
// Pairwise terms to frozen neighbors are already folded into the unaries.
struct SwapSubproblem {
  Eigen::VectorXd theta0;  // unary cost of label 0 per active node
  Eigen::VectorXd theta1;  // unary cost of label 1 per active node
  // (node a, node b, table indexed by PhiIndex over the two labels)
  std::vector<std::tuple<int, int, Eigen::Vector4d>> pairwise;

  int size() const { return static_cast<int>(theta0.size()); }
};

struct BinaryCutResult {
  std::vector<int> labels;  // 0/1 per active node
  double energy = 0.0;      // cut value plus the tracked constant offset
};

// Exact minimizer of a submodular binary subproblem via s-t min cut
// (Dinic). Each pairwise table is checked for binary submodularity first;
// a violating table raises SubmodularityViolation.
BinaryCutResult min_cut_binary(const SwapSubproblem& sub);

struct SwapResult {
  Mask mask;
  double energy = 0.0;
  int sweeps = 0;
  std::vector<double> energy_trace;  // energy after each accepted move
};

// Alpha-beta swap over all unordered label pairs in lexicographic order.
// A move is accepted only on strict energy decrease (tolerance 1e-12);
// terminates when a full sweep accepts nothing, capped at max_sweeps.
SwapResult alpha_beta_swap(const EnergyInstance& inst, const Mask& init,
                           int max_sweeps = 50);

// Builds the reduced binary subproblem for labels (lo, hi) against the
// frozen remainder of `current`. Exposed for the local-optimality checks.
SwapSubproblem make_swap_subproblem(const EnergyInstance& inst,
                                    const Mask& current, double lo, double hi,
                                    const std::vector<int>& active);

}  // namespace regionmix

#endif  // REGIONMIX_GRAPHCUT_HPP_
