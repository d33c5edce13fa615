#ifndef REGIONMIX_ENERGY_HPP_
#define REGIONMIX_ENERGY_HPP_

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "regionmix/saliency.hpp"
#include "regionmix/tensor.hpp"

namespace regionmix {

// Discrete label space {t/m | t = 0..m}.
struct MaskLabelSpace {
  int m = 2;

  int level_count() const { return m + 1; }
  double label(int t) const { return static_cast<double>(t) / m; }
  // Label value nearest to lambda.
  double nearest(double lambda) const;
  // Level index of an exact label value; throws DomainError if value * m
  // is not an integer within 1e-9.
  int level_of(double value) const;
};

// Per-region mask over the label space.
struct Mask {
  Eigen::VectorXd values;
  Grid grid;
  int m = 2;

  int n() const { return static_cast<int>(values.size()); }
  double mean() const { return values.mean(); }
};

// Coefficients of the mask objective plus prior parameters.
struct EnergyParams {
  double beta = 1.2;    // label smoothness
  double gamma = 0.5;   // data smoothness
  double eta = 0.2;     // prior
  double xi = 0.8;      // transport cost
  double lambda = 0.5;  // mixing weight
  int m = 2;            // label levels
};

// Order of binary label pairs in the pairwise tables.
enum PhiIndex { kPhi00 = 0, kPhi01 = 1, kPhi10 = 2, kPhi11 = 3 };

// One mask optimization problem: post-transport saliencies, the
// 4-connected neighborhood with its precomputed pairwise data tables,
// and the coefficients. Immutable after construction.
struct EnergyInstance {
  Eigen::VectorXd s0t;  // Pi0^T s(x0), multiplies z_i in the unary term
  Eigen::VectorXd s1t;  // Pi1^T s(x1), multiplies (1 - z_i)
  std::vector<std::pair<int, int>> neighbors;    // each unordered pair once
  std::vector<Eigen::Vector4d> phi_b;            // raw binary tables
  std::vector<Eigen::Vector4d> phi_bp;           // symmetrized tables
  Grid grid;
  EnergyParams params;

  int n() const { return static_cast<int>(s0t.size()); }
};

double unary(int i, double z_i, const EnergyInstance& inst);

// Label smoothness (z_i - z_j)^2.
inline double psi(double z_i, double z_j) {
  const double d = z_i - z_j;
  return d * d;
}

// Mean absolute difference along the shared boundary of two adjacent
// regions, region i taken from image `a` and region j from image `b`.
double dp_boundary(const ImageTensor& a, const ImageTensor& b,
                   const Grid& grid, int i, int j);

// Symmetrization making the pairwise data term graph-representable. The
// fourth output is evaluated as (out01 + out10) - out00, which makes the
// identity out10 + out01 - out00 - out11 = 0 hold bitwise.
Eigen::Vector4d phi_b_prime(const Eigen::Vector4d& phi_b);

// Bilinear extension of the symmetrized binary table to fractional labels.
double phi_multi(double z_i, double z_j, const Eigen::Vector4d& phi_bp);

// log Binomial(m, lambda) pmf at t = z_i * m; lambda is clamped to
// [1e-4, 1 - 1e-4] so endpoint weights stay finite.
double prior_log_pmf(double z_i, double lambda, int m);

// Full pairwise term beta * psi + gamma * phi for one neighbor entry.
double pairwise_energy(double z_i, double z_j, const Eigen::Vector4d& phi_bp,
                       const EnergyParams& params);

double total_energy(const Mask& z, const EnergyInstance& inst);

// Global minimizer by exhaustive enumeration; requires (m+1)^n <= 1e6.
// Ties broken by lexicographically smallest mask.
std::pair<Mask, double> brute_force_min(const EnergyInstance& inst);

// Builds the 4-connected neighbor list of a g x g grid, each unordered
// pair once, ordered (i, j) with i < j.
std::vector<std::pair<int, int>> grid_neighbors(int g);

// Assembles an instance from two images: boundary tables from the pixel
// data, saliencies as given (already transported when plans are not
// identity).
EnergyInstance make_energy_instance(const ImageTensor& x0,
                                    const ImageTensor& x1, const Grid& grid,
                                    const Eigen::VectorXd& s0t,
                                    const Eigen::VectorXd& s1t,
                                    const EnergyParams& params);

}  // namespace regionmix

#endif  // REGIONMIX_ENERGY_HPP_
