#include "regionmix/energy.hpp"

#include <algorithm>
#include <cmath>

#include "regionmix/errors.hpp"

namespace regionmix {

double MaskLabelSpace::nearest(double lambda) const {
  long t = std::lround(lambda * m);
  t = std::clamp(t, 0L, static_cast<long>(m));
  return static_cast<double>(t) / m;
}

int MaskLabelSpace::level_of(double value) const {
  const double scaled = value * m;
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-9 || rounded < 0 || rounded > m)
    throw DomainError("value " + std::to_string(value) +
                      " is not a label of L with m=" + std::to_string(m));
  return static_cast<int>(rounded);
}

double unary(int i, double z_i, const EnergyInstance& inst) {
  if (i < 0 || i >= inst.n())
    throw std::out_of_range("region index " + std::to_string(i));
  return z_i * inst.s0t(i) + (1.0 - z_i) * inst.s1t(i);
}

double dp_boundary(const ImageTensor& a, const ImageTensor& b,
                   const Grid& grid, int i, int j) {
  const int ri = grid.region_row(i), ci = grid.region_col(i);
  const int rj = grid.region_row(j), cj = grid.region_col(j);
  const int dr = rj - ri, dc = cj - ci;
  if (std::abs(dr) + std::abs(dc) != 1)
    throw NotAdjacent("regions " + std::to_string(i) + " and " +
                      std::to_string(j) + " are not adjacent");
  if (a.channels != b.channels)
    throw ShapeError("channel mismatch in dp_boundary");

  const int rh = grid.region_h, rw = grid.region_w;
  double acc = 0.0;
  int count = 0;
  if (dc != 0) {
    // horizontal neighbors: compare the facing columns
    const int xa = dc > 0 ? ci * rw + rw - 1 : ci * rw;
    const int xb = dc > 0 ? cj * rw : cj * rw + rw - 1;
    const int y0 = ri * rh;
    for (int c = 0; c < a.channels; ++c)
      for (int y = 0; y < rh; ++y)
        acc += std::abs(a.at(c, y0 + y, xa) - b.at(c, y0 + y, xb));
    count = a.channels * rh;
  } else {
    // vertical neighbors: compare the facing rows
    const int ya = dr > 0 ? ri * rh + rh - 1 : ri * rh;
    const int yb = dr > 0 ? rj * rh : rj * rh + rh - 1;
    const int x0 = ci * rw;
    for (int c = 0; c < a.channels; ++c)
      for (int x = 0; x < rw; ++x)
        acc += std::abs(a.at(c, ya, x0 + x) - b.at(c, yb, x0 + x));
    count = a.channels * rw;
  }
  return acc / count;
}

Eigen::Vector4d phi_b_prime(const Eigen::Vector4d& phi_b) {
  const double half_cross = (phi_b(kPhi01) + phi_b(kPhi10)) / 2.0;
  const double half_diag = (phi_b(kPhi00) + phi_b(kPhi11)) / 2.0;
  Eigen::Vector4d out;
  out(kPhi00) = phi_b(kPhi00) + half_cross;
  out(kPhi01) = phi_b(kPhi01) + half_diag;
  out(kPhi10) = phi_b(kPhi10) + half_diag;
  // Evaluated this way so that out10 + out01 - out00 - out11 cancels
  // bitwise; algebraically it equals phi_b(1,1) + half_cross.
  out(kPhi11) = (out(kPhi01) + out(kPhi10)) - out(kPhi00);
  return out;
}

double phi_multi(double z_i, double z_j, const Eigen::Vector4d& phi_bp) {
  return z_i * z_j * phi_bp(kPhi11) + z_i * (1.0 - z_j) * phi_bp(kPhi10) +
         (1.0 - z_i) * z_j * phi_bp(kPhi01) +
         (1.0 - z_i) * (1.0 - z_j) * phi_bp(kPhi00);
}

double prior_log_pmf(double z_i, double lambda, int m) {
  const MaskLabelSpace space{m};
  const int t = space.level_of(z_i);
  const double l = std::clamp(lambda, 1e-4, 1.0 - 1e-4);
  const double log_choose = std::lgamma(m + 1.0) - std::lgamma(t + 1.0) -
                            std::lgamma(m - t + 1.0);
  return log_choose + t * std::log(l) + (m - t) * std::log(1.0 - l);
}

double pairwise_energy(double z_i, double z_j, const Eigen::Vector4d& phi_bp,
                       const EnergyParams& params) {
  return params.beta * psi(z_i, z_j) +
         params.gamma * phi_multi(z_i, z_j, phi_bp);
}

double total_energy(const Mask& z, const EnergyInstance& inst) {
  if (z.n() != inst.n()) throw ShapeError("mask/instance size mismatch");
  const EnergyParams& p = inst.params;
  double e = 0.0;
  for (int i = 0; i < inst.n(); ++i) {
    e += unary(i, z.values(i), inst);
    e -= p.eta * prior_log_pmf(z.values(i), p.lambda, p.m);
  }
  for (std::size_t k = 0; k < inst.neighbors.size(); ++k) {
    const auto [i, j] = inst.neighbors[k];
    e += pairwise_energy(z.values(i), z.values(j), inst.phi_bp[k], p);
  }
  return e;
}

std::pair<Mask, double> brute_force_min(const EnergyInstance& inst) {
  const int n = inst.n();
  const int levels = inst.params.m + 1;
  double combos = 1.0;
  for (int i = 0; i < n; ++i) {
    combos *= levels;
    if (combos > 1e6)
      throw TooLarge("brute force over " + std::to_string(levels) + "^" +
                     std::to_string(n) + " masks exceeds 1e6");
  }

  std::vector<int> levels_vec(n, 0);
  const MaskLabelSpace space{inst.params.m};
  Mask mask{Eigen::VectorXd::Zero(n), inst.grid, inst.params.m};
  Mask best = mask;
  double best_e = total_energy(mask, inst);

  // odometer with index 0 most significant = lexicographic order, so the
  // first strict minimum seen is the lexicographically smallest tie
  for (;;) {
    int pos = n - 1;
    while (pos >= 0 && levels_vec[pos] == levels - 1) {
      levels_vec[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++levels_vec[pos];
    for (int i = 0; i < n; ++i) mask.values(i) = space.label(levels_vec[i]);
    const double e = total_energy(mask, inst);
    if (e < best_e) {
      best_e = e;
      best = mask;
    }
  }
  return {best, best_e};
}

std::vector<std::pair<int, int>> grid_neighbors(int g) {
  std::vector<std::pair<int, int>> out;
  out.reserve(2 * g * (g - 1));
  for (int r = 0; r < g; ++r) {
    for (int c = 0; c < g; ++c) {
      const int i = r * g + c;
      if (c + 1 < g) out.emplace_back(i, i + 1);
      if (r + 1 < g) out.emplace_back(i, i + g);
    }
  }
  return out;
}

EnergyInstance make_energy_instance(const ImageTensor& x0,
                                    const ImageTensor& x1, const Grid& grid,
                                    const Eigen::VectorXd& s0t,
                                    const Eigen::VectorXd& s1t,
                                    const EnergyParams& params) {
  if (!x0.same_shape(x1)) throw ShapeError("input images differ in shape");
  if (s0t.size() != grid.n() || s1t.size() != grid.n())
    throw ShapeError("saliency size does not match grid");

  EnergyInstance inst;
  inst.s0t = s0t;
  inst.s1t = s1t;
  inst.grid = grid;
  inst.params = params;
  inst.neighbors = grid_neighbors(grid.g);
  inst.phi_b.reserve(inst.neighbors.size());
  inst.phi_bp.reserve(inst.neighbors.size());
  for (const auto& [i, j] : inst.neighbors) {
    Eigen::Vector4d raw;
    raw(kPhi00) = dp_boundary(x0, x0, grid, i, j);
    raw(kPhi01) = dp_boundary(x0, x1, grid, i, j);
    raw(kPhi10) = dp_boundary(x1, x0, grid, i, j);
    raw(kPhi11) = dp_boundary(x1, x1, grid, i, j);
    inst.phi_b.push_back(raw);
    inst.phi_bp.push_back(phi_b_prime(raw));
  }
  return inst;
}

}  // namespace regionmix
