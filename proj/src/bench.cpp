#include "regionmix/bench.hpp"

#include <chrono>
#include <cmath>

#include "regionmix/errors.hpp"
#include "regionmix/transport.hpp"

namespace regionmix {

Eigen::MatrixXd random_bench_cost(int n, Rng& rng, Eigen::VectorXd* z_out) {
  const int g = static_cast<int>(std::lround(std::sqrt(n)));
  if (g * g != n) throw DomainError("benchmark sizes must be perfect squares");
  const Eigen::MatrixXd base = build_cost_matrix(g, 1.0);
  Eigen::VectorXd s(n), z(n);
  for (int i = 0; i < n; ++i) s(i) = rng.uniform();
  for (int i = 0; i < n; ++i) z(i) = rng.bernoulli(0.5) ? 1.0 : 0.0;
  if (z_out) *z_out = z;
  return discounted_cost(base, s, z);
}

std::vector<BenchRow> run_transport_bench(const std::vector<int>& sizes,
                                          int trials, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  rows.reserve(sizes.size() * trials);

  std::uint64_t instance = 0;
  for (int n : sizes) {
    for (int trial = 0; trial < trials; ++trial, ++instance) {
      Rng rng = Rng::for_item(seed, instance);
      Eigen::VectorXd z;
      const Eigen::MatrixXd cost = random_bench_cost(n, rng, &z);

      BenchRow row;
      row.n = n;
      row.trial = trial;

      auto t0 = clock::now();
      const TransportPlan greedy = masked_transport(cost, std::nullopt, &z);
      auto t1 = clock::now();
      const TransportPlan exact = exact_assignment(cost);
      auto t2 = clock::now();
      const TransportPlan random = random_permutation_plan(n, rng);

      row.time_alg1_ns =
          std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
      row.time_exact_ns =
          std::chrono::duration_cast<std::chrono::nanoseconds>(t2 - t1).count();
      row.f_alg1 = plan_objective(greedy, cost);
      row.f_exact = plan_objective(exact, cost);
      row.f_random = plan_objective(random, cost);
      const double e_a = row.f_alg1 - row.f_exact;
      const double e_r = row.f_random - row.f_exact;
      row.rel_error = (e_a + e_r) > 0.0 ? e_a / (e_a + e_r) : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace regionmix
