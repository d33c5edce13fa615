#ifndef REGIONMIX_BENCH_HPP_
#define REGIONMIX_BENCH_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "regionmix/rng.hpp"

namespace regionmix {

struct BenchRow {
  int n = 0;
  int trial = 0;
  std::int64_t time_alg1_ns = 0;
  std::int64_t time_exact_ns = 0;
  double f_alg1 = 0.0;
  double f_exact = 0.0;
  double f_random = 0.0;
  double rel_error = 0.0;  // e_a / (e_a + e_r); 0 when both errors vanish
};

// Random benchmark instance: C' = C - s z^T with the geometric base cost
// at xi = 1, s uniform in [0, 1) per entry and z Bernoulli(1/2).
Eigen::MatrixXd random_bench_cost(int n, Rng& rng, Eigen::VectorXd* z_out = nullptr);

// Runs greedy, exact and random-permutation solvers on `trials` seeded
// instances per size. Sizes must be perfect squares.
std::vector<BenchRow> run_transport_bench(const std::vector<int>& sizes,
                                          int trials, std::uint64_t seed);

inline const char* bench_csv_header() {
  return "n,trial,time_alg1_ns,time_exact_ns,f_alg1,f_exact,f_random,rel_error";
}

}  // namespace regionmix

#endif  // REGIONMIX_BENCH_HPP_
