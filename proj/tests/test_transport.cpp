#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regionmix/bench.hpp"
#include "regionmix/errors.hpp"
#include "regionmix/rng.hpp"
#include "regionmix/transport.hpp"

using namespace regionmix;

TEST_CASE("base cost geometry at g=2") {
  const Eigen::MatrixXd c = build_cost_matrix(2, 1.0);
  for (int i = 0; i < 4; ++i) CHECK(c(i, i) == 0.0);
  CHECK(c(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(c(0, 2) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(c(0, 3) == doctest::Approx(1.0));
  CHECK((c - c.transpose()).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXd scaled = build_cost_matrix(2, 0.8);
  CHECK(scaled(0, 3) == doctest::Approx(0.8));
}

TEST_CASE("discounted cost hand case") {
  Eigen::MatrixXd base(2, 2);
  base << 0.0, 0.5, 0.5, 0.0;
  Eigen::VectorXd s(2), z(2);
  s << 0.6, 0.4;
  z << 0.0, 1.0;
  const Eigen::MatrixXd cp = discounted_cost(base, s, z);
  CHECK(cp(0, 0) == doctest::Approx(0.0));
  CHECK(cp(0, 1) == doctest::Approx(-0.1));
  CHECK(cp(1, 0) == doctest::Approx(0.5));
  CHECK(cp(1, 1) == doctest::Approx(-0.4));

  // zero mask or zero saliency leave the base cost unchanged
  CHECK((discounted_cost(base, s, Eigen::VectorXd::Zero(2)) - base)
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK((discounted_cost(base, Eigen::VectorXd::Zero(2), z) - base)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("masked transport 2x2 hand traces") {
  Eigen::MatrixXd a(2, 2);
  a << 0.0, 0.5, 0.2, -0.3;
  const TransportPlan pa = masked_transport(a);
  CHECK(pa.converged);
  CHECK(pa.iterations == 1);
  CHECK(pa.pi(0, 0) == 1);
  CHECK(pa.pi(1, 1) == 1);
  CHECK(plan_objective(pa, a) == doctest::Approx(-0.3));
  CHECK(plan_objective(pa, a) ==
        doctest::Approx(plan_objective(brute_force_assignment(a), a)));

  // both rows want column 0; row 0 wins, row 1 is pushed to column 1
  Eigen::MatrixXd b(2, 2);
  b << 0.1, 0.9, 0.2, 0.8;
  const TransportPlan pb = masked_transport(b);
  CHECK(pb.converged);
  CHECK(pb.pi(0, 0) == 1);
  CHECK(pb.pi(1, 1) == 1);
  CHECK(plan_objective(pb, b) == doctest::Approx(0.9));
  CHECK(plan_objective(pb, b) ==
        doctest::Approx(plan_objective(brute_force_assignment(b), b)));
}

TEST_CASE("diagonal-dominant cost converges in one iteration") {
  Rng rng(7);
  Eigen::MatrixXd c(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) c(i, j) = i == j ? -1.0 : rng.uniform();
  const TransportPlan p = masked_transport(c);
  CHECK(p.iterations == 1);
  CHECK(p.pi.diagonal().sum() == 5);
}

TEST_CASE("masked transport convergence bound and guarantees") {
  Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    Eigen::VectorXd z;
    const Eigen::MatrixXd cost = random_bench_cost(16, rng, &z);
    const TransportPlan plan = masked_transport(cost, std::nullopt, &z);
    CHECK(plan.converged);
    CHECK(plan.is_permutation());
    CHECK(plan.iterations <= 16 * 15 / 2 + 1);
    // the approximation never beats the exact optimum
    const TransportPlan exact = exact_assignment(cost);
    CHECK(plan_objective(plan, cost) >=
          plan_objective(exact, cost) - 1e-9);
  }
}

TEST_CASE("exact assignment matches the factorial oracle") {
  Rng rng(13);
  for (int n = 2; n <= 8; ++n) {
    for (int t = 0; t < 100; ++t) {
      Eigen::MatrixXd cost(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost(i, j) = rng.uniform(-1.0, 1.0);
      const TransportPlan exact = exact_assignment(cost);
      const TransportPlan brute = brute_force_assignment(cost);
      CHECK(exact.is_permutation());
      CHECK(plan_objective(exact, cost) ==
            doctest::Approx(plan_objective(brute, cost)).epsilon(1e-9));
    }
  }
}

TEST_CASE("identity-optimal matrix gives identity assignment") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(4, 4, 5.0);
  c.diagonal().setConstant(0.0);
  CHECK(exact_assignment(c).pi.diagonal().sum() == 4);
  CHECK(brute_force_assignment(c).pi.diagonal().sum() == 4);
}

TEST_CASE("factorial oracle bounds") {
  Eigen::MatrixXd one(1, 1);
  one << 3.0;
  CHECK(brute_force_assignment(one).pi(0, 0) == 1);
  CHECK_THROWS_AS(brute_force_assignment(Eigen::MatrixXd::Zero(9, 9)),
                  TooLarge);
}

TEST_CASE("apply_plan moves pixel blocks") {
  const Grid grid = Grid::for_image(2, 4, 4);
  ImageTensor img(1, 4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) img.at(0, y, x) = y * 4 + x;

  CHECK(apply_plan(TransportPlan::identity(4), img, grid).data == img.data);

  // swap regions 0 and 3
  TransportPlan swap = TransportPlan::identity(4);
  swap.pi.setZero();
  swap.pi(0, 3) = swap.pi(3, 0) = swap.pi(1, 1) = swap.pi(2, 2) = 1;
  const ImageTensor moved = apply_plan(swap, img, grid);
  CHECK(moved.at(0, 0, 0) == img.at(0, 2, 2));
  CHECK(moved.at(0, 2, 2) == img.at(0, 0, 0));
  CHECK(moved.at(0, 0, 2) == img.at(0, 0, 2));

  // a plan followed by its transpose restores the input
  TransportPlan inverse = swap;
  inverse.pi = swap.pi.transpose().eval();
  CHECK(apply_plan(inverse, moved, grid).data == img.data);

  // pixel multiset is preserved
  Rng rng(17);
  const TransportPlan perm = random_permutation_plan(4, rng);
  ImageTensor shuffled = apply_plan(perm, img, grid);
  std::vector<float> a = img.data, b = shuffled.data;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);

  TransportPlan unconverged;
  unconverged.pi = Eigen::MatrixXi::Zero(4, 4);
  CHECK_THROWS_AS(apply_plan(unconverged, img, grid), NotConverged);
}

TEST_CASE("relative error is within [0,1] on benchmark instances") {
  const auto rows = run_transport_bench({16}, 25, 3);
  CHECK(rows.size() == 25);
  for (const auto& r : rows) {
    CHECK(r.rel_error >= 0.0);
    CHECK(r.rel_error <= 1.0);
    CHECK(r.f_exact <= r.f_alg1 + 1e-9);
    CHECK(r.f_exact <= r.f_random + 1e-9);
  }
  // deterministic given the seed
  const auto again = run_transport_bench({16}, 25, 3);
  for (std::size_t i = 0; i < rows.size(); ++i)
    CHECK(rows[i].f_alg1 == again[i].f_alg1);
}
