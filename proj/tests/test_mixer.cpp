#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "regionmix/errors.hpp"
#include "regionmix/mixer.hpp"

using namespace regionmix;

namespace {

ImageTensor random_image(int c, int h, int w, Rng& rng) {
  ImageTensor img(c, h, w);
  for (float& v : img.data) v = static_cast<float>(rng.uniform());
  return img;
}

// bright blob on a dark background: concentrated proxy saliency
ImageTensor blob_image(int h, int w, double cy, double cx, double radius,
                       Rng& rng) {
  ImageTensor img(3, h, w);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double d = std::hypot(y - cy, x - cx);
        img.at(c, y, x) = d < radius ? 0.9f : 0.05f;
      }
  for (float& v : img.data)
    v = std::clamp(v + static_cast<float>(rng.uniform(-0.02, 0.02)), 0.0f, 1.0f);
  return img;
}

}  // namespace

TEST_CASE("sample_lambda follows Beta(alpha, alpha)") {
  Rng rng(1);
  double sum = 0.0;
  for (int t = 0; t < 100000; ++t) {
    const double l = sample_lambda(1.0, rng);
    CHECK(l > 0.0);
    CHECK(l < 1.0);
    sum += l;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.02));

  double sq = 0.0, mean = 0.0;
  std::vector<double> draws(100000);
  for (double& d : draws) d = sample_lambda(2.0, rng);
  for (double d : draws) mean += d;
  mean /= draws.size();
  for (double d : draws) sq += (d - mean) * (d - mean);
  CHECK(sq / draws.size() == doctest::Approx(0.05).epsilon(0.1));
}

TEST_CASE("prior-dominated endpoints reproduce the inputs") {
  Rng rng(2);
  const ImageTensor x0 = random_image(3, 16, 16, rng);
  const ImageTensor x1 = random_image(3, 16, 16, rng);
  const SaliencyMap s0 = SaliencyMap::Constant(16, 16, 1.0f);
  const SaliencyMap s1 = SaliencyMap::Constant(16, 16, 1.0f);

  MixConfig cfg;
  cfg.params.eta = 1000.0;
  cfg.grid_override = 4;
  for (double lambda : {0.0, 1.0}) {
    cfg.lambda_override = lambda;
    const MixResult res = puzzle_mix(x0, x1, s0, s1, cfg);
    CHECK(res.lambda_effective == lambda);
    const ImageTensor& expect = lambda == 0.0 ? x0 : x1;
    for (std::size_t i = 0; i < expect.data.size(); ++i)
      CHECK(res.mixed.data[i] == doctest::Approx(expect.data[i]).epsilon(1e-6));
  }
}

TEST_CASE("identical inputs with identity plans are a fixed point") {
  Rng rng(3);
  const ImageTensor x = random_image(3, 8, 8, rng);
  const SaliencyMap s = proxy_saliency(x);
  MixConfig cfg;
  cfg.transport_enabled = false;
  cfg.grid_override = 2;
  cfg.lambda_override = 0.5;
  const MixResult res = puzzle_mix(x, x, s, s, cfg);
  for (std::size_t i = 0; i < x.data.size(); ++i)
    CHECK(res.mixed.data[i] == doctest::Approx(x.data[i]).epsilon(1e-6));
}

TEST_CASE("unary-only mix picks the less costly side per region") {
  Rng rng(4);
  const ImageTensor x0 = random_image(1, 8, 8, rng);
  const ImageTensor x1 = random_image(1, 8, 8, rng);
  SaliencyMap s0(8, 8), s1(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      s0(y, x) = static_cast<float>(rng.uniform(0.1, 1.0));
      s1(y, x) = static_cast<float>(rng.uniform(0.1, 1.0));
    }

  MixConfig cfg;
  cfg.params.beta = cfg.params.gamma = cfg.params.eta = 0.0;
  cfg.params.m = 1;  // binary labels
  cfg.transport_enabled = false;
  cfg.grid_override = 4;
  cfg.lambda_override = 0.5;
  const MixResult res = puzzle_mix(x0, x1, s0, s1, cfg);

  const Grid grid = Grid::for_image(4, 8, 8);
  const Eigen::VectorXd d0 = normalize_sum1(downsample_avg(s0, grid)).values;
  const Eigen::VectorXd d1 = normalize_sum1(downsample_avg(s1, grid)).values;
  for (int i = 0; i < 16; ++i)
    CHECK(res.mask.values(i) == (d0(i) < d1(i) ? 1.0 : 0.0));
}

TEST_CASE("lambda_effective equals the mask mean and the mix is convex") {
  Rng rng(5);
  const ImageTensor x0 = random_image(3, 16, 16, rng);
  const ImageTensor x1 = random_image(3, 16, 16, rng);
  MixConfig cfg;
  cfg.seed = 99;
  cfg.transport_enabled = false;
  const MixResult res =
      puzzle_mix(x0, x1, proxy_saliency(x0), proxy_saliency(x1), cfg);
  CHECK(res.lambda_effective == res.mask.values.mean());
  for (std::size_t i = 0; i < x0.data.size(); ++i) {
    CHECK(res.mixed.data[i] >= std::min(x0.data[i], x1.data[i]) - 1e-6f);
    CHECK(res.mixed.data[i] <= std::max(x0.data[i], x1.data[i]) + 1e-6f);
  }
}

TEST_CASE("same seed gives bitwise identical results") {
  Rng rng(6);
  const ImageTensor x0 = blob_image(16, 16, 5, 5, 4, rng);
  const ImageTensor x1 = blob_image(16, 16, 10, 11, 5, rng);
  MixConfig cfg;
  cfg.seed = 1234;
  const SaliencyMap s0 = proxy_saliency(x0), s1 = proxy_saliency(x1);
  const MixResult a = puzzle_mix(x0, x1, s0, s1, cfg);
  const MixResult b = puzzle_mix(x0, x1, s0, s1, cfg);
  CHECK(a.mixed.data == b.mixed.data);
  CHECK(a.mask.values == b.mask.values);
  CHECK(a.lambda_sampled == b.lambda_sampled);
  CHECK(a.plan0.pi == b.plan0.pi);
  CHECK(a.plan1.pi == b.plan1.pi);
}

TEST_CASE("prior responsiveness under uniform saliency") {
  Rng rng(7);
  const ImageTensor x0 = random_image(3, 8, 8, rng);
  const ImageTensor x1 = random_image(3, 8, 8, rng);
  const SaliencyMap uniform = SaliencyMap::Constant(8, 8, 1.0f);
  const MaskLabelSpace space{2};
  for (double lambda : {0.1, 0.5, 0.9}) {
    MixConfig cfg;
    cfg.params.beta = cfg.params.gamma = 0.0;
    cfg.params.eta = 0.5;
    cfg.transport_enabled = false;
    cfg.grid_override = 4;
    cfg.lambda_override = lambda;
    const MixResult res = puzzle_mix(x0, x1, uniform, uniform, cfg);
    // binomial mode for m=2 coincides with the nearest label here
    CHECK((res.mask.values.array() == space.nearest(lambda)).all());
  }
}

TEST_CASE("mix_labels endpoints and soft case") {
  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(6), y1 = Eigen::VectorXd::Zero(6);
  y0(2) = 1.0;
  y1(5) = 1.0;
  CHECK(mix_labels(y0, y1, 0.0) == y0);
  CHECK(mix_labels(y0, y1, 1.0) == y1);
  const Eigen::VectorXd mixed = mix_labels(y0, y1, 0.25);
  CHECK(mixed(2) == doctest::Approx(0.75));
  CHECK(mixed(5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(mix_labels(y0, Eigen::VectorXd::Zero(3), 0.5), ShapeError);
}

TEST_CASE("metric_mixed_saliency constants") {
  const Grid grid = Grid::for_image(2, 4, 4);
  Rng rng(8);
  Eigen::VectorXd raw0(4), raw1(4);
  for (int i = 0; i < 4; ++i) raw0(i) = rng.uniform(0.1, 1.0);
  for (int i = 0; i < 4; ++i) raw1(i) = rng.uniform(0.1, 1.0);
  const DownsampledSaliency s0 = normalize_sum1(raw0);
  const DownsampledSaliency s1 = normalize_sum1(raw1);

  MixResult res;
  res.grid = grid;
  res.plan0 = TransportPlan::identity(4);
  res.plan1 = TransportPlan::identity(4);
  res.mask = Mask{Eigen::VectorXd::Constant(4, 0.5), grid, 2};
  CHECK(metric_mixed_saliency(res, s0, s1) == doctest::Approx(1.0).epsilon(1e-12));
  res.mask.values.setZero();
  CHECK(metric_mixed_saliency(res, s0, s1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("total variation hand values") {
  CHECK(metric_total_variation(ImageTensor(3, 5, 5, 0.33f)) == 0.0);

  ImageTensor ramp(1, 1, 3);
  ramp.data = {0.0f, 0.5f, 1.0f};
  CHECK(metric_total_variation(ramp) == doctest::Approx(0.5));

  ImageTensor checker(1, 4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) checker.at(0, y, x) = (y + x) % 2;
  CHECK(metric_total_variation(checker) == doctest::Approx(1.0));
}

TEST_CASE("baseline masks") {
  const Grid grid = Grid::for_image(4, 8, 8);
  Rng rng(9);
  CHECK(baseline_masks(BaselineKind::kBoxCutmix, 0.0, grid, 2, rng)
            .values.isZero());
  CHECK((baseline_masks(BaselineKind::kBoxCutmix, 1.0, grid, 2, rng)
             .values.array() == 1.0)
            .all());
  const Mask box = baseline_masks(BaselineKind::kBoxCutmix, 0.25, grid, 2, rng);
  CHECK(box.mean() == doctest::Approx(0.25));
  const Mask constant =
      baseline_masks(BaselineKind::kConstantInputMix, 0.4, grid, 2, rng);
  CHECK((constant.values.array() == 0.5).all());
}

TEST_CASE("run_cycles with one cycle equals puzzle_mix") {
  Rng rng(10);
  const ImageTensor x0 = blob_image(16, 16, 4, 4, 3, rng);
  const ImageTensor x1 = blob_image(16, 16, 11, 12, 4, rng);
  const SaliencyMap s0 = proxy_saliency(x0), s1 = proxy_saliency(x1);
  MixConfig cfg;
  cfg.seed = 77;
  cfg.cycles = 1;
  const CycleStats stats = run_cycles(x0, x1, s0, s1, cfg);
  const MixResult direct = puzzle_mix(x0, x1, s0, s1, cfg);
  CHECK(stats.cycles.size() == 1);
  CHECK(stats.cycles[0].mixed.data == direct.mixed.data);
  CHECK(stats.mask_changed_fraction == 0.0);
}

TEST_CASE("second cycle with identity plans is a fixed point") {
  Rng rng(11);
  const ImageTensor x0 = random_image(3, 8, 8, rng);
  const ImageTensor x1 = random_image(3, 8, 8, rng);
  const SaliencyMap s0 = proxy_saliency(x0), s1 = proxy_saliency(x1);
  MixConfig cfg;
  cfg.seed = 5;
  cfg.cycles = 2;
  cfg.transport_enabled = false;  // plans stay identity across cycles
  cfg.grid_override = 2;
  const CycleStats stats = run_cycles(x0, x1, s0, s1, cfg);
  CHECK(stats.mask_changed_fraction == 0.0);
  CHECK(stats.pixel_changed_fraction == 0.0);
}

TEST_CASE("adversarial mix with p=0 or eps=0 equals the clean path") {
  Rng rng(12);
  const ImageTensor x0 = random_image(3, 8, 8, rng);
  const ImageTensor x1 = random_image(3, 8, 8, rng);
  const ImageTensor g0 = random_image(3, 8, 8, rng);
  const ImageTensor g1 = random_image(3, 8, 8, rng);
  MixConfig cfg;
  cfg.seed = 21;

  const MixResult clean =
      puzzle_mix(x0, x1, grad_l2_saliency(g0), grad_l2_saliency(g1), cfg);

  AdvConfig adv;
  adv.p = 0.0;
  const MixResult a = adversarial_mix(x0, x1, g0, g1, cfg, adv);
  CHECK(a.mixed.data == clean.mixed.data);
  CHECK(a.mask.values == clean.mask.values);

  adv.p = 1.0;
  adv.epsilon = 0.0;
  adv.tau = 0.0;
  const MixResult b = adversarial_mix(x0, x1, g0, g1, cfg, adv);
  CHECK(b.mixed.data == clean.mixed.data);
}

TEST_CASE("adversarial clip saturates at tau = 2 eps") {
  // with p=1 and tau twice epsilon every perturbed element with nonzero
  // gradient ends at +/- epsilon after the clip
  Rng rng(13);
  const ImageTensor x0 = random_image(1, 4, 4, rng);
  const ImageTensor x1 = random_image(1, 4, 4, rng);
  ImageTensor g0(1, 4, 4, 0.0f), g1(1, 4, 4, 0.0f);
  for (int i = 0; i < 16; ++i) {
    g0.data[i] = i % 2 ? 1.0f : -1.0f;
    g1.data[i] = i % 3 ? 0.5f : -0.5f;
  }
  AdvConfig adv;
  adv.p = 1.0;
  adv.epsilon = 8.0 / 255.0;
  adv.tau = 2.0 * adv.epsilon;
  adv.seed = 3;

  // replay the draws to recover delta and the final kappa
  Rng replay(adv.seed);
  const bool p0 = replay.bernoulli(1.0);
  std::vector<float> kappa0(16);
  for (float& k : kappa0)
    k = static_cast<float>(replay.uniform(-adv.epsilon, adv.epsilon));
  const bool p1 = replay.bernoulli(1.0);
  std::vector<float> kappa1(16);
  for (float& k : kappa1)
    k = static_cast<float>(replay.uniform(-adv.epsilon, adv.epsilon));
  const double delta = replay.uniform();
  CHECK(p0);
  CHECK(p1);

  MixConfig cfg;
  cfg.seed = 2;
  cfg.lambda_override = 0.0;  // mask all zero under a strong prior
  cfg.params.eta = 1000.0;
  cfg.grid_override = 2;
  const MixResult res = adversarial_mix(x0, x1, g0, g1, cfg, adv);
  REQUIRE((res.mask.values.array() == 0.0).all());

  const float eps = static_cast<float>(adv.epsilon);
  for (int i = 0; i < 16; ++i) {
    const float sg = g0.data[i] > 0 ? 1.0f : -1.0f;
    const float expect = std::clamp(
        x0.data[i] + static_cast<float>(delta) * sg * eps, 0.0f, 1.0f);
    CHECK(res.mixed.data[i] == doctest::Approx(expect).epsilon(1e-6));
  }
}
