#include "regionmix/mixer.hpp"

#include <algorithm>
#include <cmath>

#include "regionmix/errors.hpp"

namespace regionmix {
namespace {

Mask initial_mask(const Grid& grid, const EnergyParams& params) {
  const MaskLabelSpace space{params.m};
  return Mask{Eigen::VectorXd::Constant(grid.n(), space.nearest(params.lambda)),
              grid, params.m};
}

ImageTensor clip01(ImageTensor img) {
  for (float& v : img.data) v = std::clamp(v, 0.0f, 1.0f);
  return img;
}

// One mask step followed by one plan step; the instance is built from the
// transported images and saliencies of the incoming plans.
MixResult optimize_once(const ImageTensor& x0, const ImageTensor& x1,
                        const DownsampledSaliency& s0,
                        const DownsampledSaliency& s1, const Grid& grid,
                        const MixConfig& cfg, const TransportPlan& plan0_in,
                        const TransportPlan& plan1_in, double lambda) {
  EnergyParams params = cfg.grid_adapted_params
                            ? params_for_grid(cfg.params, grid.n())
                            : cfg.params;
  params.lambda = lambda;

  const ImageTensor x0t = apply_plan(plan0_in, x0, grid);
  const ImageTensor x1t = apply_plan(plan1_in, x1, grid);
  const Eigen::VectorXd s0t = apply_plan(plan0_in, s0.values);
  const Eigen::VectorXd s1t = apply_plan(plan1_in, s1.values);

  const EnergyInstance inst =
      make_energy_instance(x0t, x1t, grid, s0t, s1t, params);
  const Mask init = initial_mask(grid, params);

  MixResult res;
  res.energy_initial = total_energy(init, inst);
  SwapResult swap = alpha_beta_swap(inst, init, cfg.max_sweeps);
  res.mask = swap.mask;
  res.energy_final = swap.energy;
  res.energy_trace = std::move(swap.energy_trace);
  res.swap_sweeps = swap.sweeps;
  res.grid = grid;
  res.lambda_sampled = lambda;
  res.lambda_effective = res.mask.mean();
  res.saliency_degenerate = s0.degenerate || s1.degenerate;

  if (cfg.transport_enabled) {
    const Eigen::MatrixXd base = build_cost_matrix(grid.g, params.xi);
    const Eigen::VectorXd z = res.mask.values;
    const Eigen::VectorXd zc = Eigen::VectorXd::Ones(z.size()) - z;
    // the x0 plan chases the mask complement, the x1 plan the mask itself
    res.plan0 = masked_transport(discounted_cost(base, s0.values, zc),
                                 std::nullopt, &zc);
    res.plan1 = masked_transport(discounted_cost(base, s1.values, z),
                                 std::nullopt, &z);
  } else {
    res.plan0 = TransportPlan::identity(grid.n());
    res.plan1 = TransportPlan::identity(grid.n());
  }

  res.mixed = compose_mix(x0, x1, res.mask, res.plan0, res.plan1, grid);
  res.metrics.mixed_saliency_mass = metric_mixed_saliency(res, s0, s1);
  res.metrics.total_variation = metric_total_variation(res.mixed);
  return res;
}

struct PreparedInputs {
  Grid grid;
  DownsampledSaliency s0, s1;
  double lambda = 0.5;
};

PreparedInputs prepare(const ImageTensor& x0, const ImageTensor& x1,
                       const SaliencyMap& s0_full, const SaliencyMap& s1_full,
                       const MixConfig& cfg, Rng& rng) {
  if (!x0.same_shape(x1)) throw ShapeError("inputs differ in shape");
  if (s0_full.rows() != x0.height || s0_full.cols() != x0.width ||
      s1_full.rows() != x1.height || s1_full.cols() != x1.width)
    throw ShapeError("saliency maps do not match input shape");
  if (cfg.grid_choices.empty()) throw DomainError("grid_choices is empty");
  if (cfg.alpha <= 0.0) throw DomainError("alpha must be positive");

  PreparedInputs prep;
  const int g = cfg.grid_override.value_or(static_cast<int>(
      cfg.grid_choices[rng.uniform_int(cfg.grid_choices.size())]));
  prep.grid = Grid::for_image(g, x0.height, x0.width);
  prep.lambda = cfg.lambda_override.value_or(sample_lambda(cfg.alpha, rng));
  prep.s0 = normalize_sum1(downsample_avg(s0_full, prep.grid));
  prep.s1 = normalize_sum1(downsample_avg(s1_full, prep.grid));
  return prep;
}

}  // namespace

EnergyParams params_for_grid(EnergyParams base, int n) {
  if (n < 1) throw DomainError("region count must be positive");
  base.beta /= n;
  base.gamma /= n;
  base.eta /= n;
  return base;
}

double sample_lambda(double alpha, Rng& rng) {
  if (alpha <= 0.0) throw DomainError("alpha must be positive");
  return rng.beta(alpha, alpha);
}

MixResult puzzle_mix(const ImageTensor& x0, const ImageTensor& x1,
                     const SaliencyMap& s0_full, const SaliencyMap& s1_full,
                     const MixConfig& cfg) {
  Rng rng(cfg.seed);
  const PreparedInputs prep = prepare(x0, x1, s0_full, s1_full, cfg, rng);
  const TransportPlan id = TransportPlan::identity(prep.grid.n());
  return optimize_once(x0, x1, prep.s0, prep.s1, prep.grid, cfg, id, id,
                       prep.lambda);
}

CycleStats run_cycles(const ImageTensor& x0, const ImageTensor& x1,
                      const SaliencyMap& s0_full, const SaliencyMap& s1_full,
                      const MixConfig& cfg) {
  if (cfg.cycles < 1) throw DomainError("cycles must be >= 1");
  Rng rng(cfg.seed);
  const PreparedInputs prep = prepare(x0, x1, s0_full, s1_full, cfg, rng);

  CycleStats stats;
  TransportPlan plan0 = TransportPlan::identity(prep.grid.n());
  TransportPlan plan1 = TransportPlan::identity(prep.grid.n());
  for (int k = 0; k < cfg.cycles; ++k) {
    MixResult r = optimize_once(x0, x1, prep.s0, prep.s1, prep.grid, cfg,
                                plan0, plan1, prep.lambda);
    plan0 = r.plan0;
    plan1 = r.plan1;
    stats.cycles.push_back(std::move(r));
  }

  const MixResult& first = stats.cycles.front();
  const MixResult& last = stats.cycles.back();
  int mask_diff = 0;
  for (int i = 0; i < first.mask.n(); ++i)
    if (first.mask.values(i) != last.mask.values(i)) ++mask_diff;
  stats.mask_changed_fraction = static_cast<double>(mask_diff) / first.mask.n();

  std::size_t pixel_diff = 0;
  for (std::size_t i = 0; i < first.mixed.data.size(); ++i)
    if (first.mixed.data[i] != last.mixed.data[i]) ++pixel_diff;
  stats.pixel_changed_fraction =
      static_cast<double>(pixel_diff) / first.mixed.data.size();
  return stats;
}

Eigen::VectorXd mix_labels(const Eigen::VectorXd& y0, const Eigen::VectorXd& y1,
                           double lambda_effective) {
  if (y0.size() != y1.size()) throw ShapeError("label dimension mismatch");
  return (1.0 - lambda_effective) * y0 + lambda_effective * y1;
}

MixResult adversarial_mix(const ImageTensor& x0, const ImageTensor& x1,
                          const ImageTensor& grad0, const ImageTensor& grad1,
                          const MixConfig& cfg, const AdvConfig& adv) {
  if (!x0.same_shape(x1)) throw ShapeError("inputs differ in shape");
  if (!grad0.same_shape(x0) || !grad1.same_shape(x1))
    throw ShapeError("gradients do not match input shape");

  Rng adv_rng(adv.seed);
  const ImageTensor clean[2] = {x0, x1};
  ImageTensor inputs[2] = {x0, x1};
  const ImageTensor* grads[2] = {&grad0, &grad1};
  bool perturbed[2];
  std::vector<float> kappa[2];

  for (int i = 0; i < 2; ++i) {
    perturbed[i] = adv_rng.bernoulli(adv.p);
    if (perturbed[i]) {
      kappa[i].resize(inputs[i].data.size());
      for (std::size_t e = 0; e < kappa[i].size(); ++e) {
        kappa[i][e] =
            static_cast<float>(adv_rng.uniform(-adv.epsilon, adv.epsilon));
        inputs[i].data[e] += kappa[i][e];
      }
    }
  }

  const SaliencyMap s0 = grad_l2_saliency(grad0);
  const SaliencyMap s1 = grad_l2_saliency(grad1);
  MixResult res = puzzle_mix(inputs[0], inputs[1], s0, s1, cfg);

  const double delta = adv_rng.uniform();
  bool any = false;
  for (int i = 0; i < 2; ++i) {
    if (!perturbed[i]) continue;
    any = true;
    const float eps = static_cast<float>(adv.epsilon);
    for (std::size_t e = 0; e < kappa[i].size(); ++e) {
      const float g = grads[i]->data[e];
      const float sg = g > 0.0f ? 1.0f : (g < 0.0f ? -1.0f : 0.0f);
      float k = kappa[i][e] + static_cast<float>(adv.tau) * sg;
      k = std::clamp(k, -eps, eps);
      inputs[i].data[e] =
          clean[i].data[e] + static_cast<float>(delta) * k;
    }
    inputs[i] = clip01(std::move(inputs[i]));
  }

  if (any) {
    res.mixed = compose_mix(inputs[0], inputs[1], res.mask, res.plan0,
                            res.plan1, res.grid);
    res.metrics.total_variation = metric_total_variation(res.mixed);
  }
  return res;
}

double metric_mixed_saliency(const MixResult& result,
                             const DownsampledSaliency& s0,
                             const DownsampledSaliency& s1) {
  if (s0.n() != result.mask.n() || s1.n() != result.mask.n())
    throw ShapeError("saliency/mask size mismatch");
  const Eigen::VectorXd s0n = normalize_sum1(s0.values).values;
  const Eigen::VectorXd s1n = normalize_sum1(s1.values).values;
  const Eigen::VectorXd s0t = apply_plan(result.plan0, s0n);
  const Eigen::VectorXd s1t = apply_plan(result.plan1, s1n);
  const Eigen::VectorXd z = result.mask.values;
  return ((Eigen::VectorXd::Ones(z.size()) - z).cwiseProduct(s0t) +
          z.cwiseProduct(s1t))
      .cwiseAbs()
      .sum();
}

double metric_total_variation(const ImageTensor& img) {
  double acc = 0.0;
  for (int c = 0; c < img.channels; ++c) {
    double sum = 0.0;
    long count = 0;
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x + 1 < img.width; ++x, ++count)
        sum += std::abs(img.at(c, y, x + 1) - img.at(c, y, x));
    for (int y = 0; y + 1 < img.height; ++y)
      for (int x = 0; x < img.width; ++x, ++count)
        sum += std::abs(img.at(c, y + 1, x) - img.at(c, y, x));
    acc += count > 0 ? sum / count : 0.0;
  }
  return acc / img.channels;
}

Mask baseline_masks(BaselineKind kind, double lambda, const Grid& grid, int m,
                    Rng& rng) {
  if (lambda < 0.0 || lambda > 1.0) throw DomainError("lambda outside [0,1]");
  const MaskLabelSpace space{m};
  Mask mask{Eigen::VectorXd::Zero(grid.n()), grid, m};
  if (kind == BaselineKind::kConstantInputMix) {
    mask.values.setConstant(space.nearest(lambda));
    return mask;
  }

  // box: square patch of side round(g * sqrt(lambda)) at a random
  // position, all-one inside
  const int side = static_cast<int>(
      std::lround(grid.g * std::sqrt(lambda)));
  if (side > 0) {
    const int max_off = grid.g - side;
    const int r0 = static_cast<int>(rng.uniform_int(max_off + 1));
    const int c0 = static_cast<int>(rng.uniform_int(max_off + 1));
    for (int r = r0; r < r0 + side; ++r)
      for (int c = c0; c < c0 + side; ++c)
        mask.values(grid.region_index(r, c)) = 1.0;
  }
  return mask;
}

ImageTensor compose_mix(const ImageTensor& x0, const ImageTensor& x1,
                        const Mask& mask, const TransportPlan& plan0,
                        const TransportPlan& plan1, const Grid& grid) {
  const ImageTensor x0t = apply_plan(plan0, x0, grid);
  const ImageTensor x1t = apply_plan(plan1, x1, grid);
  ImageTensor out(x0.channels, x0.height, x0.width);
  for (int c = 0; c < out.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      const int r = y / grid.region_h;
      for (int x = 0; x < out.width; ++x) {
        const float z = static_cast<float>(
            mask.values(grid.region_index(r, x / grid.region_w)));
        out.at(c, y, x) =
            (1.0f - z) * x0t.at(c, y, x) + z * x1t.at(c, y, x);
      }
    }
  }
  return clip01(std::move(out));
}

}  // namespace regionmix
