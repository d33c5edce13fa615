#include "regionmix/saliency.hpp"

#include <cmath>

#include "regionmix/errors.hpp"

namespace regionmix {

Grid Grid::for_image(int g, int height, int width) {
  if (g < 1) throw ShapeError("grid size must be >= 1");
  if (height % g != 0 || width % g != 0)
    throw ShapeError("image " + std::to_string(height) + "x" +
                     std::to_string(width) + " not divisible by grid " +
                     std::to_string(g));
  return Grid{g, height / g, width / g};
}

SaliencyMap grad_l2_saliency(const ImageTensor& grad) {
  if (grad.channels < 1 || grad.height < 1 || grad.width < 1)
    throw ShapeError("empty gradient tensor");
  SaliencyMap out(grad.height, grad.width);
  for (int y = 0; y < grad.height; ++y) {
    for (int x = 0; x < grad.width; ++x) {
      float acc = 0.0f;
      for (int c = 0; c < grad.channels; ++c) {
        const float v = grad.at(c, y, x);
        acc += v * v;
      }
      out(y, x) = std::sqrt(acc);
    }
  }
  return out;
}

SaliencyMap proxy_saliency(const ImageTensor& image) {
  const int h = image.height, w = image.width;
  // channel mean
  Eigen::MatrixXf mean(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int c = 0; c < image.channels; ++c) acc += image.at(c, y, x);
      mean(y, x) = acc / image.channels;
    }
  }

  auto clamp = [](int v, int lo, int hi) {
    return v < lo ? lo : (v > hi ? hi : v);
  };
  SaliencyMap out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float gx = 0.0f, gy = 0.0f;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const float v = mean(clamp(y + dy, 0, h - 1), clamp(x + dx, 0, w - 1));
          // Sobel kernels
          const int kx = dx * (2 - std::abs(dy));
          const int ky = dy * (2 - std::abs(dx));
          gx += kx * v;
          gy += ky * v;
        }
      }
      out(y, x) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

Eigen::VectorXd downsample_avg(const SaliencyMap& map, const Grid& grid) {
  const int h = static_cast<int>(map.rows());
  const int w = static_cast<int>(map.cols());
  if (h % grid.g != 0 || w % grid.g != 0 || h / grid.g != grid.region_h ||
      w / grid.g != grid.region_w)
    throw ShapeError("map dimensions do not match grid");

  Eigen::VectorXd out(grid.n());
  for (int r = 0; r < grid.g; ++r) {
    for (int c = 0; c < grid.g; ++c) {
      out(grid.region_index(r, c)) =
          map.block(r * grid.region_h, c * grid.region_w, grid.region_h,
                    grid.region_w)
              .cast<double>()
              .mean();
    }
  }
  return out;
}

DownsampledSaliency normalize_sum1(const Eigen::VectorXd& v) {
  if ((v.array() < 0.0).any())
    throw DomainError("saliency vector has negative entries");
  const double total = v.sum();
  DownsampledSaliency out;
  if (total <= 0.0) {
    out.values = Eigen::VectorXd::Constant(v.size(), 1.0 / v.size());
    out.degenerate = true;
  } else {
    out.values = v / total;
  }
  return out;
}

}  // namespace regionmix
