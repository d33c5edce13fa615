#ifndef REGIONMIX_SALIENCY_HPP_
#define REGIONMIX_SALIENCY_HPP_

#include <Eigen/Dense>

#include "regionmix/tensor.hpp"

namespace regionmix {

// Square region grid over an image. n = g * g regions, row-major order.
struct Grid {
  int g = 0;
  int region_h = 0;
  int region_w = 0;

  // Throws ShapeError if the image dimensions are not divisible by g.
  static Grid for_image(int g, int height, int width);

  int n() const { return g * g; }
  int region_row(int i) const { return i / g; }
  int region_col(int i) const { return i % g; }
  int region_index(int row, int col) const { return row * g + col; }
};

// Region-level saliency: nonnegative, sums to 1. `degenerate` is set when
// the source map was identically zero and the uniform fallback was used.
struct DownsampledSaliency {
  Eigen::VectorXd values;
  bool degenerate = false;

  int n() const { return static_cast<int>(values.size()); }
};

// Per-pixel l2 norm of the gradient across channels.
SaliencyMap grad_l2_saliency(const ImageTensor& grad);

// Sobel gradient magnitude of the channel-mean image with replicated
// borders. A stand-in for network gradients; not a saliency model.
SaliencyMap proxy_saliency(const ImageTensor& image);

// Average pooling over the grid; entry i is the mean of region i.
Eigen::VectorXd downsample_avg(const SaliencyMap& map, const Grid& grid);

// Scales a nonnegative vector to sum 1. An all-zero input falls back to
// the uniform vector with the degenerate flag set.
DownsampledSaliency normalize_sum1(const Eigen::VectorXd& v);

}  // namespace regionmix

#endif  // REGIONMIX_SALIENCY_HPP_
