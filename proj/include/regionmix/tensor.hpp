#ifndef REGIONMIX_TENSOR_HPP_
#define REGIONMIX_TENSOR_HPP_

#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "regionmix/errors.hpp"

namespace regionmix {

// A channels-first image with values in [0, 1], row-major within each
// channel plane.
struct ImageTensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;  // size = channels * height * width

  ImageTensor() = default;
  ImageTensor(int c, int h, int w, float fill = 0.0f)
      : channels(c), height(h), width(w),
        data(static_cast<std::size_t>(c) * h * w, fill) {}

  std::size_t size() const { return data.size(); }

  float& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  float at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }

  bool same_shape(const ImageTensor& other) const {
    return channels == other.channels && height == other.height &&
           width == other.width;
  }
};

// A generic finite float tensor; carrier for saliency maps, gradient maps
// and anything else crossing the file boundary.
struct FloatTensor {
  std::vector<std::uint32_t> shape;
  std::vector<float> data;  // size = product(shape)

  std::size_t element_count() const {
    return std::accumulate(shape.begin(), shape.end(),
                           static_cast<std::size_t>(1),
                           std::multiplies<std::size_t>());
  }
};

// H x W single-channel map used for saliency at full resolution.
using SaliencyMap = Eigen::MatrixXf;

inline FloatTensor to_float_tensor(const ImageTensor& img) {
  FloatTensor t;
  t.shape = {static_cast<std::uint32_t>(img.channels),
             static_cast<std::uint32_t>(img.height),
             static_cast<std::uint32_t>(img.width)};
  t.data = img.data;
  return t;
}

// Accepts [H, W] or [C, H, W] tensors; [C, H, W] input must match the
// expected channel count when one is given.
ImageTensor image_from_tensor(const FloatTensor& t);

}  // namespace regionmix

#endif  // REGIONMIX_TENSOR_HPP_
