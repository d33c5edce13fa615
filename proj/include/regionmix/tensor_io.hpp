#ifndef REGIONMIX_TENSOR_IO_HPP_
#define REGIONMIX_TENSOR_IO_HPP_

#include <filesystem>

#include "regionmix/tensor.hpp"

namespace regionmix {

// Loads an 8- or 16-bit grayscale or RGB PNG, scaling samples to [0, 1]
// by the type maximum. Alpha channels and palette images are rejected.
ImageTensor load_image(const std::filesystem::path& path);

// Writes an 8-bit PNG (grayscale for 1 channel, RGB for 3). Values are
// clamped to [0, 1] and rounded; round-trip error is at most 1/255.
void save_image(const ImageTensor& t, const std::filesystem::path& path);

// PFT container: magic "PFT1", u32 LE rank, rank u32 LE dims, then
// row-major IEEE-754 binary32 LE payload. Round-trip is bit exact.
FloatTensor read_pft(const std::filesystem::path& path);
void write_pft(const FloatTensor& t, const std::filesystem::path& path);

}  // namespace regionmix

#endif  // REGIONMIX_TENSOR_IO_HPP_
