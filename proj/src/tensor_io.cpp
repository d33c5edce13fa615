#include "regionmix/tensor_io.hpp"

#include <png.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "regionmix/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "PFT serialization assumes a little-endian host");

namespace regionmix {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  throw FormatError(std::string("png: ") + msg);
}

void png_warn_fn(png_structp, png_const_charp) {}

// Writes to <path>.tmp then renames, so failures never leave a partial
// file at the destination.
class AtomicFile {
 public:
  explicit AtomicFile(const std::filesystem::path& path)
      : path_(path), tmp_(path.string() + ".tmp") {}
  ~AtomicFile() {
    if (!committed_) {
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }
  const std::filesystem::path& tmp() const { return tmp_; }
  void commit() {
    std::error_code ec;
    std::filesystem::rename(tmp_, path_, ec);
    if (ec) throw IoError("cannot rename " + tmp_.string() + ": " + ec.message());
    committed_ = true;
  }

 private:
  std::filesystem::path path_, tmp_;
  bool committed_ = false;
};

}  // namespace

ImageTensor load_image(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path.string());

  unsigned char sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw FormatError(path.string() + " is not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           png_error_fn, png_warn_fn);
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp p;
    png_infop i;
    ~Guard() { png_destroy_read_struct(&p, &i, nullptr); }
  } guard{png, info};

  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));

  if (bit_depth != 8 && bit_depth != 16)
    throw FormatError("unsupported bit depth " + std::to_string(bit_depth));
  int channels;
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY:
      channels = 1;
      break;
    case PNG_COLOR_TYPE_RGB:
      channels = 3;
      break;
    default:
      throw FormatError("unsupported PNG color type (alpha/palette rejected)");
  }

  png_read_update_info(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  std::vector<unsigned char> rows(row_bytes * height);
  std::vector<png_bytep> row_ptrs(height);
  for (int y = 0; y < height; ++y) row_ptrs[y] = rows.data() + y * row_bytes;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);

  ImageTensor out(channels, height, width);
  const float scale = bit_depth == 8 ? 1.0f / 255.0f : 1.0f / 65535.0f;
  for (int y = 0; y < height; ++y) {
    const unsigned char* row = row_ptrs[y];
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        unsigned v;
        if (bit_depth == 8) {
          v = row[x * channels + c];
        } else {
          // PNG 16-bit samples are big-endian
          const unsigned char* p = row + 2 * (x * channels + c);
          v = (static_cast<unsigned>(p[0]) << 8) | p[1];
        }
        out.at(c, y, x) = static_cast<float>(v) * scale;
      }
    }
  }
  return out;
}

void save_image(const ImageTensor& t, const std::filesystem::path& path) {
  if (t.channels != 1 && t.channels != 3)
    throw FormatError("save_image supports 1 or 3 channels, got " +
                      std::to_string(t.channels));

  AtomicFile atomic(path);
  FilePtr fp(std::fopen(atomic.tmp().string().c_str(), "wb"));
  if (!fp) throw IoError("cannot write " + atomic.tmp().string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            png_error_fn, png_warn_fn);
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp p;
    png_infop i;
    ~Guard() { png_destroy_write_struct(&p, &i); }
  } guard{png, info};

  png_init_io(png, fp.get());
  png_set_IHDR(png, info, t.width, t.height, 8,
               t.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<unsigned char> row(static_cast<std::size_t>(t.width) * t.channels);
  for (int y = 0; y < t.height; ++y) {
    for (int x = 0; x < t.width; ++x) {
      for (int c = 0; c < t.channels; ++c) {
        float v = t.at(c, y, x);
        v = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
        row[x * t.channels + c] =
            static_cast<unsigned char>(v * 255.0f + 0.5f);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  fp.reset();
  atomic.commit();
}

FloatTensor read_pft(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "PFT1", 4) != 0)
    throw FormatError(path.string() + ": bad PFT magic");

  std::uint32_t rank;
  if (!in.read(reinterpret_cast<char*>(&rank), 4))
    throw FormatError(path.string() + ": truncated header");
  if (rank > 4) throw FormatError("PFT rank > 4 unsupported");

  FloatTensor t;
  t.shape.resize(rank);
  if (rank &&
      !in.read(reinterpret_cast<char*>(t.shape.data()), 4 * rank))
    throw FormatError(path.string() + ": truncated shape");

  const std::size_t count = t.element_count();
  t.data.resize(count);
  if (count &&
      !in.read(reinterpret_cast<char*>(t.data.data()), 4 * count))
    throw FormatError(path.string() + ": truncated payload");

  char extra;
  if (in.read(&extra, 1))
    throw FormatError(path.string() + ": trailing bytes after payload");
  return t;
}

void write_pft(const FloatTensor& t, const std::filesystem::path& path) {
  if (t.data.size() != t.element_count())
    throw FormatError("PFT data length does not match shape");
  if (t.shape.size() > 4) throw FormatError("PFT rank > 4 unsupported");

  AtomicFile atomic(path);
  {
    std::ofstream out(atomic.tmp(), std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + atomic.tmp().string());
    out.write("PFT1", 4);
    const std::uint32_t rank = static_cast<std::uint32_t>(t.shape.size());
    out.write(reinterpret_cast<const char*>(&rank), 4);
    out.write(reinterpret_cast<const char*>(t.shape.data()), 4 * rank);
    out.write(reinterpret_cast<const char*>(t.data.data()), 4 * t.data.size());
    if (!out) throw IoError("write failed for " + atomic.tmp().string());
  }
  atomic.commit();
}

ImageTensor image_from_tensor(const FloatTensor& t) {
  if (t.shape.size() == 2) {
    ImageTensor img(1, static_cast<int>(t.shape[0]),
                    static_cast<int>(t.shape[1]));
    img.data = t.data;
    return img;
  }
  if (t.shape.size() == 3) {
    ImageTensor img(static_cast<int>(t.shape[0]), static_cast<int>(t.shape[1]),
                    static_cast<int>(t.shape[2]));
    img.data = t.data;
    return img;
  }
  throw ShapeError("tensor rank " + std::to_string(t.shape.size()) +
                   " is not an image");
}

}  // namespace regionmix
