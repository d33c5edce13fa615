#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "regionmix/errors.hpp"
#include "regionmix/rng.hpp"
#include "regionmix/tensor_io.hpp"

using namespace regionmix;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("regionmix_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("png round-trips the extremes exactly") {
  TempDir tmp;
  for (float fill : {0.0f, 1.0f}) {
    ImageTensor t(3, 2, 2, fill);
    const fs::path p = tmp.path / "extreme.png";
    save_image(t, p);
    const ImageTensor back = load_image(p);
    REQUIRE(back.same_shape(t));
    for (float v : back.data) CHECK(v == fill);
  }
}

TEST_CASE("mid-gray 128/255 loads as 128/255") {
  TempDir tmp;
  ImageTensor t(1, 2, 2, 128.0f / 255.0f);
  const fs::path p = tmp.path / "gray.png";
  save_image(t, p);
  const ImageTensor back = load_image(p);
  // float storage: compare at single precision
  for (float v : back.data)
    CHECK(v == doctest::Approx(128.0 / 255.0).epsilon(1e-6));
}

TEST_CASE("png round-trip error bounded by quantization") {
  TempDir tmp;
  Rng rng(7);
  ImageTensor t(3, 8, 8);
  for (float& v : t.data) v = static_cast<float>(rng.uniform());
  const fs::path p = tmp.path / "rand.png";
  save_image(t, p);
  const ImageTensor back = load_image(p);
  for (std::size_t i = 0; i < t.data.size(); ++i)
    CHECK(std::abs(back.data[i] - t.data[i]) <= 1.0f / 255.0f + 1e-7f);
}

TEST_CASE("missing or non-png files are rejected") {
  TempDir tmp;
  CHECK_THROWS_AS(load_image(tmp.path / "nope.png"), IoError);
  const fs::path bad = tmp.path / "bad.png";
  std::ofstream(bad) << "not a png at all";
  CHECK_THROWS_AS(load_image(bad), FormatError);
}

TEST_CASE("pft round-trip is bit exact") {
  TempDir tmp;
  FloatTensor t;
  t.shape = {2, 3};
  t.data = {0, 0, 0, 0, 0, 0};
  const fs::path p = tmp.path / "zeros.pft";
  write_pft(t, p);
  FloatTensor back = read_pft(p);
  CHECK(back.shape == t.shape);
  CHECK(back.data == t.data);

  t.shape = {1};
  t.data = {7.5f};
  write_pft(t, p);
  back = read_pft(p);
  CHECK(back.data[0] == 7.5f);

  Rng rng(3);
  t.shape = {3, 4, 5};
  t.data.resize(60);
  for (float& v : t.data) v = static_cast<float>(rng.uniform(-10.0, 10.0));
  write_pft(t, p);
  back = read_pft(p);
  CHECK(std::memcmp(back.data.data(), t.data.data(), 4 * 60) == 0);
}

TEST_CASE("pft rejects bad magic and truncation") {
  TempDir tmp;
  const fs::path p = tmp.path / "bad.pft";
  std::ofstream(p, std::ios::binary) << "XXXX\x01\x00\x00\x00";
  CHECK_THROWS_AS(read_pft(p), FormatError);

  FloatTensor t;
  t.shape = {4};
  t.data = {1, 2, 3, 4};
  write_pft(t, p);
  // chop the payload
  fs::resize_file(p, fs::file_size(p) - 3);
  CHECK_THROWS_AS(read_pft(p), FormatError);
}
