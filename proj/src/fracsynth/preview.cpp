#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "fracsynth/pipeline.hpp"

namespace fracsynth {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
  void operator()(std::FILE *f) const { std::fclose(f); }
};

void write_gray_png(const fs::path &path, const std::vector<std::uint8_t> &pixels,
                    std::size_t rows, std::size_t cols) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
  if (!file) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(ErrorCode::Io, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::Io, "libpng failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(cols), static_cast<png_uint_32>(rows), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t y = 0; y < rows; ++y)
    png_write_row(png, const_cast<png_bytep>(pixels.data() + y * cols));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

std::size_t write_preview(const ScalarVideo &video, const fs::path &out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + out_dir.string());
  std::vector<std::uint8_t> pixels(video.frame_size());
  for (std::size_t t = 0; t < video.frames; ++t) {
    const auto frame = video.frame(t);
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const double v = std::isfinite(frame[i]) ? std::clamp(frame[i], 0.0, 1.0) : 0.0;
      pixels[i] = static_cast<std::uint8_t>(std::lround(255.0 * v));
    }
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.png", t);
    write_gray_png(out_dir / name, pixels, video.rows, video.cols);
  }
  return video.frames;
}

}  // namespace fracsynth
