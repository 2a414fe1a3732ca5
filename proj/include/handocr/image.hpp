// Copyright 2026 The handocr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "handocr/error.hpp"

namespace handocr {

// Binarized page raster. Raster access is top-left origin, row-major; ink is
// dark-on-light. A PGM page also keeps its gray levels for re-thresholding.
class PageImage {
 public:
  PageImage() = default;
  PageImage(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw Error("page dimensions must be positive");
    ink_.assign(static_cast<std::size_t>(width) * height, 0);
  }

  static PageImage from_gray(int width, int height, std::vector<std::uint8_t> gray) {
    PageImage page(width, height);
    if (gray.size() != page.ink_.size()) throw Error("gray buffer does not match dimensions");
    page.gray_ = std::move(gray);
    return page;
  }

  int width() const { return width_; }
  int height() const { return height_; }

  bool ink(int x, int y) const { return ink_[index(x, y)] != 0; }
  void set_ink(int x, int y, bool value) { ink_[index(x, y)] = value ? 1 : 0; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  std::span<const std::uint8_t> ink_mask() const { return ink_; }
  std::size_t ink_count() const {
    std::size_t n = 0;
    for (auto v : ink_) n += v;
    return n;
  }

  bool has_gray() const { return gray_.has_value(); }
  std::uint8_t gray(int x, int y) const { return (*gray_)[index(x, y)]; }
  std::span<const std::uint8_t> gray_values() const {
    if (!gray_) throw Error("page has no gray channel");
    return *gray_;
  }

  const std::string& source_path() const { return source_path_; }
  void set_source_path(std::string path) { source_path_ = std::move(path); }

  friend bool operator==(const PageImage& a, const PageImage& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.ink_ == b.ink_ && a.gray_ == b.gray_;
  }

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> ink_;
  std::optional<std::vector<std::uint8_t>> gray_;
  std::string source_path_;
};

namespace detail {

class PnmReader {
 public:
  explicit PnmReader(std::string_view data) : data_(data) {}

  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
        ++pos_;
      } else {
        return;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space_and_comments();
    if (pos_ >= data_.size() || data_[pos_] < '0' || data_[pos_] > '9')
      throw Error(std::string("malformed header: expected ") + what);
    long v = 0;
    while (pos_ < data_.size() && data_[pos_] >= '0' && data_[pos_] <= '9') {
      v = v * 10 + (data_[pos_] - '0');
      if (v > 1'000'000'000) throw Error(std::string("malformed header: ") + what + " too large");
      ++pos_;
    }
    return v;
  }

  // Binary rasters start after exactly one whitespace byte following the header.
  void skip_single_whitespace() {
    if (pos_ >= data_.size()) throw Error("truncated raster data");
    ++pos_;
  }

  std::string_view rest() const { return data_.substr(pos_); }
  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  bool at_end() const { return pos_ >= data_.size(); }
  char peek() const { return data_[pos_]; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Decodes a PBM (P1/P4) or PGM (P2/P5, maxval 255) image held in memory.
inline PageImage decode_netpbm(std::string_view data, std::string source_path = {}) {
  if (data.size() < 2 || data[0] != 'P') throw Error("unsupported magic number");
  const char kind = data[1];
  if (kind != '1' && kind != '2' && kind != '4' && kind != '5')
    throw Error(std::string("unsupported magic number P") + kind);
  detail::PnmReader reader(data);
  reader.advance(2);
  const long width = reader.read_uint("width");
  const long height = reader.read_uint("height");
  if (width <= 0 || height <= 0) throw Error("dimensions must be positive");
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (count > (1u << 28)) throw Error("image too large");

  if (kind == '1' || kind == '4') {
    PageImage page(static_cast<int>(width), static_cast<int>(height));
    if (kind == '1') {
      for (long y = 0; y < height; ++y) {
        for (long x = 0; x < width; ++x) {
          reader.skip_space_and_comments();
          if (reader.at_end()) throw Error("truncated raster data");
          const char c = reader.peek();
          if (c != '0' && c != '1') throw Error("invalid P1 pixel value");
          page.set_ink(static_cast<int>(x), static_cast<int>(y), c == '1');
          reader.advance(1);
        }
      }
    } else {
      reader.skip_single_whitespace();
      const std::size_t row_bytes = (static_cast<std::size_t>(width) + 7) / 8;
      const auto raster = reader.rest();
      if (raster.size() < row_bytes * static_cast<std::size_t>(height)) throw Error("truncated raster data");
      for (long y = 0; y < height; ++y) {
        for (long x = 0; x < width; ++x) {
          const auto byte = static_cast<unsigned char>(raster[y * row_bytes + x / 8]);
          page.set_ink(static_cast<int>(x), static_cast<int>(y), (byte >> (7 - x % 8)) & 1);
        }
      }
    }
    page.set_source_path(std::move(source_path));
    return page;
  }

  const long maxval = reader.read_uint("maxval");
  if (maxval != 255) throw Error("unsupported maxval " + std::to_string(maxval) + " (must be 255)");
  std::vector<std::uint8_t> gray(count);
  if (kind == '2') {
    for (std::size_t i = 0; i < count; ++i) {
      const long v = reader.read_uint("pixel value");
      if (v > 255) throw Error("pixel value exceeds maxval");
      gray[i] = static_cast<std::uint8_t>(v);
    }
  } else {
    reader.skip_single_whitespace();
    const auto raster = reader.rest();
    if (raster.size() < count) throw Error("truncated raster data");
    for (std::size_t i = 0; i < count; ++i) gray[i] = static_cast<std::uint8_t>(raster[i]);
  }
  auto page = PageImage::from_gray(static_cast<int>(width), static_cast<int>(height), std::move(gray));
  page.set_source_path(std::move(source_path));
  return page;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for '" + path + "'");
}

inline PageImage load_page(const std::string& path) {
  try {
    return decode_netpbm(read_file(path), path);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

inline std::string encode_pbm_p4(const PageImage& page) {
  std::string out = "P4\n" + std::to_string(page.width()) + " " + std::to_string(page.height()) + "\n";
  const std::size_t row_bytes = (static_cast<std::size_t>(page.width()) + 7) / 8;
  for (int y = 0; y < page.height(); ++y) {
    std::string row(row_bytes, '\0');
    for (int x = 0; x < page.width(); ++x) {
      if (page.ink(x, y)) row[x / 8] = static_cast<char>(row[x / 8] | (0x80 >> (x % 8)));
    }
    out += row;
  }
  return out;
}

inline std::string encode_pgm_p5(const PageImage& page) {
  const auto gray = page.gray_values();
  std::string out = "P5\n" + std::to_string(page.width()) + " " + std::to_string(page.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(gray.data()), gray.size());
  return out;
}

// Ink is gray < threshold.
inline PageImage binarize_fixed(const PageImage& page, int threshold) {
  if (!page.has_gray()) throw Error("page has no gray channel");
  if (threshold < 0 || threshold > 255) throw Error("threshold out of range 0-255");
  PageImage out = page;
  for (int y = 0; y < page.height(); ++y)
    for (int x = 0; x < page.width(); ++x) out.set_ink(x, y, page.gray(x, y) < threshold);
  return out;
}

using Histogram = std::array<std::uint64_t, 256>;

inline Histogram gray_histogram(const PageImage& page) {
  Histogram h{};
  for (auto v : page.gray_values()) ++h[v];
  return h;
}

// Threshold t maximizing between-class variance, class 0 being levels <= t.
// Ties go to the smallest t.
inline int otsu_threshold(const Histogram& hist) {
  std::uint64_t total = 0;
  __int128 total_sum = 0;
  int distinct = 0;
  for (int i = 0; i < 256; ++i) {
    total += hist[i];
    total_sum += static_cast<__int128>(hist[i]) * i;
    distinct += hist[i] != 0;
  }
  if (distinct < 2) throw Error("degenerate histogram");

  // sigma_b^2 * total^2 = (total * sum0 - n0 * total_sum)^2 / (n0 * n1)
  std::uint64_t n0 = 0;
  __int128 sum0 = 0;
  long double best = -1.0L;
  int best_t = 0;
  for (int t = 0; t < 255; ++t) {
    n0 += hist[t];
    sum0 += static_cast<__int128>(hist[t]) * t;
    const std::uint64_t n1 = total - n0;
    long double score = 0.0L;
    if (n0 != 0 && n1 != 0) {
      const __int128 diff = static_cast<__int128>(total) * sum0 - static_cast<__int128>(n0) * total_sum;
      const long double d = static_cast<long double>(diff);
      score = d * d / (static_cast<long double>(n0) * static_cast<long double>(n1));
    }
    if (score > best) {
      best = score;
      best_t = t;
    }
  }
  return best_t;
}

// Pixels at or below the chosen threshold become ink.
inline std::pair<PageImage, int> binarize_otsu(const PageImage& page) {
  if (!page.has_gray()) throw Error("page has no gray channel");
  const int t = otsu_threshold(gray_histogram(page));
  return {binarize_fixed(page, t + 1), t};
}

// Otsu, falling back to a fixed 128 threshold on single-valued pages. PBM
// pages pass through unchanged.
inline PageImage binarize_auto(const PageImage& page) {
  if (!page.has_gray()) return page;
  try {
    return binarize_otsu(page).first;
  } catch (const Error&) {
    return binarize_fixed(page, 128);
  }
}

}  // namespace handocr
