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

#include <algorithm>
#include <array>
#include <bitset>
#include <cmath>
#include <cstdio>
#include <string>

#include "handocr/error.hpp"
#include "handocr/geometry.hpp"
#include "handocr/image.hpp"

namespace handocr {

inline constexpr int kGlyphSize = 32;
inline constexpr int kZoneGrid = 8;
inline constexpr int kZoneSize = kGlyphSize / kZoneGrid;
inline constexpr std::size_t kFeatureDim = kZoneGrid * kZoneGrid + 2;

// Layout: 64 zone densities (row-major from the top-left zone), then the
// log-scaled aspect ratio, then the ink ratio.
using FeatureVector = std::array<double, kFeatureDim>;
inline constexpr std::size_t kAspectIndex = kZoneGrid * kZoneGrid;
inline constexpr std::size_t kInkRatioIndex = kAspectIndex + 1;

// 32x32 binary glyph, row 0 at the top.
class Glyph {
 public:
  bool at(int x, int y) const { return bits_[y * kGlyphSize + x]; }
  void set(int x, int y, bool v = true) { bits_[y * kGlyphSize + x] = v; }
  std::size_t count() const { return bits_.count(); }
  friend bool operator==(const Glyph&, const Glyph&) = default;

 private:
  std::bitset<kGlyphSize * kGlyphSize> bits_;
};

struct ScaledExtent {
  int width;
  int height;
};

// Size of a w x h box once its longer side is scaled to 32.
inline ScaledExtent scaled_extent(int w, int h) {
  const int longer = std::max(w, h);
  auto scale = [&](int v) {
    const int s = static_cast<int>(std::lround(static_cast<double>(v) * kGlyphSize / longer));
    return std::clamp(s, 1, kGlyphSize);
  };
  return {scale(w), scale(h)};
}

// Crops `box` out of the page, nearest-neighbor scales the longer side to 32
// and centers the shorter side.
inline Glyph normalize_glyph(const PageImage& page, const Rect& box) {
  if (box.empty()) throw Error("empty box");
  if (box.left < 0 || box.bottom < 0 || box.right > page.width() || box.top > page.height())
    throw Error("box outside page");
  const int w = box.width();
  const int h = box.height();
  const int row0 = page.height() - box.top;  // raster row of the box's top edge
  bool any = false;
  for (int y = 0; y < h && !any; ++y)
    for (int x = 0; x < w && !any; ++x) any = page.ink(box.left + x, row0 + y);
  if (!any) throw Error("empty glyph");

  const auto ext = scaled_extent(w, h);
  const int off_x = (kGlyphSize - ext.width) / 2;
  const int off_y = (kGlyphSize - ext.height) / 2;
  Glyph g;
  for (int oy = 0; oy < ext.height; ++oy) {
    const int sy = static_cast<int>((2LL * oy + 1) * h / (2LL * ext.height));
    for (int ox = 0; ox < ext.width; ++ox) {
      const int sx = static_cast<int>((2LL * ox + 1) * w / (2LL * ext.width));
      if (page.ink(box.left + sx, row0 + sy)) g.set(off_x + ox, off_y + oy);
    }
  }
  return g;
}

inline double aspect_feature(int w, int h) {
  const double ratio = std::clamp(static_cast<double>(w) / h, 0.1, 10.0);
  return std::log(ratio) / std::log(10.0);
}

inline FeatureVector extract_features(const Glyph& glyph, const Rect& original_box) {
  FeatureVector fv{};
  for (int zy = 0; zy < kZoneGrid; ++zy) {
    for (int zx = 0; zx < kZoneGrid; ++zx) {
      int n = 0;
      for (int y = 0; y < kZoneSize; ++y)
        for (int x = 0; x < kZoneSize; ++x) n += glyph.at(zx * kZoneSize + x, zy * kZoneSize + y);
      fv[zy * kZoneGrid + zx] = static_cast<double>(n) / (kZoneSize * kZoneSize);
    }
  }
  const int w = original_box.width();
  const int h = original_box.height();
  fv[kAspectIndex] = aspect_feature(w, h);
  const auto ext = scaled_extent(w, h);
  fv[kInkRatioIndex] =
      std::min(1.0, static_cast<double>(glyph.count()) / (static_cast<double>(ext.width) * ext.height));
  return fv;
}

inline double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < kFeatureDim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// %.9g rendering used by every on-disk feature format.
inline std::string format_g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// One `.tr`-style dump line: `label v1 ... v66`.
inline std::string feature_line(const std::string& label, const FeatureVector& fv) {
  std::string out = label;
  for (double v : fv) out += ' ' + format_g9(v);
  out += '\n';
  return out;
}

}  // namespace handocr
