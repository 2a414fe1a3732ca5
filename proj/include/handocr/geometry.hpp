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
#include <compare>

namespace handocr {

// Axis-aligned box in page coordinates with a bottom-left origin. Covers
// x in [left, right) and y in [bottom, top).
struct Rect {
  int left = 0;
  int bottom = 0;
  int right = 0;
  int top = 0;

  int width() const { return right - left; }
  int height() const { return top - bottom; }
  long long area() const { return static_cast<long long>(width()) * height(); }
  bool empty() const { return left >= right || bottom >= top; }
  double center_y() const { return 0.5 * (bottom + top); }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline Rect unite(const Rect& a, const Rect& b) {
  return {std::min(a.left, b.left), std::min(a.bottom, b.bottom), std::max(a.right, b.right),
          std::max(a.top, b.top)};
}

inline long long intersection_area(const Rect& a, const Rect& b) {
  const long long w = std::min(a.right, b.right) - std::max(a.left, b.left);
  const long long h = std::min(a.top, b.top) - std::max(a.bottom, b.bottom);
  return (w > 0 && h > 0) ? w * h : 0;
}

inline double iou(const Rect& a, const Rect& b) {
  const long long inter = intersection_area(a, b);
  if (inter == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(a.area() + b.area() - inter);
}

}  // namespace handocr
