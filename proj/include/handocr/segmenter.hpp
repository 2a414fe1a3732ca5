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
#include <cmath>
#include <numeric>
#include <vector>

#include "handocr/geometry.hpp"
#include "handocr/image.hpp"

namespace handocr {

struct SegmenterConfig {
  int min_ink = 4;               // components with fewer pixels are noise
  double merge_overlap = 0.5;    // fraction of the narrower width
  double merge_gap = 0.5;        // times median component height
  double line_band = 0.5;        // times median candidate height
  double word_gap_factor = 0.5;  // times median candidate height

  friend bool operator==(const SegmenterConfig&, const SegmenterConfig&) = default;
};

// A connected ink blob, or after merging, a character candidate.
struct Component {
  Rect bbox;
  int pixel_count = 0;

  friend bool operator==(const Component&, const Component&) = default;
};

using Word = std::vector<Component>;
using Line = std::vector<Word>;

struct SegmentedPage {
  std::vector<Line> lines;

  std::size_t candidate_count() const {
    std::size_t n = 0;
    for (const auto& line : lines)
      for (const auto& word : line) n += word.size();
    return n;
  }
  friend bool operator==(const SegmentedPage&, const SegmentedPage&) = default;
};

namespace detail {

inline bool left_then_bottom(const Component& a, const Component& b) {
  if (a.bbox.left != b.bbox.left) return a.bbox.left < b.bbox.left;
  if (a.bbox.bottom != b.bbox.bottom) return a.bbox.bottom < b.bbox.bottom;
  if (a.bbox.right != b.bbox.right) return a.bbox.right < b.bbox.right;
  return a.bbox.top < b.bbox.top;
}

// Mean of the two middle values for even counts.
inline double median_height(const std::vector<Component>& comps) {
  if (comps.empty()) return 0.0;
  std::vector<int> h;
  h.reserve(comps.size());
  for (const auto& c : comps) h.push_back(c.bbox.height());
  std::sort(h.begin(), h.end());
  const std::size_t n = h.size();
  return n % 2 ? h[n / 2] : 0.5 * (h[n / 2 - 1] + h[n / 2]);
}

inline double vertical_gap(const Rect& a, const Rect& b) {
  return std::max(0, std::max(a.bottom, b.bottom) - std::min(a.top, b.top));
}

inline int horizontal_overlap(const Rect& a, const Rect& b) {
  return std::max(0, std::min(a.right, b.right) - std::max(a.left, b.left));
}

}  // namespace detail

// 8-connected ink components in scan order of their first pixel.
inline std::vector<Component> connected_components(const PageImage& page, int min_ink = 4) {
  const int w = page.width();
  const int h = page.height();
  std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::pair<int, int>> stack;
  std::vector<Component> out;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!page.ink(x, y) || seen[static_cast<std::size_t>(y) * w + x]) continue;
      int min_x = x, max_x = x, min_y = y, max_y = y, count = 0;
      seen[static_cast<std::size_t>(y) * w + x] = 1;
      stack.assign(1, {x, y});
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        ++count;
        min_x = std::min(min_x, cx);
        max_x = std::max(max_x, cx);
        min_y = std::min(min_y, cy);
        max_y = std::max(max_y, cy);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (!page.in_bounds(nx, ny) || !page.ink(nx, ny)) continue;
            auto& s = seen[static_cast<std::size_t>(ny) * w + nx];
            if (s) continue;
            s = 1;
            stack.emplace_back(nx, ny);
          }
        }
      }
      if (count < min_ink) continue;
      out.push_back({Rect{min_x, h - 1 - max_y, max_x + 1, h - min_y}, count});
    }
  }
  return out;
}

// Joins fragments of one character (the dot of an 'i' or 'j') into a single
// candidate. Transitive; output sorted by left edge.
inline std::vector<Component> merge_diacritics(const std::vector<Component>& comps,
                                               const SegmenterConfig& cfg = {}) {
  const std::size_t n = comps.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  const double max_gap = cfg.merge_gap * detail::median_height(comps);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = comps[i].bbox;
      const auto& b = comps[j].bbox;
      const int narrower = std::min(a.width(), b.width());
      const int overlap = detail::horizontal_overlap(a, b);
      if (overlap == 0 || overlap < cfg.merge_overlap * narrower) continue;
      if (detail::vertical_gap(a, b) > max_gap) continue;
      parent[find(i)] = find(j);
    }
  }
  std::vector<Component> merged;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(merged.size());
      merged.push_back(comps[i]);
    } else {
      auto& m = merged[slot[root]];
      m.bbox = unite(m.bbox, comps[i].bbox);
      m.pixel_count += comps[i].pixel_count;
    }
  }
  std::sort(merged.begin(), merged.end(), detail::left_then_bottom);
  return merged;
}

// Greedy banding, top edge first. Lines come back top to bottom, each sorted
// by left edge.
inline std::vector<std::vector<Component>> group_lines(const std::vector<Component>& candidates,
                                                       const SegmenterConfig& cfg = {}) {
  struct Band {
    int bottom;
    int top;
    std::vector<Component> members;
  };
  std::vector<Component> order = candidates;
  std::sort(order.begin(), order.end(), [](const Component& a, const Component& b) {
    if (a.bbox.top != b.bbox.top) return a.bbox.top > b.bbox.top;
    return detail::left_then_bottom(a, b);
  });
  const double slack = cfg.line_band * detail::median_height(candidates);
  std::vector<Band> bands;
  for (const auto& c : order) {
    const double cy = c.bbox.center_y();
    Band* best = nullptr;
    double best_dist = 0.0;
    for (auto& band : bands) {
      if (cy < band.bottom - slack || cy > band.top + slack) continue;
      const double dist = std::abs(cy - 0.5 * (band.bottom + band.top));
      if (!best || dist < best_dist) {
        best = &band;
        best_dist = dist;
      }
    }
    if (best) {
      best->bottom = std::min(best->bottom, c.bbox.bottom);
      best->top = std::max(best->top, c.bbox.top);
      best->members.push_back(c);
    } else {
      bands.push_back({c.bbox.bottom, c.bbox.top, {c}});
    }
  }
  std::stable_sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) { return a.top > b.top; });
  std::vector<std::vector<Component>> lines;
  lines.reserve(bands.size());
  for (auto& band : bands) {
    std::sort(band.members.begin(), band.members.end(), detail::left_then_bottom);
    lines.push_back(std::move(band.members));
  }
  return lines;
}

// Splits a left-to-right sorted line into words at gaps wider than
// word_gap_factor times the line's median candidate height. The gap is
// measured from the rightmost edge seen so far in the current word.
inline std::vector<Word> group_words(const std::vector<Component>& line, const SegmenterConfig& cfg = {}) {
  std::vector<Word> words;
  if (line.empty()) return words;
  const double max_gap = cfg.word_gap_factor * detail::median_height(line);
  words.push_back({line.front()});
  int reach = line.front().bbox.right;
  for (std::size_t i = 1; i < line.size(); ++i) {
    const int gap = std::max(0, line[i].bbox.left - reach);
    if (gap > max_gap) {
      words.push_back({});
      reach = line[i].bbox.right;
    } else {
      reach = std::max(reach, line[i].bbox.right);
    }
    words.back().push_back(line[i]);
  }
  return words;
}

inline SegmentedPage segment_page(const PageImage& page, const SegmenterConfig& cfg = {}) {
  SegmentedPage out;
  const auto candidates = merge_diacritics(connected_components(page, cfg.min_ink), cfg);
  for (const auto& line : group_lines(candidates, cfg)) out.lines.push_back(group_words(line, cfg));
  return out;
}

}  // namespace handocr
