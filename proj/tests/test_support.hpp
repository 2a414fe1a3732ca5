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

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "handocr/image.hpp"
#include "handocr/language_set.hpp"
#include "handocr/recognizer.hpp"
#include "handocr/segmenter.hpp"
#include "handocr/synth.hpp"
#include "oracles.hpp"

namespace handocr::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("handocr_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Page from rows of '#' (ink) and '.' (background), top row first.
inline PageImage page_from_art(const std::vector<std::string>& rows) {
  PageImage page(static_cast<int>(rows.at(0).size()), static_cast<int>(rows.size()));
  for (int y = 0; y < page.height(); ++y)
    for (int x = 0; x < page.width(); ++x) page.set_ink(x, y, rows[y][x] == '#');
  return page;
}

inline void fill_rect_raster(PageImage& page, int x0, int y0, int x1, int y1) {
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) page.set_ink(x, y, true);
}

// Clean (noise-free) rendering of lower-case text with the synthetic font.
// Words are separated by `word_gap` pixels, letters by `char_gap`.
inline PageImage render_text(const std::vector<std::string>& lines, int scale = 5, int char_gap = 8,
                             int word_gap = 40) {
  const int margin = 4 * scale;
  const int pitch_y = synth::kTemplateHeight * scale + 6 * scale;
  std::vector<std::pair<char, std::pair<int, int>>> placed;
  int max_x = 0;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    int x = margin;
    const int y = margin + static_cast<int>(l) * pitch_y;
    for (char c : lines[l]) {
      if (c == ' ') {
        x += word_gap - char_gap;
        continue;
      }
      const auto [lo, hi] = synth::template_columns(synth::kFont[c - 'a']);
      placed.push_back({c, {x - lo * scale, y}});
      x += (hi - lo + 1) * scale + char_gap;
    }
    max_x = std::max(max_x, x);
  }
  const int w = max_x + margin;
  const int h = margin * 2 + static_cast<int>(lines.size()) * pitch_y;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 0);
  for (const auto& [c, pos] : placed)
    synth::paint_template(mask, w, h, synth::kFont[c - 'a'], pos.first, pos.second, scale);
  PageImage page(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) page.set_ink(x, y, mask[static_cast<std::size_t>(y) * w + x] != 0);
  return page;
}

// Ground-truth boxes for a clean rendering: segmented candidates labelled
// with the text's letters in reading order.
inline BoxFile truth_for_text(const PageImage& page, const std::vector<std::string>& lines) {
  std::string letters;
  for (const auto& l : lines)
    for (char c : l)
      if (c != ' ') letters += c;
  BoxFile bf;
  std::size_t i = 0;
  for (const auto& line : segment_page(page).lines)
    for (const auto& word : line)
      for (const auto& cand : word) bf.boxes.push_back({std::string(1, letters.at(i++)), cand.bbox, 0});
  if (i != letters.size()) throw Error("rendered text did not segment cleanly");
  return bf;
}

// In-memory language set trained on clean renderings of `lines`.
inline LanguageSet train_on_text(const std::vector<std::string>& lines, const std::string& name = "test") {
  const auto page = render_text(lines);
  const auto ex = extract_training_features({{name, page, truth_for_text(page, lines)}});
  LanguageSet ls;
  ls.name = name;
  ls.prototypes = cluster_prototypes(ex.samples);
  ls.unicharset = build_unicharset(ex.samples);
  ls.freq_table = build_frequency_table(ls.unicharset, ls.unicharset.total());
  ls.reject_threshold = compute_reject_threshold(ls.prototypes, ex.samples);
  return ls;
}

using oracle::random_word;

}  // namespace handocr::testing
