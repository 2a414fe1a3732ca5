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
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "handocr/boxfile.hpp"
#include "handocr/image.hpp"

// Synthetic "handwriting" pages built from a small lower-case pixel font,
// with per-glyph jitter and stroke-edge noise. Used for demos and tests.
namespace handocr::synth {

inline constexpr int kTemplateWidth = 5;
inline constexpr int kTemplateHeight = 9;  // rows 0-1 ascender, 2-6 x-height, 7-8 descender

using Template = std::array<const char*, kTemplateHeight>;

// clang-format off
inline const std::array<Template, 26> kFont = {{
  {".....", ".....", ".###.", "....#", ".####", "#...#", ".####", ".....", "....."},  // a
  {"#....", "#....", "####.", "#...#", "#...#", "#...#", "####.", ".....", "....."},  // b
  {".....", ".....", ".####", "#....", "#....", "#....", ".####", ".....", "....."},  // c
  {"....#", "....#", ".####", "#...#", "#...#", "#...#", ".####", ".....", "....."},  // d
  {".....", ".....", ".###.", "#...#", "#####", "#....", ".####", ".....", "....."},  // e
  {"..##.", ".#...", "####.", ".#...", ".#...", ".#...", ".#...", ".....", "....."},  // f
  {".....", ".....", ".####", "#...#", "#...#", ".####", "....#", "....#", ".###."},  // g
  {"#....", "#....", "####.", "#...#", "#...#", "#...#", "#...#", ".....", "....."},  // h
  {".....", "..#..", ".....", "..#..", "..#..", "..#..", "..#..", ".....", "....."},  // i
  {".....", "...#.", ".....", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."},  // j
  {"#....", "#....", "#..#.", "#.#..", "##...", "#.#..", "#..#.", ".....", "....."},  // k
  {".#...", ".#...", ".#...", ".#...", ".#...", ".#...", "..##.", ".....", "....."},  // l
  {".....", ".....", "####.", "#.#.#", "#.#.#", "#.#.#", "#.#.#", ".....", "....."},  // m
  {".....", ".....", "####.", "#...#", "#...#", "#...#", "#...#", ".....", "....."},  // n
  {".....", ".....", ".###.", "#...#", "#...#", "#...#", ".###.", ".....", "....."},  // o
  {".....", ".....", "####.", "#...#", "#...#", "####.", "#....", "#....", "#...."},  // p
  {".....", ".....", ".####", "#...#", "#...#", ".####", "....#", "....#", "....#"},  // q
  {".....", ".....", "#.##.", "##..#", "#....", "#....", "#....", ".....", "....."},  // r
  {".....", ".....", ".####", "#....", ".###.", "....#", "####.", ".....", "....."},  // s
  {".#...", ".#...", "####.", ".#...", ".#...", ".#...", "..##.", ".....", "....."},  // t
  {".....", ".....", "#...#", "#...#", "#...#", "#...#", ".####", ".....", "....."},  // u
  {".....", ".....", "#...#", "#...#", "#...#", ".#.#.", "..#..", ".....", "....."},  // v
  {".....", ".....", "#...#", "#...#", "#.#.#", "#.#.#", ".#.#.", ".....", "....."},  // w
  {".....", ".....", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", ".....", "....."},  // x
  {".....", ".....", "#...#", "#...#", "#...#", ".####", "....#", "....#", "####."},  // y
  {".....", ".....", "#####", "...#.", "..#..", ".#...", "#####", ".....", "....."},  // z
}};
// clang-format on

inline const std::vector<std::string> kVocabulary = {
    "the",      "of",      "and",     "to",      "in",       "is",       "for",      "that",   "with",
    "data",     "system",  "model",   "user",    "page",     "text",     "word",     "image",  "based",
    "query",    "recall",  "index",   "pen",     "digital",  "paper",    "server",   "jump",   "quick",
    "brown",    "fox",     "lazy",    "dog",     "zero",     "vex",      "kept",     "fix",    "wave",
    "graph",    "black",   "quartz",  "judge",   "sphinx",   "vow",      "my",       "box",    "lines",
    "search",   "archive", "network", "method",  "result",   "sample",   "writer",   "engine", "just",
    "time",     "field",   "squeeze", "jacket",  "hazy",     "oxygen",   "mix",      "key",    "view"};

struct Options {
  int scale = 5;           // pixels per template cell
  int max_shift = 2;       // per-glyph jitter, pixels
  double noise = 0.10;     // flip probability on the stroke edge band
  int isolated_repeats = 4;  // copies of each letter per isolated page
  int isolated_columns = 13;
  int freeflow_words = 36;
  int words_per_line = 6;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  int uniform(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 engine_;
};

struct PlacedGlyph {
  char letter;
  int x;  // raster column of the template origin
  int y;  // raster row of the template origin
};

struct SynthPage {
  PageImage page;
  BoxFile truth;
};

// Ink-cell column span of a template.
inline std::pair<int, int> template_columns(const Template& t) {
  int lo = kTemplateWidth, hi = -1;
  for (const char* row : t)
    for (int x = 0; x < kTemplateWidth; ++x)
      if (row[x] == '#') {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
  return {lo, hi};
}

// Paints a template at `scale`. Diagonal-only joints get a square patch over
// the shared corner so strokes stay connected at any noise level.
inline void paint_template(std::vector<std::uint8_t>& mask, int w, int h, const Template& t, int ox, int oy,
                           int scale) {
  auto on = [&](int cx, int cy) {
    return cx >= 0 && cy >= 0 && cx < kTemplateWidth && cy < kTemplateHeight && t[cy][cx] == '#';
  };
  auto fill = [&](int x0, int y0, int x1, int y1) {
    for (int y = std::max(0, y0); y < std::min(h, y1); ++y)
      for (int x = std::max(0, x0); x < std::min(w, x1); ++x) mask[static_cast<std::size_t>(y) * w + x] = 1;
  };
  for (int cy = 0; cy < kTemplateHeight; ++cy) {
    for (int cx = 0; cx < kTemplateWidth; ++cx) {
      if (!on(cx, cy)) continue;
      fill(ox + cx * scale, oy + cy * scale, ox + (cx + 1) * scale, oy + (cy + 1) * scale);
      for (int dx : {-1, 1}) {
        if (on(cx + dx, cy + 1) && !on(cx + dx, cy) && !on(cx, cy + 1)) {
          const int corner_x = ox + (dx > 0 ? cx + 1 : cx) * scale;
          const int corner_y = oy + (cy + 1) * scale;
          const int half = scale / 2;
          fill(corner_x - half, corner_y - half, corner_x + scale - half, corner_y + scale - half);
        }
      }
    }
  }
}

// Renders glyphs onto a blank page, perturbs each one and records its
// tight ink box as ground truth.
inline SynthPage render_page(int width, int height, const std::vector<PlacedGlyph>& glyphs, const Options& opt,
                             Rng& rng) {
  SynthPage out{PageImage(width, height), {}};
  for (const auto& g : glyphs) {
    const int dx = rng.uniform(-opt.max_shift, opt.max_shift);
    const int dy = rng.uniform(-opt.max_shift, opt.max_shift);
    const int ox = g.x + dx;
    const int oy = g.y + dy;
    const int cw = kTemplateWidth * opt.scale + 2 * opt.scale;
    const int ch = kTemplateHeight * opt.scale + 2 * opt.scale;
    const int bx = ox - opt.scale;
    const int by = oy - opt.scale;
    std::vector<std::uint8_t> cell(static_cast<std::size_t>(cw) * ch, 0);
    paint_template(cell, cw, ch, kFont[g.letter - 'a'], opt.scale, opt.scale, opt.scale);

    // Flip pixels on the stroke edge: ink with a background neighbor or
    // background with an ink neighbor.
    std::vector<std::uint8_t> noisy = cell;
    for (int y = 1; y + 1 < ch; ++y) {
      for (int x = 1; x + 1 < cw; ++x) {
        const auto v = cell[static_cast<std::size_t>(y) * cw + x];
        bool edge = false;
        for (int ny = y - 1; ny <= y + 1 && !edge; ++ny)
          for (int nx = x - 1; nx <= x + 1 && !edge; ++nx) edge = cell[static_cast<std::size_t>(ny) * cw + nx] != v;
        if (edge && rng.chance(opt.noise)) noisy[static_cast<std::size_t>(y) * cw + x] = v ? 0 : 1;
      }
    }

    int min_x = width, max_x = -1, min_y = height, max_y = -1;
    for (int y = 0; y < ch; ++y)
      for (int x = 0; x < cw; ++x) {
        if (!noisy[static_cast<std::size_t>(y) * cw + x]) continue;
        const int px = bx + x, py = by + y;
        if (!out.page.in_bounds(px, py)) continue;
        out.page.set_ink(px, py, true);
        min_x = std::min(min_x, px);
        max_x = std::max(max_x, px);
        min_y = std::min(min_y, py);
        max_y = std::max(max_y, py);
      }
    if (max_x < 0) continue;
    out.truth.boxes.push_back({std::string(1, g.letter), Rect{min_x, height - 1 - max_y, max_x + 1, height - min_y}, 0});
  }
  return out;
}

// A grid of isolated letters, each letter `isolated_repeats` times in
// shuffled order.
inline SynthPage isolated_page(const Options& opt, Rng& rng) {
  std::vector<char> letters;
  for (int r = 0; r < opt.isolated_repeats; ++r)
    for (char c = 'a'; c <= 'z'; ++c) letters.push_back(c);
  for (std::size_t i = letters.size(); i > 1; --i) std::swap(letters[i - 1], letters[rng.uniform(0, static_cast<int>(i - 1))]);
  const int pitch_x = kTemplateWidth * opt.scale * 2 + 2 * opt.scale;
  const int pitch_y = kTemplateHeight * opt.scale + 5 * opt.scale;
  const int margin = 4 * opt.scale;
  const int rows = (static_cast<int>(letters.size()) + opt.isolated_columns - 1) / opt.isolated_columns;
  std::vector<PlacedGlyph> placed;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const int col = static_cast<int>(i) % opt.isolated_columns;
    const int row = static_cast<int>(i) / opt.isolated_columns;
    placed.push_back({letters[i], margin + col * pitch_x, margin + row * pitch_y});
  }
  return render_page(2 * margin + opt.isolated_columns * pitch_x, 2 * margin + rows * pitch_y, placed, opt, rng);
}

// Lines of words drawn from the built-in vocabulary.
inline SynthPage freeflow_page(const Options& opt, Rng& rng) {
  const int char_gap = 7 * opt.scale / 5 + 1;
  const int word_gap = 8 * opt.scale;
  const int pitch_y = kTemplateHeight * opt.scale + 6 * opt.scale;
  const int margin = 4 * opt.scale;
  std::vector<PlacedGlyph> placed;
  int x = margin, y = margin, max_x = 0, in_line = 0;
  for (int w = 0; w < opt.freeflow_words; ++w) {
    const auto& word = kVocabulary[rng.uniform(0, static_cast<int>(kVocabulary.size()) - 1)];
    if (in_line == opt.words_per_line) {
      x = margin;
      y += pitch_y;
      in_line = 0;
    }
    for (char c : word) {
      const auto [lo, hi] = template_columns(kFont[c - 'a']);
      placed.push_back({c, x - lo * opt.scale, y});
      x += (hi - lo + 1) * opt.scale + char_gap;
    }
    max_x = std::max(max_x, x);
    x += word_gap;
    ++in_line;
  }
  return render_page(max_x + margin, y + pitch_y + margin, placed, opt, rng);
}

struct CorpusLayout {
  int train_isolated = 3;
  int train_freeflow = 1;
  int test_isolated = 1;
  int test_freeflow = 1;
};

// Writes PBM pages, box files and `manifest.tsv` under `dir` for each user.
// Returns the manifest path.
inline std::filesystem::path write_corpus(const std::filesystem::path& dir, const std::vector<std::string>& users,
                                          std::uint64_t seed, const Options& opt = {},
                                          const CorpusLayout& layout = {}) {
  std::filesystem::create_directories(dir);
  std::string manifest = "user\trole\tdataset\timage\tbox\n";
  Rng rng(seed);
  for (const auto& user : users) {
    auto emit = [&](const char* role, int dataset, int count) {
      for (int i = 0; i < count; ++i) {
        const auto page = dataset == 1 ? isolated_page(opt, rng) : freeflow_page(opt, rng);
        const std::string stem = user + "_" + role + "_d" + std::to_string(dataset) + "_" + std::to_string(i + 1);
        write_file((dir / (stem + ".pbm")).string(), encode_pbm_p4(page.page));
        write_file((dir / (stem + ".box")).string(), serialize_boxfile(page.truth));
        manifest += user + '\t' + role + '\t' + std::to_string(dataset) + '\t' + stem + ".pbm\t" + stem + ".box\n";
      }
    };
    emit("train", 1, layout.train_isolated);
    emit("train", 2, layout.train_freeflow);
    emit("test", 1, layout.test_isolated);
    emit("test", 2, layout.test_freeflow);
  }
  const auto path = dir / "manifest.tsv";
  write_file(path.string(), manifest);
  return path;
}

}  // namespace handocr::synth
