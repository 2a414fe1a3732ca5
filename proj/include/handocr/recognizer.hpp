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
#include <optional>
#include <string>
#include <vector>

#include "handocr/boxfile.hpp"
#include "handocr/error.hpp"
#include "handocr/features.hpp"
#include "handocr/language_set.hpp"
#include "handocr/segmenter.hpp"
#include "handocr/utf8.hpp"

namespace handocr {

inline constexpr std::string_view kRejectGlyph = "~";
inline constexpr std::string_view kRejectedWordText = "####";

struct Classification {
  std::optional<std::string> glyph;  // nullopt = REJECT
  std::string nearest;               // label of the nearest prototype, even when rejected
  double distance = 0.0;

  bool rejected() const { return !glyph.has_value(); }
};

// Nearest prototype by Euclidean distance. Exact distance ties go to the
// higher prior, then the lexicographically smaller label.
inline Classification classify_glyph(const LanguageSet& ls, const FeatureVector& fv) {
  if (ls.prototypes.empty()) throw Error("language set has no prototypes");
  const Prototype* best = nullptr;
  double best_d = 0.0;
  for (const auto& p : ls.prototypes) {
    const double d = squared_distance(fv, p.centroid);
    if (!best || d < best_d) {
      best = &p;
      best_d = d;
    } else if (d == best_d && p.label != best->label) {
      const double pa = ls.prior(p.label);
      const double pb = ls.prior(best->label);
      if (pa > pb || (pa == pb && p.label < best->label)) best = &p;
    }
  }
  Classification c;
  c.nearest = best->label;
  c.distance = std::sqrt(best_d);
  if (c.distance <= ls.reject_threshold) c.glyph = best->label;
  return c;
}

inline constexpr double kMinRejectThreshold = 1e-6;

// 99th percentile (index ceil(0.99 * (n - 1)) of the sorted values) of each
// sample's distance to its own class's nearest prototype, times
// `multiplier`, floored at 1e-6.
inline double compute_reject_threshold(const std::vector<Prototype>& protos,
                                       const std::vector<LabeledSample>& samples, double multiplier = 1.5) {
  if (samples.empty()) throw Error("reject threshold needs training samples");
  std::vector<double> dists;
  dists.reserve(samples.size());
  for (const auto& s : samples) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : protos)
      if (p.label == s.label) best = std::min(best, squared_distance(s.features, p.centroid));
    if (!std::isfinite(best)) throw Error("sample label '" + s.label + "' has no prototype");
    dists.push_back(std::sqrt(best));
  }
  std::sort(dists.begin(), dists.end());
  const std::size_t n = dists.size();
  const std::size_t idx = (99 * (n - 1) + 99) / 100;
  return std::max(kMinRejectThreshold, dists[std::min(idx, n - 1)] * multiplier);
}

struct RecognizedGlyph {
  Rect box;
  std::optional<std::string> glyph;  // nullopt = REJECT
  double distance = 0.0;

  friend bool operator==(const RecognizedGlyph&, const RecognizedGlyph&) = default;
};

struct RecognizedWord {
  std::vector<RecognizedGlyph> glyphs;
  bool rejected_word = false;
  bool dictionary_corrected = false;
  std::string corrected;  // replacement text when dictionary_corrected

  // Decided glyphs joined, REJECT rendered as "~".
  std::string raw_text() const {
    std::string s;
    for (const auto& g : glyphs) s += g.glyph ? *g.glyph : std::string(kRejectGlyph);
    return s;
  }
  bool has_reject() const {
    return std::any_of(glyphs.begin(), glyphs.end(), [](const RecognizedGlyph& g) { return !g.glyph; });
  }
  friend bool operator==(const RecognizedWord&, const RecognizedWord&) = default;
};

struct RecognizedPage {
  std::vector<std::vector<RecognizedWord>> lines;

  friend bool operator==(const RecognizedPage&, const RecognizedPage&) = default;
};

struct RecognizerConfig {
  SegmenterConfig segmenter;
  double reject_word_fraction = 0.5;  // words with more rejects than this are dropped whole
  bool use_dictionary = false;
};

// Single left-to-right pass; at each position the longest matching source
// wins (ties by table order) and matches never overlap.
inline std::string apply_ambiguities(const std::string& word, const std::vector<Ambiguity>& ambigs) {
  if (ambigs.empty()) return word;
  struct Rule {
    std::u32string source;
    std::u32string target;
  };
  std::vector<Rule> rules;
  for (const auto& a : ambigs) rules.push_back({utf8::decode_or_throw(a.source), utf8::decode_or_throw(a.target)});
  std::stable_sort(rules.begin(), rules.end(),
                   [](const Rule& a, const Rule& b) { return a.source.size() > b.source.size(); });
  const auto text = utf8::decode_or_throw(word);
  std::u32string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const Rule* hit = nullptr;
    for (const auto& r : rules) {
      if (!r.source.empty() && text.compare(i, r.source.size(), r.source) == 0) {
        hit = &r;
        break;
      }
    }
    if (hit) {
      out += hit->target;
      i += hit->source.size();
    } else {
      out.push_back(text[i++]);
    }
  }
  return utf8::encode(out);
}

namespace detail {

inline bool in_dictionary(const LanguageSet& ls, const std::string& word) {
  return ls.word_dawg.contains(word) ||
         std::find(ls.user_words.begin(), ls.user_words.end(), word) != ls.user_words.end();
}

}  // namespace detail

// Dictionary pass for one word: ambiguity substitutions first, then the
// lexicographically first distance-1 neighbour from freq-dawg, else
// word-dawg. Words already in word-dawg or user-words are left alone.
inline void correct_with_dictionary(const LanguageSet& ls, RecognizedWord& word) {
  using detail::in_dictionary;
  // Partial strings would invent characters: words with any REJECT are
  // left as they are.
  if (word.rejected_word || word.has_reject()) return;
  const std::string text = word.raw_text();
  if (in_dictionary(ls, text)) return;

  std::optional<std::string> fix;
  const std::string substituted = apply_ambiguities(text, ls.ambiguities);
  if (substituted != text && in_dictionary(ls, substituted)) fix = substituted;
  for (const Dawg* d : {&ls.freq_dawg, &ls.word_dawg}) {
    if (fix) break;
    const auto hits = d->near_matches(text);
    if (std::any_of(hits.begin(), hits.end(), [](const Dawg::Match& m) { return m.kind == Dawg::EditKind::kExact; }))
      return;
    if (!hits.empty()) fix = hits.front().word;
  }
  if (!fix) return;
  word.dictionary_corrected = true;
  word.corrected = *fix;
  // Same-length corrections also update the per-box decisions.
  const auto cps = utf8::decode_or_throw(*fix);
  if (cps.size() == word.glyphs.size())
    for (std::size_t i = 0; i < cps.size(); ++i) word.glyphs[i].glyph = utf8::encode(cps[i]);
}

inline RecognizedPage recognize_page(const LanguageSet& ls, const PageImage& page, const RecognizerConfig& cfg = {}) {
  if (ls.prototypes.empty()) throw Error("language set '" + ls.name + "' is untrained");
  RecognizedPage out;
  for (const auto& line : segment_page(page, cfg.segmenter).lines) {
    auto& rline = out.lines.emplace_back();
    for (const auto& word : line) {
      RecognizedWord rw;
      std::size_t rejects = 0;
      for (const auto& cand : word) {
        const auto fv = extract_features(normalize_glyph(page, cand.bbox), cand.bbox);
        const auto c = classify_glyph(ls, fv);
        rejects += c.rejected();
        rw.glyphs.push_back({cand.bbox, c.glyph, c.distance});
      }
      rw.rejected_word = static_cast<double>(rejects) > cfg.reject_word_fraction * static_cast<double>(word.size());
      if (cfg.use_dictionary) correct_with_dictionary(ls, rw);
      rline.push_back(std::move(rw));
    }
  }
  return out;
}

enum class OutputFormat { kText, kBoxes };

inline std::string emit_output(const RecognizedPage& rp, OutputFormat format) {
  std::string out;
  if (format == OutputFormat::kText) {
    for (const auto& line : rp.lines) {
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (i) out += ' ';
        const auto& w = line[i];
        out += w.rejected_word ? std::string(kRejectedWordText) : w.dictionary_corrected ? w.corrected : w.raw_text();
      }
      out += '\n';
    }
    return out;
  }
  BoxFile bf;
  for (const auto& line : rp.lines)
    for (const auto& w : line)
      for (const auto& g : w.glyphs) bf.boxes.push_back({g.glyph ? *g.glyph : std::string(kRejectGlyph), g.box, 0});
  return serialize_boxfile(bf);
}

}  // namespace handocr
