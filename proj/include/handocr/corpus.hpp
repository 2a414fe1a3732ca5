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

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "handocr/boxfile.hpp"
#include "handocr/config.hpp"
#include "handocr/dawg.hpp"
#include "handocr/error.hpp"
#include "handocr/evaluator.hpp"
#include "handocr/image.hpp"
#include "handocr/language_set.hpp"
#include "handocr/recognizer.hpp"
#include "handocr/segmenter.hpp"
#include "handocr/trainer.hpp"

namespace handocr {

enum class Role { kTrain, kTest };

struct ManifestEntry {
  std::string user;
  Role role = Role::kTrain;
  int dataset = 1;  // 1 = isolated characters, 2 = free-flow text
  std::string image;  // as written in the manifest
  std::string box;
  std::filesystem::path image_path;  // resolved against the manifest directory
  std::filesystem::path box_path;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;

  std::vector<const ManifestEntry*> select(const std::string& user, Role role) const {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : entries)
      if (e.user == user && e.role == role) out.push_back(&e);
    return out;
  }
  std::vector<std::string> users() const {
    std::vector<std::string> out;
    for (const auto& e : entries)
      if (std::find(out.begin(), out.end(), e.user) == out.end()) out.push_back(e.user);
    return out;
  }
};

inline constexpr const char* kManifestHeader = "user\trole\tdataset\timage\tbox";

// TSV with a header line; '#' starts a comment line. Relative paths resolve
// against `base_dir`.
inline CorpusManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir,
                                     bool check_paths = true) {
  CorpusManifest m;
  std::vector<Diagnostic> diags;
  bool header_seen = false;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kManifestHeader) diags.push_back({i + 1, "expected header '" + std::string(kManifestHeader) + "'"});
      header_seen = true;
      continue;
    }
    const auto f = detail::split_on(line, '\t');
    if (f.size() != 5) {
      diags.push_back({i + 1, "expected 5 tab-separated fields"});
      continue;
    }
    ManifestEntry e;
    e.user = f[0];
    if (f[1] == "train") e.role = Role::kTrain;
    else if (f[1] == "test") e.role = Role::kTest;
    else {
      diags.push_back({i + 1, "role must be train or test"});
      continue;
    }
    if (f[2] == "1" || f[2] == "2") e.dataset = f[2][0] - '0';
    else {
      diags.push_back({i + 1, "dataset must be 1 or 2"});
      continue;
    }
    if (e.user.empty() || f[3].empty() || f[4].empty()) {
      diags.push_back({i + 1, "user, image and box are required"});
      continue;
    }
    e.image = f[3];
    e.box = f[4];
    e.image_path = base_dir / e.image;
    e.box_path = base_dir / e.box;
    if (check_paths) {
      if (!std::filesystem::exists(e.image_path)) diags.push_back({i + 1, "missing image " + e.image_path.string()});
      if (!std::filesystem::exists(e.box_path)) diags.push_back({i + 1, "missing box file " + e.box_path.string()});
    }
    m.entries.push_back(std::move(e));
  }
  if (!header_seen) diags.push_back({1, "manifest has no header"});
  if (!diags.empty()) throw ParseError(std::move(diags));
  return m;
}

inline CorpusManifest load_manifest(const std::filesystem::path& path) {
  try {
    return parse_manifest(read_file(path.string()), path.parent_path());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

// Boxes still carrying the makebox placeholder label.
class PlaceholderLabels : public Error {
 public:
  explicit PlaceholderLabels(std::vector<std::string> where)
      : Error(describe(where)), where_(std::move(where)) {}
  const std::vector<std::string>& where() const { return where_; }

 private:
  static std::string describe(const std::vector<std::string>& where) {
    std::string s = "placeholder labels remain in training boxes:";
    for (const auto& w : where) s += "\n  " + w;
    return s;
  }
  std::vector<std::string> where_;
};

// Loads an image and binarizes PGM pages (Otsu, falling back to 128).
inline PageImage load_binarized(const std::filesystem::path& path) { return binarize_auto(load_page(path.string())); }

// Groups ground-truth boxes into words with the segmenter's line and word
// rules and returns each word's label string in reading order.
inline std::vector<std::string> words_from_boxes(const BoxFile& bf, const SegmenterConfig& cfg = {}) {
  std::vector<Component> comps;
  std::multimap<std::tuple<int, int, int, int>, std::string> labels;
  for (const auto& b : bf.boxes) {
    comps.push_back({b.rect, static_cast<int>(b.rect.area())});
    labels.emplace(std::make_tuple(b.rect.left, b.rect.bottom, b.rect.right, b.rect.top), b.label);
  }
  std::vector<std::string> words;
  for (const auto& line : group_lines(comps, cfg)) {
    for (const auto& word : group_words(line, cfg)) {
      std::string w;
      for (const auto& c : word) {
        auto it = labels.find(std::make_tuple(c.bbox.left, c.bbox.bottom, c.bbox.right, c.bbox.top));
        w += it->second;
        labels.erase(it);
      }
      words.push_back(std::move(w));
    }
  }
  return words;
}

// The ceil(fraction * distinct) most frequent words, ties broken
// lexicographically.
inline std::vector<std::string> most_frequent_words(const std::vector<std::string>& words, double fraction) {
  std::map<std::string, int> counts;
  for (const auto& w : words) ++counts[w];
  std::vector<std::pair<std::string, int>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  const auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(ranked.size()) - 1e-9));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(keep, ranked.size()); ++i) out.push_back(ranked[i].first);
  return out;
}

struct TrainOptions {
  std::string user;
  std::string name;
  std::filesystem::path tessdata = "tessdata";
  bool force = false;
  RunConfig config;
  // Explicit dictionaries; when absent they are derived from the free-flow
  // training pages.
  std::optional<std::vector<std::string>> words;
  std::optional<std::vector<std::string>> frequent_words;
  std::vector<std::string> user_words;
  std::vector<Ambiguity> ambiguities;
  ClusterTrace trace;
};

struct TrainSummary {
  LanguageSet language_set;
  std::vector<SkippedBox> skipped;
  std::map<int, long> samples_per_dataset;
  std::map<std::string, int> samples_per_class;
};

inline TrainSummary train_user(const CorpusManifest& manifest, const TrainOptions& opt) {
  opt.config.validate();
  const auto entries = manifest.select(opt.user, Role::kTrain);
  if (entries.empty()) throw Error("no training entries for user '" + opt.user + "'");

  std::vector<TrainingPair> pairs;
  std::vector<std::string> placeholders;
  std::vector<std::string> derived_words;
  nlohmann::json files = nlohmann::json::array();
  TrainSummary summary;
  for (const auto* e : entries) {
    const auto image_bytes = read_file(e->image_path.string());
    const auto box_bytes = read_file(e->box_path.string());
    BoxFile bf;
    try {
      bf = parse_boxfile(box_bytes);
    } catch (const Error& err) {
      throw Error(e->box_path.string() + ": " + err.what());
    }
    for (std::size_t i = 0; i < bf.boxes.size(); ++i)
      if (bf.boxes[i].label == kPlaceholderLabel) placeholders.push_back(e->box + ":" + std::to_string(i + 1));
    if (e->dataset == 2) {
      auto ws = words_from_boxes(bf, opt.config.segmenter);
      derived_words.insert(derived_words.end(), ws.begin(), ws.end());
    }
    PageImage page;
    try {
      page = binarize_auto(decode_netpbm(image_bytes, e->image_path.string()));
    } catch (const Error& err) {
      throw Error(e->image_path.string() + ": " + err.what());
    }
    summary.samples_per_dataset[e->dataset] += static_cast<long>(bf.boxes.size());
    files.push_back({{"image", e->image},
                     {"image_sha256", sha256_hex(image_bytes)},
                     {"box", e->box},
                     {"box_sha256", sha256_hex(box_bytes)},
                     {"dataset", e->dataset}});
    pairs.push_back({e->box, std::move(page), std::move(bf)});
  }
  if (!placeholders.empty()) throw PlaceholderLabels(std::move(placeholders));

  auto extraction = extract_training_features(pairs);
  summary.skipped = extraction.skipped;
  const auto& samples = extraction.samples;
  for (const auto& s : samples) ++summary.samples_per_class[s.label];

  LanguageSet ls;
  ls.name = opt.name;
  ls.prototypes = cluster_prototypes(samples, opt.config.k_max, opt.trace);
  ls.unicharset = build_unicharset(samples);
  ls.freq_table = build_frequency_table(ls.unicharset, ls.unicharset.total());
  ls.reject_threshold = compute_reject_threshold(ls.prototypes, samples, opt.config.reject_multiplier);

  std::string freq_source;
  std::vector<std::string> words = opt.words ? *opt.words : derived_words;
  std::vector<std::string> frequent;
  if (opt.frequent_words) {
    frequent = *opt.frequent_words;
    freq_source = "supplied list";
  } else {
    frequent = most_frequent_words(words, opt.config.frequent_fraction);
    freq_source = "top fraction of word list by count";
  }
  ls.word_dawg = build_dawg(words);
  ls.freq_dawg = build_dawg(frequent);
  ls.user_words = opt.user_words;
  ls.ambiguities = opt.ambiguities;

  ls.meta = {{"toolkit", kToolkitVersion},
             {"user", opt.user},
             {"config", to_json(opt.config)},
             {"samples", samples.size()},
             {"skipped_boxes", extraction.skipped.size()},
             {"word_list", opt.words ? "supplied list" : "free-flow training boxes"},
             {"frequent_words", {{"source", freq_source}, {"fraction", opt.config.frequent_fraction}}},
             {"reject_rule", "p99 own-class distance x reject_multiplier"},
             {"training_files", files}};
  summary.language_set = assemble_language_set(ls, opt.tessdata, opt.force);
  return summary;
}

inline RecognizedPage recognize_file(const LanguageSet& ls, const std::filesystem::path& image,
                                     const RecognizerConfig& cfg) {
  return recognize_page(ls, load_binarized(image), cfg);
}

// Recognizes every test page of `user` and scores it against its boxes.
inline EvalReport evaluate_user(const CorpusManifest& manifest, const std::string& user, const LanguageSet& ls,
                                const RecognizerConfig& cfg) {
  const auto entries = manifest.select(user, Role::kTest);
  if (entries.empty()) throw Error("no test entries for user '" + user + "'");
  EvalReport report;
  for (const auto* e : entries) {
    if (!std::filesystem::exists(e->box_path)) throw Error("missing ground truth " + e->box_path.string());
    const auto page = load_binarized(e->image_path);
    const auto truth = load_boxfile(e->box_path.string());
    report.add_page(e->dataset, predictions_from(recognize_page(ls, page, cfg)), truth);
  }
  return report;
}

}  // namespace handocr
