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
#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "handocr/boxfile.hpp"
#include "handocr/error.hpp"
#include "handocr/features.hpp"
#include "handocr/image.hpp"
#include "handocr/utf8.hpp"

namespace handocr {

struct LabeledSample {
  std::string label;
  FeatureVector features;
};

// One training image with its ground-truth boxes. `name` identifies it in
// logs and diagnostics.
struct TrainingPair {
  std::string name;
  PageImage page;
  BoxFile boxes;
};

struct SkippedBox {
  std::string page;
  std::size_t line;  // 1-based box index
  std::string reason;
};

struct FeatureExtraction {
  std::vector<LabeledSample> samples;
  std::vector<SkippedBox> skipped;
};

// One labeled vector per box in page order then box order. Boxes over blank
// regions are skipped and reported.
inline FeatureExtraction extract_training_features(const std::vector<TrainingPair>& pairs) {
  FeatureExtraction out;
  for (const auto& pair : pairs) {
    try {
      bind_to_page(pair.boxes, pair.page);
    } catch (const Error& e) {
      throw Error(pair.name + ": " + e.what());
    }
    for (std::size_t i = 0; i < pair.boxes.boxes.size(); ++i) {
      const auto& box = pair.boxes.boxes[i];
      try {
        const auto glyph = normalize_glyph(pair.page, box.rect);
        out.samples.push_back({box.label, extract_features(glyph, box.rect)});
      } catch (const Error& e) {
        out.skipped.push_back({pair.name, i + 1, e.what()});
      }
    }
  }
  if (out.samples.empty()) throw Error("training set has no usable samples");
  return out;
}

struct Prototype {
  std::string label;
  FeatureVector centroid{};
  int member_count = 1;
  double spread = 0.0;  // RMS distance of members to the centroid

  friend bool operator==(const Prototype&, const Prototype&) = default;
};

// Called after every centroid update with the k-means objective (sum of
// squared member distances).
using ClusterTrace = std::function<void(const std::string& label, int iteration, double objective)>;

namespace detail {

inline std::size_t nearest_centroid(const FeatureVector& v, const std::vector<FeatureVector>& centroids) {
  std::size_t best = 0;
  double best_d = squared_distance(v, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = squared_distance(v, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

inline std::vector<Prototype> cluster_one_label(const std::string& label, std::vector<FeatureVector> pts,
                                                int k_max, const ClusterTrace& trace) {
  std::sort(pts.begin(), pts.end());
  const std::size_t n = pts.size();
  const std::size_t k = std::min({static_cast<std::size_t>(k_max), (n + 9) / 10, n});

  std::vector<FeatureVector> centroids(k);
  for (std::size_t i = 0; i < k; ++i) centroids[i] = pts[i * n / k];
  std::vector<std::size_t> assign(n);
  for (std::size_t i = 0; i < n; ++i) assign[i] = nearest_centroid(pts[i], centroids);

  auto recompute = [&]() {
    std::vector<FeatureVector> sums(centroids.size(), FeatureVector{});
    std::vector<std::size_t> counts(centroids.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[assign[i]];
      for (std::size_t d = 0; d < kFeatureDim; ++d) sums[assign[i]][d] += pts[i][d];
    }
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < kFeatureDim; ++d) centroids[c][d] = sums[c][d] / counts[c];
    }
    return counts;
  };

  // Empty clusters take the sample farthest from its centroid (among
  // clusters that can spare one). If every sample sits on its centroid the
  // empty cluster is dropped.
  auto reseed_empty = [&](std::vector<std::size_t> counts) {
    for (std::size_t c = 0; c < centroids.size();) {
      if (counts[c] != 0) {
        ++c;
        continue;
      }
      std::size_t far = n;
      double far_d = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assign[i]] < 2) continue;
        const double d = squared_distance(pts[i], centroids[assign[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far == n) {
        centroids.erase(centroids.begin() + static_cast<long>(c));
        counts.erase(counts.begin() + static_cast<long>(c));
        for (auto& a : assign)
          if (a > c) --a;
        continue;
      }
      --counts[assign[far]];
      assign[far] = c;
      counts[c] = 1;
      counts = recompute();
      ++c;
    }
  };

  auto objective = [&]() {
    double j = 0.0;
    for (std::size_t i = 0; i < n; ++i) j += squared_distance(pts[i], centroids[assign[i]]);
    return j;
  };

  [[maybe_unused]] double last = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 50; ++iter) {
    reseed_empty(recompute());
    const double j = objective();
    assert(j <= last * (1.0 + 1e-12) + 1e-12);
    last = j;
    if (trace) trace(label, iter, j);
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = nearest_centroid(pts[i], centroids);
    if (next == assign) break;
    assign = std::move(next);
  }

  std::vector<Prototype> protos;
  std::vector<double> sq(centroids.size(), 0.0);
  std::vector<int> members(centroids.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    sq[assign[i]] += squared_distance(pts[i], centroids[assign[i]]);
    ++members[assign[i]];
  }
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (members[c] == 0) continue;
    // Equal centroids collapse into one prototype; sums of squares add up
    // because the centre is shared.
    auto dup = std::find_if(protos.begin(), protos.end(),
                            [&](const Prototype& p) { return p.centroid == centroids[c]; });
    if (dup != protos.end()) {
      const double total_sq = dup->spread * dup->spread * dup->member_count + sq[c];
      dup->member_count += members[c];
      dup->spread = std::sqrt(total_sq / dup->member_count);
    } else {
      protos.push_back({label, centroids[c], members[c], std::sqrt(sq[c] / members[c])});
    }
  }
  return protos;
}

}  // namespace detail

// Per-label k-means with k = min(k_max, ceil(n/10), n) and deterministic
// seeding (samples sorted lexicographically, evenly spaced picks). Labels
// appear in order of first occurrence.
inline std::vector<Prototype> cluster_prototypes(const std::vector<LabeledSample>& samples, int k_max = 4,
                                                 const ClusterTrace& trace = {}) {
  if (samples.empty()) throw Error("no samples to cluster");
  if (k_max < 1) throw Error("k_max must be at least 1");
  std::vector<std::string> order;
  std::map<std::string, std::vector<FeatureVector>> by_label;
  for (const auto& s : samples) {
    auto [it, inserted] = by_label.try_emplace(s.label);
    if (inserted) order.push_back(s.label);
    it->second.push_back(s.features);
  }
  std::vector<Prototype> out;
  for (const auto& label : order) {
    auto protos = detail::cluster_one_label(label, std::move(by_label[label]), k_max, trace);
    out.insert(out.end(), protos.begin(), protos.end());
  }
  return out;
}

enum UnicharFlags : unsigned {
  kIsLower = 0x1,
  kIsDigit = 0x2,
  kIsPunct = 0x4,
};

struct UnicharEntry {
  std::string glyph;
  unsigned flags = 0;
  int count = 0;

  friend bool operator==(const UnicharEntry&, const UnicharEntry&) = default;
};

struct Unicharset {
  std::vector<UnicharEntry> entries;

  const UnicharEntry* find(const std::string& glyph) const {
    for (const auto& e : entries)
      if (e.glyph == glyph) return &e;
    return nullptr;
  }
  int total() const {
    int t = 0;
    for (const auto& e : entries) t += e.count;
    return t;
  }
  friend bool operator==(const Unicharset&, const Unicharset&) = default;
};

// Letter case for the Latin, Greek and Cyrillic blocks; other scripts are
// treated as caseless letters.
inline bool is_lowercase_letter(char32_t c) {
  if (c >= U'a' && c <= U'z') return true;
  if (c >= 0xDF && c <= 0xFF) return c != 0xF7;
  if (c >= 0x100 && c <= 0x17F) return c % 2 == 1;
  if (c >= 0x3AC && c <= 0x3CE) return true;
  if (c >= 0x430 && c <= 0x45F) return true;
  return false;
}

inline bool is_letter(char32_t c) {
  if (is_lowercase_letter(c)) return true;
  if (c >= U'A' && c <= U'Z') return true;
  if (c >= 0xC0 && c <= 0xDE) return c != 0xD7;
  if (c >= 0x100 && c <= 0x17F) return true;
  if (c >= 0x386 && c <= 0x3AB) return true;
  if (c >= 0x400 && c <= 0x42F) return true;
  return c >= 0x4E00 && c <= 0x9FFF;
}

inline unsigned unichar_flags(const std::string& glyph) {
  std::size_t pos = 0;
  const auto cp = utf8::decode_one(glyph, pos);
  if (!cp) return 0;
  if (is_lowercase_letter(*cp)) return kIsLower;
  if (*cp >= U'0' && *cp <= U'9') return kIsDigit;
  if (is_letter(*cp)) return 0;
  return kIsPunct;
}

inline Unicharset build_unicharset(const std::vector<LabeledSample>& samples) {
  if (samples.empty()) throw Error("no samples for unicharset");
  Unicharset uc;
  std::map<std::string, std::size_t> index;
  for (const auto& s : samples) {
    auto [it, inserted] = index.try_emplace(s.label, uc.entries.size());
    if (inserted) uc.entries.push_back({s.label, unichar_flags(s.label), 0});
    ++uc.entries[it->second].count;
  }
  return uc;
}

struct FrequencyEntry {
  std::string glyph;
  double prior = 0.0;

  friend bool operator==(const FrequencyEntry&, const FrequencyEntry&) = default;
};

inline std::vector<FrequencyEntry> build_frequency_table(const Unicharset& uc, int total) {
  if (total <= 0) throw Error("frequency table needs a positive total");
  if (total != uc.total()) throw Error("frequency total does not match unicharset counts");
  std::vector<FrequencyEntry> out;
  for (const auto& e : uc.entries) out.push_back({e.glyph, static_cast<double>(e.count) / total});
  return out;
}

}  // namespace handocr
