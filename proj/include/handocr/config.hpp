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

#include <string>

#include "json.hpp"

#include "handocr/error.hpp"
#include "handocr/image.hpp"
#include "handocr/recognizer.hpp"
#include "handocr/segmenter.hpp"

namespace handocr {

inline constexpr const char* kToolkitVersion = "handocr 0.1.0";

// Every tunable of a run. A snapshot is stored in each language set's meta.
struct RunConfig {
  SegmenterConfig segmenter;
  int k_max = 4;
  double reject_multiplier = 1.5;
  double reject_word_fraction = 0.5;
  bool use_dictionary = false;
  double frequent_fraction = 0.1;

  RecognizerConfig recognizer() const { return {segmenter, reject_word_fraction, use_dictionary}; }

  void validate() const {
    auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
    if (segmenter.min_ink < 1 || segmenter.min_ink > 10000) throw Error("config: min_ink must be in [1, 10000]");
    if (!in(segmenter.merge_overlap, 0.0, 1.0)) throw Error("config: merge_overlap must be in [0, 1]");
    if (!in(segmenter.merge_gap, 0.0, 10.0)) throw Error("config: merge_gap must be in [0, 10]");
    if (!in(segmenter.line_band, 0.0, 10.0)) throw Error("config: line_band must be in [0, 10]");
    if (!in(segmenter.word_gap_factor, 0.0, 10.0)) throw Error("config: word_gap_factor must be in [0, 10]");
    if (k_max < 1 || k_max > 64) throw Error("config: k_max must be in [1, 64]");
    if (!in(reject_multiplier, 1e-3, 1e3)) throw Error("config: reject_multiplier must be in [0.001, 1000]");
    if (!in(reject_word_fraction, 0.0, 1.0)) throw Error("config: reject_word_fraction must be in [0, 1]");
    if (!in(frequent_fraction, 0.0, 1.0)) throw Error("config: frequent_fraction must be in [0, 1]");
  }
};

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["min_ink"] = c.segmenter.min_ink;
  j["merge_overlap"] = c.segmenter.merge_overlap;
  j["merge_gap"] = c.segmenter.merge_gap;
  j["line_band"] = c.segmenter.line_band;
  j["word_gap_factor"] = c.segmenter.word_gap_factor;
  j["k_max"] = c.k_max;
  j["reject_multiplier"] = c.reject_multiplier;
  j["reject_word_fraction"] = c.reject_word_fraction;
  j["use_dictionary"] = c.use_dictionary;
  j["frequent_fraction"] = c.frequent_fraction;
  return j;
}

// Missing keys keep their defaults; unknown keys are an error.
inline RunConfig run_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("config: expected a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "min_ink") c.segmenter.min_ink = value.get<int>();
      else if (key == "merge_overlap") c.segmenter.merge_overlap = value.get<double>();
      else if (key == "merge_gap") c.segmenter.merge_gap = value.get<double>();
      else if (key == "line_band") c.segmenter.line_band = value.get<double>();
      else if (key == "word_gap_factor") c.segmenter.word_gap_factor = value.get<double>();
      else if (key == "k_max") c.k_max = value.get<int>();
      else if (key == "reject_multiplier") c.reject_multiplier = value.get<double>();
      else if (key == "reject_word_fraction") c.reject_word_fraction = value.get<double>();
      else if (key == "use_dictionary") c.use_dictionary = value.get<bool>();
      else if (key == "frequent_fraction") c.frequent_fraction = value.get<double>();
      else throw Error("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  try {
    return run_config_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace handocr
