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
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "handocr/boxfile.hpp"
#include "handocr/geometry.hpp"
#include "handocr/recognizer.hpp"

namespace handocr {

// One predicted character box as seen by the evaluator.
struct Prediction {
  Rect box;
  std::optional<std::string> glyph;  // nullopt = REJECT
  bool in_rejected_word = false;
};

inline std::vector<Prediction> predictions_from(const RecognizedPage& rp) {
  std::vector<Prediction> out;
  for (const auto& line : rp.lines)
    for (const auto& w : line)
      for (const auto& g : w.glyphs) out.push_back({g.box, g.glyph, w.rejected_word});
  return out;
}

enum class TruthStatus { kMatched, kUnderSegmented, kUnmatched };

struct Alignment {
  std::vector<std::optional<std::size_t>> truth_to_prediction;
  std::vector<TruthStatus> status;
};

inline constexpr double kMatchIou = 0.5;

// Greedy one-to-one matching by descending IoU (ties by truth index, then
// prediction index); pairs under IoU 0.5 are never matched. An unmatched
// truth box is under-segmented when some prediction covers at least half of
// it and at least half of another truth box.
inline Alignment align_boxes(const std::vector<Prediction>& predicted, const BoxFile& truth) {
  const auto& gt = truth.boxes;
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t t = 0; t < gt.size(); ++t)
    for (std::size_t p = 0; p < predicted.size(); ++p) {
      const double v = iou(gt[t].rect, predicted[p].box);
      if (v >= kMatchIou) pairs.emplace_back(v, t, p);
    }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
  });
  Alignment al;
  al.truth_to_prediction.assign(gt.size(), std::nullopt);
  al.status.assign(gt.size(), TruthStatus::kUnmatched);
  std::vector<char> used(predicted.size(), 0);
  for (const auto& [v, t, p] : pairs) {
    if (al.truth_to_prediction[t] || used[p]) continue;
    al.truth_to_prediction[t] = p;
    al.status[t] = TruthStatus::kMatched;
    used[p] = 1;
  }

  auto half_covered = [](const Rect& cover, const Rect& box) {
    return 2 * intersection_area(cover, box) >= box.area();
  };
  for (std::size_t t = 0; t < gt.size(); ++t) {
    if (al.status[t] != TruthStatus::kUnmatched) continue;
    for (const auto& pred : predicted) {
      if (!half_covered(pred.box, gt[t].rect)) continue;
      bool spans_other = false;
      for (std::size_t o = 0; o < gt.size() && !spans_other; ++o)
        spans_other = o != t && half_covered(pred.box, gt[o].rect);
      if (spans_other) {
        al.status[t] = TruthStatus::kUnderSegmented;
        break;
      }
    }
  }
  return al;
}

// c_t + c_m + c_s + c_r == total always holds.
struct EvalCounts {
  long c_t = 0;  // true classifications
  long c_m = 0;  // misclassifications
  long c_s = 0;  // under-segmented truth characters
  long c_r = 0;  // rejected truth characters
  long total = 0;

  EvalCounts& operator+=(const EvalCounts& o) {
    c_t += o.c_t;
    c_m += o.c_m;
    c_s += o.c_s;
    c_r += o.c_r;
    total += o.total;
    return *this;
  }
  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

enum class Outcome { kCorrect, kMisclassified, kUnderSegmented, kRejected };

inline std::vector<Outcome> classify_outcomes(const Alignment& al, const std::vector<Prediction>& predicted,
                                              const BoxFile& truth) {
  std::vector<Outcome> out;
  out.reserve(truth.boxes.size());
  for (std::size_t t = 0; t < truth.boxes.size(); ++t) {
    switch (al.status[t]) {
      case TruthStatus::kUnderSegmented:
        out.push_back(Outcome::kUnderSegmented);
        break;
      case TruthStatus::kUnmatched:
        out.push_back(Outcome::kRejected);
        break;
      case TruthStatus::kMatched: {
        const auto& p = predicted[*al.truth_to_prediction[t]];
        if (!p.glyph || p.in_rejected_word) out.push_back(Outcome::kRejected);
        else if (*p.glyph == truth.boxes[t].label) out.push_back(Outcome::kCorrect);
        else out.push_back(Outcome::kMisclassified);
        break;
      }
    }
  }
  return out;
}

inline void tally(EvalCounts& c, Outcome o) {
  ++c.total;
  switch (o) {
    case Outcome::kCorrect: ++c.c_t; break;
    case Outcome::kMisclassified: ++c.c_m; break;
    case Outcome::kUnderSegmented: ++c.c_s; break;
    case Outcome::kRejected: ++c.c_r; break;
  }
}

inline EvalCounts count_outcomes(const Alignment& al, const std::vector<Prediction>& predicted,
                                 const BoxFile& truth) {
  EvalCounts c;
  for (auto o : classify_outcomes(al, predicted, truth)) tally(c, o);
  return c;
}

// SC, Misc and SF are shares of the non-rejected population c_t+c_m+c_s and
// so always sum to 100. Rej is a share of all truth characters.
struct Percentages {
  std::optional<double> sc;
  std::optional<double> misc;
  std::optional<double> sf;
  std::optional<double> rej;
};

inline Percentages accuracy(const EvalCounts& c) {
  Percentages p;
  const long base = c.c_t + c.c_m + c.c_s;
  if (base > 0) {
    p.sc = 100.0 * c.c_t / base;
    p.misc = 100.0 * c.c_m / base;
    p.sf = 100.0 * c.c_s / base;
  }
  if (c.total > 0) p.rej = 100.0 * c.c_r / c.total;
  return p;
}

struct EvalReport {
  std::map<int, EvalCounts> per_dataset;
  EvalCounts overall;
  std::map<std::string, EvalCounts> per_glyph;

  // Aligns one page and folds its outcomes into the report.
  void add_page(int dataset, const std::vector<Prediction>& predicted, const BoxFile& truth) {
    const auto al = align_boxes(predicted, truth);
    const auto outcomes = classify_outcomes(al, predicted, truth);
    auto& ds = per_dataset[dataset];
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
      tally(ds, outcomes[t]);
      tally(overall, outcomes[t]);
      tally(per_glyph[truth.boxes[t].label], outcomes[t]);
    }
  }
};

namespace detail {

inline std::string pct(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

inline std::string pad_left(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

inline std::string pad_right(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

}  // namespace detail

// Text report: per user a Dataset-1 / Dataset-2 / Overall table of
// SC/Misc/SF/Rej percentages, then a per-glyph outcome table.
inline std::string render_report(const std::vector<std::pair<std::string, EvalReport>>& reports) {
  using detail::pad_left;
  using detail::pad_right;
  using detail::pct;
  std::string out;
  for (std::size_t u = 0; u < reports.size(); ++u) {
    const auto& [user, rep] = reports[u];
    if (u) out += '\n';
    out += "Recognition performance of " + user + "\n";
    out += pad_right("", 6) + pad_left("Dataset-1", 11) + pad_left("Dataset-2", 11) + pad_left("Overall", 11) + "\n";
    std::optional<Percentages> cols[3];
    for (int d = 1; d <= 2; ++d)
      if (auto it = rep.per_dataset.find(d); it != rep.per_dataset.end()) cols[d - 1] = accuracy(it->second);
    if (rep.overall.total > 0) cols[2] = accuracy(rep.overall);
    const std::pair<const char*, std::optional<double> Percentages::*> rows[] = {
        {"SC", &Percentages::sc}, {"Misc", &Percentages::misc}, {"SF", &Percentages::sf}, {"Rej", &Percentages::rej}};
    for (const auto& [name, field] : rows) {
      out += pad_right(name, 6);
      for (const auto& col : cols) out += pad_left(col ? pct((*col).*field) : "n/a", 11);
      out += '\n';
    }
    out += pad_right("Total", 6);
    for (int d = 1; d <= 2; ++d) {
      auto it = rep.per_dataset.find(d);
      out += pad_left(it == rep.per_dataset.end() ? "n/a" : std::to_string(it->second.total), 11);
    }
    out += pad_left(std::to_string(rep.overall.total), 11) + "\n";

    out += "\nPer-glyph outcomes of " + user + "\n";
    out += pad_right("glyph", 6) + pad_left("total", 7) + pad_left("SC", 6) + pad_left("Misc", 6) +
           pad_left("SF", 6) + pad_left("Rej", 6) + pad_left("SC%", 9) + "\n";
    for (const auto& [glyph, c] : rep.per_glyph) {
      out += glyph + std::string(5, ' ');
      out += pad_left(std::to_string(c.total), 7) + pad_left(std::to_string(c.c_t), 6) +
             pad_left(std::to_string(c.c_m), 6) + pad_left(std::to_string(c.c_s), 6) +
             pad_left(std::to_string(c.c_r), 6) + pad_left(pct(accuracy(c).sc), 9) + "\n";
    }
  }
  return out;
}

// Columns: user dataset sc misc sf rej c_t c_m c_s c_r total.
inline std::string render_tsv(const std::vector<std::pair<std::string, EvalReport>>& reports) {
  std::string out = "user\tdataset\tsc\tmisc\tsf\trej\tc_t\tc_m\tc_s\tc_r\ttotal\n";
  auto row = [&](const std::string& user, const std::string& ds, const EvalCounts& c) {
    const auto p = accuracy(c);
    out += user + '\t' + ds + '\t' + detail::pct(p.sc) + '\t' + detail::pct(p.misc) + '\t' + detail::pct(p.sf) +
           '\t' + detail::pct(p.rej) + '\t' + std::to_string(c.c_t) + '\t' + std::to_string(c.c_m) + '\t' +
           std::to_string(c.c_s) + '\t' + std::to_string(c.c_r) + '\t' + std::to_string(c.total) + '\n';
  };
  for (const auto& [user, rep] : reports) {
    for (const auto& [ds, c] : rep.per_dataset) row(user, std::to_string(ds), c);
    row(user, "overall", rep.overall);
  }
  return out;
}

// Stacked bar per glyph: success, misclassification, segmentation failure
// and rejection as shares of that glyph's truth count.
inline std::string render_glyph_svg(const EvalReport& rep) {
  constexpr int kBar = 18, kGap = 6, kHeight = 200, kMargin = 30;
  const int width = kMargin * 2 + static_cast<int>(rep.per_glyph.size()) * (kBar + kGap);
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
                    "\" height=\"" + std::to_string(kHeight + 2 * kMargin) + "\">\n";
  static constexpr const char* kColors[] = {"#2e7d32", "#c62828", "#ef6c00", "#757575"};
  char buf[256];
  int x = kMargin;
  for (const auto& [glyph, c] : rep.per_glyph) {
    const long parts[] = {c.c_t, c.c_m, c.c_s, c.c_r};
    double y = kMargin + kHeight;
    for (int k = 0; k < 4; ++k) {
      if (c.total == 0 || parts[k] == 0) continue;
      const double h = static_cast<double>(kHeight) * parts[k] / c.total;
      y -= h;
      std::snprintf(buf, sizeof buf, "<rect x=\"%d\" y=\"%.2f\" width=\"%d\" height=\"%.2f\" fill=\"%s\"/>\n", x, y,
                    kBar, h, kColors[k]);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\">", x + kBar / 2,
                  kMargin + kHeight + 16);
    out += buf;
    for (char ch : glyph) {
      if (ch == '<') out += "&lt;";
      else if (ch == '&') out += "&amp;";
      else if (ch == '>') out += "&gt;";
      else out += ch;
    }
    out += "</text>\n";
    x += kBar + kGap;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace handocr
