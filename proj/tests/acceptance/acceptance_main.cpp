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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Each check compares against an independent oracle or a
// hand-derived value; timings are wall clock.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "handocr/handocr.hpp"
#include "../oracles.hpp"
#include "../scenarios.hpp"
#include "../test_support.hpp"

namespace {

using namespace handocr;
namespace fs = std::filesystem;

struct Result {
  bool pass = true;
  std::string detail;
};

// Records the first failure; later checks still run so the detail line
// reports the earliest problem.
struct Check {
  Result r;
  void expect(bool ok, const std::string& what) {
    if (!ok && r.pass) {
      r.pass = false;
      r.detail = what;
    }
  }
};

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<Result()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Result r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0 && secs > budget_s && r.pass) r = {false, "took longer than " + std::to_string(budget_s) + " s"};
  if (!r.pass) ++failures;
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.3f s", secs);
  std::cout << (r.pass ? "PASS" : "FAIL") << "  " << name << "  (" << timing << ")";
  if (!r.detail.empty()) std::cout << "  " << r.detail;
  std::cout << std::endl;
}

Result report_closure() {
  Check c;
  std::mt19937_64 rng(2024);
  int defined = 0;
  for (int i = 0; i < 1000; ++i) {
    EvalCounts k;
    k.c_t = rng() % 2000;
    k.c_m = rng() % 300;
    k.c_s = rng() % 50;
    k.c_r = rng() % 200;
    if (i % 50 == 0) k.c_t = k.c_m = k.c_s = 0;
    k.total = k.c_t + k.c_m + k.c_s + k.c_r;
    EvalReport rep;
    rep.per_dataset[1] = k;
    rep.overall = k;
    const auto row = render_tsv({{"w", rep}});
    c.expect(k.c_t + k.c_m + k.c_s + k.c_r == k.total, "count tuple does not sum");
    const auto p = accuracy(k);
    if (!p.sc) continue;
    ++defined;
    c.expect(std::abs(*p.sc + *p.misc + *p.sf - 100.0) <= 0.01, "SC+Misc+SF off 100 at tuple " + std::to_string(i));
    // The rendered two-decimal figures close too.
    std::istringstream in(row.substr(row.find('\n') + 1));
    std::string user, ds;
    double sc, misc, sf;
    in >> user >> ds >> sc >> misc >> sf;
    c.expect(std::abs(sc + misc + sf - 100.0) <= 0.01 + 1e-9, "rendered row off 100 at tuple " + std::to_string(i));
  }
  c.r.detail = std::to_string(defined) + " defined rows";
  return c.r;
}

Result synthetic_end_to_end() {
  Check c;
  testing::TempDir tmp("accept_e2e");
  const auto manifest_path = synth::write_corpus(tmp / "corpus", {"writer"}, 20240601);
  const auto manifest = load_manifest(manifest_path);
  TrainOptions opt;
  opt.user = "writer";
  opt.name = "writer";
  opt.tessdata = tmp / "tessdata";
  const auto summary = train_user(manifest, opt);
  const auto report = evaluate_user(manifest, "writer", summary.language_set, RunConfig{}.recognizer());
  const auto p = accuracy(report.per_dataset.at(1));
  c.expect(p.sc.has_value(), "dataset-1 has no scored glyphs");
  if (!p.sc) return c.r;
  c.expect(*p.sc >= 95.0, "dataset-1 SC below 95");
  c.expect(*p.sf + *p.rej <= 3.0, "dataset-1 SF+Rej above 3");
  char buf[160];
  std::snprintf(buf, sizeof buf, "dataset-1 SC %.2f Misc %.2f SF %.2f Rej %.2f", *p.sc, *p.misc, *p.sf, *p.rej);
  const auto p2 = accuracy(report.per_dataset.at(2));
  if (p2.sc) {
    const auto len = std::strlen(buf);
    std::snprintf(buf + len, sizeof buf - len, "; dataset-2 SC %.2f", *p2.sc);
  }
  if (c.r.pass) c.r.detail = buf;
  else c.r.detail += std::string(" (") + buf + ")";
  return c.r;
}

Result dawg_equivalence() {
  Check c;
  std::mt19937_64 rng(4242);
  int minimality_checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = trial < 25 ? 1 + rng() % 100 : 1 + rng() % 1000;
    const auto words = oracle::random_words(rng, n, 12, trial % 3 == 0 ? 'd' : 'z');
    const std::set<std::string> expected(words.begin(), words.end());
    const auto d = build_dawg(words);
    const auto got = d.words();
    c.expect(got.size() == expected.size() && std::set<std::string>(got.begin(), got.end()) == expected,
             "language differs from input set in list " + std::to_string(trial));
    if (n <= 100) {
      ++minimality_checked;
      c.expect(d.state_count() == oracle::minimal_state_count(words),
               "state count differs from minimal oracle in list " + std::to_string(trial));
    }
  }
  if (c.r.pass) c.r.detail = "50 lists, minimality on " + std::to_string(minimality_checked);
  return c.r;
}

Result near_matches_brute_force() {
  Check c;
  std::mt19937_64 rng(5151);
  const auto words = oracle::random_words(rng, 100, 6, 'f');
  const std::set<std::string> unique(words.begin(), words.end());
  const auto d = build_dawg(words);
  for (int q = 0; q < 50; ++q) {
    const auto query = q % 5 == 0 ? *std::next(unique.begin(), rng() % unique.size()) : oracle::random_word(rng, 7, 'f');
    std::vector<std::string> expected, got;
    for (const auto& w : unique)
      if (oracle::levenshtein(w, query) <= 1) expected.push_back(w);
    for (const auto& m : d.near_matches(query)) got.push_back(m.word);
    c.expect(got == expected, "mismatch for query '" + query + "'");
  }
  return c.r;
}

Result box_codec() {
  Check c;
  std::mt19937_64 rng(6161);
  for (int i = 0; i < 1000; ++i) {
    const auto bf = oracle::random_boxfile(rng);
    const auto text = serialize_boxfile(bf);
    c.expect(parse_boxfile(text) == bf && serialize_boxfile(parse_boxfile(text)) == text,
             "round trip differs on file " + std::to_string(i));
  }
  // Plant malformed lines at random positions; every diagnostic must name
  // exactly the planted lines.
  const std::vector<std::string> bad = {"ab 1 1 2 2 0", "c 1 x 2 2 0", "d 1 1 2",      "e 3 1 2 2 0",
                                        "f 1 4 2 2 0",  "g 1 1 2 2 -1", "h  1 1 2 2", "\xff 1 1 2 2 0",
                                        "i 1 1 2 2 0 7"};
  for (int i = 0; i < 200; ++i) {
    const auto good = serialize_boxfile(oracle::random_boxfile(rng));
    std::vector<std::string> lines;
    std::istringstream in(good);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    std::set<std::size_t> planted;
    const int n_bad = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < n_bad; ++k) {
      const std::size_t at = rng() % (lines.size() + 1);
      lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(at), bad[rng() % bad.size()]);
      std::set<std::size_t> shifted;
      for (auto p : planted) shifted.insert(p >= at + 1 ? p + 1 : p);
      shifted.insert(at + 1);
      planted = shifted;
    }
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    std::set<std::size_t> reported;
    try {
      parse_boxfile(text);
    } catch (const ParseError& e) {
      for (const auto& d : e.diagnostics()) reported.insert(d.line);
    }
    c.expect(reported == planted, "diagnostic line numbers wrong on file " + std::to_string(i));
  }
  return c.r;
}

Result otsu() {
  Check c;
  std::mt19937_64 rng(7171);
  for (int i = 0; i < 100; ++i) {
    const auto h = oracle::random_histogram(rng);
    c.expect(otsu_threshold(h) == oracle::otsu(h), "threshold differs on histogram " + std::to_string(i));
  }
  return c.r;
}

Result classify() {
  Check c;
  std::mt19937_64 rng(8181);
  for (int i = 0; i < 1000; ++i) {
    const auto ls = oracle::random_set(rng, 2 + static_cast<int>(rng() % 20), 1.0 + (rng() % 300) / 100.0);
    const auto fv = oracle::random_vector(rng);
    const auto [best, best_d] = oracle::nearest_prototype(ls, fv);
    const auto got = classify_glyph(ls, fv);
    c.expect(got.nearest == ls.prototypes[best].label && got.distance == best_d &&
                 got.rejected() == (best_d > ls.reject_threshold),
             "instance " + std::to_string(i) + " differs from exhaustive scan");
  }
  return c.r;
}

Result evaluator_oracle() {
  Check c;
  const auto s = testing::twelve_box_scenario();
  const auto al = align_boxes(s.predicted, s.truth);
  c.expect(classify_outcomes(al, s.predicted, s.truth) == s.expected, "per-box outcomes differ");
  c.expect(count_outcomes(al, s.predicted, s.truth) == testing::twelve_box_counts(), "counts differ from {5,2,2,3,12}");
  const auto text = render_report(testing::sample_reports());
  c.expect(text == render_report(testing::sample_reports()), "report not stable across renders");
  c.expect(text == read_file(HANDOCR_TEST_DATA "/golden_report.txt"), "report differs from golden file");
  c.expect(render_tsv(testing::sample_reports()) == read_file(HANDOCR_TEST_DATA "/golden_report.tsv"),
           "tsv differs from golden file");
  return c.r;
}

// Files of every language set, recognizer output for every test page, and
// the rendered report, concatenated in a fixed order.
std::string pipeline_fingerprint(const fs::path& root) {
  const auto manifest = load_manifest(synth::write_corpus(root / "corpus", {"p", "q"}, 99));
  std::string all;
  std::vector<std::pair<std::string, EvalReport>> reports;
  for (const auto& user : manifest.users()) {
    TrainOptions opt;
    opt.user = user;
    opt.name = user;
    opt.tessdata = root / "tessdata";
    const auto ls = train_user(manifest, opt).language_set;
    for (const char* f : kLanguageSetFiles) all += read_file((root / "tessdata" / user / f).string());
    for (const auto* e : manifest.select(user, Role::kTest)) {
      const auto rp = recognize_file(ls, e->image_path, RunConfig{}.recognizer());
      all += emit_output(rp, OutputFormat::kText) + emit_output(rp, OutputFormat::kBoxes);
    }
    reports.emplace_back(user, evaluate_user(manifest, user, ls, RunConfig{}.recognizer()));
  }
  return all + render_report(reports) + render_tsv(reports);
}

Result determinism() {
  Check c;
  testing::TempDir a("accept_det_a"), b("accept_det_b");
  const auto fa = pipeline_fingerprint(a.path());
  const auto fb = pipeline_fingerprint(b.path());
  c.expect(!fa.empty() && fa == fb, "pipeline outputs differ between runs");
  if (c.r.pass) c.r.detail = std::to_string(fa.size()) + " bytes identical";
  return c.r;
}

}  // namespace

int main() {
  criterion("report closure over 1000 count tuples", 1.0, report_closure);
  criterion("synthetic corpus end to end (SC >= 95, SF+Rej <= 3 on dataset 1)", 30.0, synthetic_end_to_end);
  criterion("DAWG language equals input set and is minimal", 5.0, dawg_equivalence);
  criterion("near_matches equals brute-force edit distance <= 1", 1.0, near_matches_brute_force);
  criterion("box file codec round trip and diagnostic line numbers", 0, box_codec);
  criterion("Otsu threshold equals exhaustive argmax", 1.0, otsu);
  criterion("classify_glyph equals exhaustive nearest prototype", 0, classify);
  criterion("12-box evaluator scenario and golden report", 0, evaluator_oracle);
  criterion("two pipeline runs are byte-identical", 0, determinism);
  std::cout << (failures ? "FAILED: " + std::to_string(failures) + " criteria" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
