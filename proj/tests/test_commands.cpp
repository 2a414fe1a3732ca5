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

#include <gtest/gtest.h>

#include <sstream>

#include "handocr/commands.hpp"
#include "test_support.hpp"

namespace handocr {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct CmdRun {
  int code;
  std::string out;
  std::string err;
};

template <typename F>
CmdRun run(F&& f) {
  std::ostringstream out, err;
  const int code = f(out, err);
  return {code, out.str(), err.str()};
}

// A noise-free corpus: every page is a clean rendering, so recognition is
// exact and any failure points at plumbing.
class CleanCorpus : public ::testing::Test {
 protected:
  void SetUp() override {
    add("u1", "train", 1, "alpha", {"abcdefghijklm", "nopqrstuvwxyz"});
    add("u1", "train", 2, "free", {"the quick brown fox", "jumps over a lazy dog"});
    add("u1", "test", 1, "iso", {"zyxwvutsrqpon", "mlkjihgfedcba"});
    add("u1", "test", 2, "text", {"a lazy dog jumps"});
    write_file((dir_ / "manifest.tsv").string(), manifest_);
  }

  void add(const std::string& user, const std::string& role, int dataset, const std::string& stem,
           const std::vector<std::string>& lines) {
    const auto page = testing::render_text(lines);
    write_file((dir_ / (stem + ".pbm")).string(), encode_pbm_p4(page));
    write_file((dir_ / (stem + ".box")).string(), serialize_boxfile(testing::truth_for_text(page, lines)));
    manifest_ += user + "\t" + role + "\t" + std::to_string(dataset) + "\t" + stem + ".pbm\t" + stem + ".box\n";
  }

  CmdRun train(bool force = false) {
    cli::TrainArgs a;
    a.manifest = (dir_ / "manifest.tsv").string();
    a.user = "u1";
    a.lang = "u1";
    a.tessdata = (dir_ / "tessdata").string();
    a.force = force;
    return run([&](auto& o, auto& e) { return cli::cmd_train(a, RunConfig{}, o, e); });
  }

  CmdRun recognize(const std::string& image, bool dict = false, const std::string& format = "text") {
    cli::RecognizeArgs a;
    a.image = (dir_ / image).string();
    a.lang = "u1";
    a.tessdata = (dir_ / "tessdata").string();
    a.dict = dict;
    a.format = format;
    return run([&](auto& o, auto& e) { return cli::cmd_recognize(a, RunConfig{}, o, e); });
  }

  CmdRun eval(std::optional<std::string> tsv = {}, std::optional<std::string> svg = {}) {
    cli::EvalArgs a;
    a.manifest = (dir_ / "manifest.tsv").string();
    a.tessdata = (dir_ / "tessdata").string();
    a.tsv = tsv;
    a.svg = svg;
    return run([&](auto& o, auto& e) { return cli::cmd_eval(a, RunConfig{}, o, e); });
  }

  TempDir tmp_{"cmd"};
  fs::path dir_ = tmp_.path();
  std::string manifest_ = "user\trole\tdataset\timage\tbox\n";
};

TEST(Makebox, BlankPageGivesEmptyBoxFile) {
  TempDir tmp("mb");
  write_file((tmp / "blank.pbm").string(), encode_pbm_p4(PageImage(60, 40)));
  const auto r = run([&](auto& o, auto& e) {
    return cli::cmd_makebox({(tmp / "blank.pbm").string(), (tmp / "blank.box").string()}, RunConfig{}, o, e);
  });
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(read_file((tmp / "blank.box").string()), "");
}

TEST(Makebox, ThreeGlyphsGiveThreePlaceholders) {
  TempDir tmp("mb");
  const auto page = testing::render_text({"abc"});
  write_file((tmp / "abc.pgm").string(), encode_pgm_p5(PageImage::from_gray(page.width(), page.height(), [&] {
    std::vector<std::uint8_t> g;
    for (int y = 0; y < page.height(); ++y)
      for (int x = 0; x < page.width(); ++x) g.push_back(page.ink(x, y) ? 20 : 230);
    return g;
  }())));
  const auto r = run([&](auto& o, auto& e) {
    return cli::cmd_makebox({(tmp / "abc.pgm").string(), (tmp / "abc.box").string()}, RunConfig{}, o, e);
  });
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto bf = load_boxfile((tmp / "abc.box").string());
  ASSERT_EQ(bf.boxes.size(), 3u);
  for (const auto& b : bf.boxes) EXPECT_EQ(b.label, "*");
  EXPECT_EQ(bf, testing::truth_for_text(page, {"***"}));
}

TEST(Makebox, UnreadableImageFails) {
  const auto r = run([&](auto& o, auto& e) {
    return cli::cmd_makebox({"/nonexistent/x.pbm", "/nonexistent/x.box"}, RunConfig{}, o, e);
  });
  EXPECT_EQ(r.code, cli::kFailure);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST_F(CleanCorpus, TrainWritesLanguageSetAndCounts) {
  const auto r = train();
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  for (const char* f : kLanguageSetFiles) EXPECT_TRUE(fs::exists(dir_ / "tessdata" / "u1" / f)) << f;
  EXPECT_NE(r.out.find("Dataset-1  26"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("Dataset-2  33"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("Overall    59"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("  o 5\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("26 glyphs"), std::string::npos);
}

TEST_F(CleanCorpus, TrainRefusesExistingNameWithoutForce) {
  ASSERT_EQ(train().code, cli::kOk);
  const auto again = train();
  EXPECT_EQ(again.code, cli::kNameCollision);
  EXPECT_NE(again.err.find("--force"), std::string::npos);
  EXPECT_EQ(train(true).code, cli::kOk);
}

TEST_F(CleanCorpus, TrainRefusesPlaceholders) {
  auto bf = load_boxfile((dir_ / "free.box").string());
  bf.boxes[2].label = "*";
  write_file((dir_ / "free.box").string(), serialize_boxfile(bf));
  const auto r = train();
  EXPECT_EQ(r.code, cli::kPlaceholders);
  EXPECT_NE(r.err.find("free.box:3"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "tessdata" / "u1"));
}

TEST_F(CleanCorpus, RecognizeOwnTrainingPage) {
  ASSERT_EQ(train().code, cli::kOk);
  const auto r = recognize("free.pbm");
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.out, "the quick brown fox\njumps over a lazy dog\n");
  const auto boxes = recognize("free.pbm", false, "boxes");
  EXPECT_EQ(parse_boxfile(boxes.out), load_boxfile((dir_ / "free.box").string()));
  write_file((dir_ / "blank.pbm").string(), encode_pbm_p4(PageImage(50, 50)));
  const auto blank = recognize("blank.pbm");
  EXPECT_EQ(blank.code, cli::kOk);
  EXPECT_EQ(blank.out, "");
  EXPECT_EQ(recognize("free.pbm", false, "json").code, cli::kFailure);
}

TEST_F(CleanCorpus, RecognizeNeedsLanguageSet) {
  const auto r = recognize("free.pbm");
  EXPECT_EQ(r.code, cli::kFailure);
  EXPECT_NE(r.err.find("not found"), std::string::npos);
}

TEST_F(CleanCorpus, DictFlagReachesRecognizer) {
  // Stored set that lacks 'o' and accepts anything within a wide radius.
  auto ls = testing::train_on_text({"the quick brwn fx", "jumps ver a lazy dg"}, "u1");
  ls.reject_threshold = 100;
  ls.word_dawg = build_dawg({"dog"});
  ls.freq_dawg = build_dawg({"dog"});
  assemble_language_set(ls, dir_ / "tessdata");
  write_file((dir_ / "dog.pbm").string(), encode_pbm_p4(testing::render_text({"dog"})));
  EXPECT_NE(recognize("dog.pbm").out, "dog\n");
  EXPECT_EQ(recognize("dog.pbm", true).out, "dog\n");
}

TEST_F(CleanCorpus, EvalPerfectCorpus) {
  ASSERT_EQ(train().code, cli::kOk);
  const auto r = eval((dir_ / "r.tsv").string(), (dir_ / "r.svg").string());
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("SC         100.00     100.00     100.00"), std::string::npos) << r.out;
  const auto tsv = read_file((dir_ / "r.tsv").string());
  EXPECT_NE(tsv.find("u1\toverall\t100.00\t0.00\t0.00\t0.00\t39\t0\t0\t0\t39"), std::string::npos) << tsv;
  EXPECT_EQ(read_file((dir_ / "r.svg").string()).rfind("<svg", 0), 0u);
  EXPECT_EQ(eval().out, r.out);
}

TEST_F(CleanCorpus, EvalSeesPlantedWrongLabel) {
  ASSERT_EQ(train().code, cli::kOk);
  auto bf = load_boxfile((dir_ / "text.box").string());
  bf.boxes[0].label = "q";
  write_file((dir_ / "text.box").string(), serialize_boxfile(bf));
  const auto r = eval((dir_ / "r.tsv").string());
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_NE(read_file((dir_ / "r.tsv").string()).find("u1\t2\t92.31\t7.69\t0.00\t0.00\t12\t1\t0\t0\t13"),
            std::string::npos);
}

TEST_F(CleanCorpus, EvalNeedsGroundTruth) {
  ASSERT_EQ(train().code, cli::kOk);
  fs::remove(dir_ / "text.box");
  const auto r = eval();
  EXPECT_EQ(r.code, cli::kFailure);
}

TEST(Config, LoadsOverridesFromFile) {
  TempDir tmp("cfg");
  write_file((tmp / "c.json").string(), R"({"k_max": 2, "word_gap_factor": 0.8})");
  const auto c = load_run_config((tmp / "c.json").string());
  EXPECT_EQ(c.k_max, 2);
  EXPECT_DOUBLE_EQ(c.segmenter.word_gap_factor, 0.8);
  EXPECT_EQ(c.segmenter.min_ink, 4);
  write_file((tmp / "bad.json").string(), "{");
  EXPECT_THROW(load_run_config((tmp / "bad.json").string()), Error);
}

}  // namespace
}  // namespace handocr
