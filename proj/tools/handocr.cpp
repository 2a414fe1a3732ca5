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

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "handocr/commands.hpp"
#include "handocr/synth.hpp"

int main(int argc, char** argv) {
  using namespace handocr;
  CLI::App app{"Per-writer handwritten character OCR: label, train, recognize, evaluate."};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);

  cli::MakeboxArgs mb;
  auto* makebox = app.add_subcommand("makebox", "Segment a page into a box file with placeholder labels");
  makebox->add_option("image", mb.image, "PBM/PGM page")->required();
  makebox->add_option("out_box", mb.out_box, "Output .box file")->required();

  cli::TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train a language set for one user");
  train->add_option("--manifest", tr.manifest, "Corpus manifest (TSV)")->required();
  train->add_option("--user", tr.user, "User whose train pages are used")->required();
  train->add_option("--lang", tr.lang, "Language set name")->required();
  train->add_option("--tessdata", tr.tessdata, "Directory holding language sets");
  train->add_option("--words", tr.words, "Word list for word-dawg");
  train->add_option("--freq-words", tr.freq_words, "Frequent word list for freq-dawg");
  train->add_option("--user-words", tr.user_words, "User word list");
  train->add_option("--ambiguities", tr.ambiguities, "Ambiguity table (<source>\\t<target>)");
  train->add_flag("--force", tr.force, "Replace an existing language set");

  cli::RecognizeArgs rc;
  auto* recognize = app.add_subcommand("recognize", "Recognize a page with a language set");
  recognize->add_option("image", rc.image, "PBM/PGM page")->required();
  recognize->add_option("--lang,-l", rc.lang, "Language set name")->required();
  recognize->add_option("--tessdata", rc.tessdata, "Directory holding language sets");
  recognize->add_flag("--dict", rc.dict, "Enable dictionary correction");
  recognize->add_option("--format", rc.format, "text or boxes")->check(CLI::IsMember({"text", "boxes"}));
  recognize->add_option("-o,--output", rc.output, "Output file (default stdout)");

  cli::EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score test pages: SC/Misc/SF/Rej report");
  eval->add_option("--manifest", ev.manifest, "Corpus manifest (TSV)")->required();
  eval->add_option("--user", ev.user, "Evaluate only this user");
  eval->add_option("--lang", ev.lang, "Language set (default: the user name)");
  eval->add_option("--tessdata", ev.tessdata, "Directory holding language sets");
  eval->add_flag("--dict", ev.dict, "Enable dictionary correction");
  eval->add_option("-o,--output", ev.output, "Report file (default stdout)");
  eval->add_option("--tsv", ev.tsv, "Also write a TSV summary");
  eval->add_option("--svg", ev.svg, "Also write a per-glyph bar chart");

  cli::ServeArgs sv;
  auto* serve = app.add_subcommand("serve", "Serve the labeler HTTP API for a corpus directory");
  serve->add_option("corpus", sv.corpus, "Directory of pages and box files")->required();
  serve->add_option("--host", sv.host, "Bind address");
  serve->add_option("--port", sv.port, "Port");
  serve->add_option("--assets", sv.assets, "Static labeler UI assets");

  std::string synth_out;
  std::string synth_users = "user1";
  std::uint64_t synth_seed = 1;
  auto* synth = app.add_subcommand("synth", "Write a synthetic handwriting corpus");
  synth->add_option("out_dir", synth_out, "Output directory")->required();
  synth->add_option("--users", synth_users, "Comma-separated user names");
  synth->add_option("--seed", synth_seed, "Random seed");

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  if (!config_path.empty()) {
    try {
      cfg = load_run_config(config_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return cli::kFailure;
    }
  }

  if (*makebox) return cli::cmd_makebox(mb, cfg, std::cout, std::cerr);
  if (*train) return cli::cmd_train(tr, cfg, std::cout, std::cerr);
  if (*recognize) return cli::cmd_recognize(rc, cfg, std::cout, std::cerr);
  if (*eval) return cli::cmd_eval(ev, cfg, std::cout, std::cerr);
  if (*serve) return cli::cmd_serve(sv, cfg, std::cout, std::cerr);
  if (*synth) {
    return cli::run_guarded(std::cerr, [&] {
      std::vector<std::string> users;
      std::stringstream ss(synth_users);
      for (std::string u; std::getline(ss, u, ',');)
        if (!u.empty()) users.push_back(u);
      const auto manifest = synth::write_corpus(synth_out, users, synth_seed);
      std::cout << "wrote " << manifest.string() << "\n";
      return cli::kOk;
    });
  }
  return cli::kFailure;
}
