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

#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "handocr/config.hpp"
#include "handocr/corpus.hpp"
#include "handocr/error.hpp"
#include "handocr/evaluator.hpp"
#include "handocr/labeler_server.hpp"
#include "handocr/language_set.hpp"
#include "handocr/recognizer.hpp"

// Command implementations behind the `handocr` binary. Each returns the
// process exit status and reports through the given streams.
namespace handocr::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kPlaceholders = 2,
  kNameCollision = 3,
};

inline int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const PlaceholderLabels& e) {
    err << "error: " << e.what() << "\n";
    return kPlaceholders;
  } catch (const LanguageSetExists& e) {
    err << "error: " << e.what() << "\n";
    return kNameCollision;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

inline void write_output(const std::optional<std::string>& path, const std::string& content, std::ostream& out) {
  if (path) write_file(*path, content);
  else out << content;
}

struct MakeboxArgs {
  std::string image;
  std::string out_box;
};

inline int cmd_makebox(const MakeboxArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const auto page = load_binarized(a.image);
    const auto bf = LabelerService::placeholder_boxes(page, cfg.segmenter);
    write_file(a.out_box, serialize_boxfile(bf));
    out << "wrote " << bf.boxes.size() << " boxes to " << a.out_box << "\n";
    return kOk;
  });
}

struct TrainArgs {
  std::string manifest;
  std::string user;
  std::string lang;
  std::string tessdata = "tessdata";
  std::optional<std::string> words;
  std::optional<std::string> freq_words;
  std::optional<std::string> user_words;
  std::optional<std::string> ambiguities;
  bool force = false;
};

inline int cmd_train(const TrainArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const auto manifest = load_manifest(a.manifest);
    TrainOptions opt;
    opt.user = a.user;
    opt.name = a.lang;
    opt.tessdata = a.tessdata;
    opt.force = a.force;
    opt.config = cfg;
    if (a.words) opt.words = parse_wordlist(read_file(*a.words));
    if (a.freq_words) opt.frequent_words = parse_wordlist(read_file(*a.freq_words));
    if (a.user_words) opt.user_words = parse_wordlist(read_file(*a.user_words));
    if (a.ambiguities) opt.ambiguities = parse_ambiguities(read_file(*a.ambiguities));
    const auto summary = train_user(manifest, opt);

    out << "Training samples of " << a.user << "\n";
    long overall = 0;
    for (int d = 1; d <= 2; ++d) {
      auto it = summary.samples_per_dataset.find(d);
      const long n = it == summary.samples_per_dataset.end() ? 0 : it->second;
      overall += n;
      out << "  Dataset-" << d << "  " << n << "\n";
    }
    out << "  Overall    " << overall << "\n";
    out << "Per-class samples\n";
    for (const auto& [glyph, n] : summary.samples_per_class) out << "  " << glyph << " " << n << "\n";
    for (const auto& s : summary.skipped)
      err << "warning: skipped " << s.page << " box " << s.line << ": " << s.reason << "\n";
    const auto& ls = summary.language_set;
    out << "language set '" << ls.name << "': " << ls.unicharset.entries.size() << " glyphs, "
        << ls.prototypes.size() << " prototypes, reject threshold " << format_g9(ls.reject_threshold) << "\n";
    return kOk;
  });
}

struct RecognizeArgs {
  std::string image;
  std::string lang;
  std::string tessdata = "tessdata";
  bool dict = false;
  std::string format = "text";
  std::optional<std::string> output;
};

inline int cmd_recognize(const RecognizeArgs& a, RunConfig cfg, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    if (a.format != "text" && a.format != "boxes") throw Error("format must be text or boxes");
    const auto dir = std::filesystem::path(a.tessdata) / a.lang;
    if (!std::filesystem::is_directory(dir)) throw Error("language set '" + a.lang + "' not found in " + a.tessdata);
    const auto ls = load_language_set(dir);
    if (a.dict) cfg.use_dictionary = true;
    const auto rp = recognize_file(ls, a.image, cfg.recognizer());
    write_output(a.output, emit_output(rp, a.format == "text" ? OutputFormat::kText : OutputFormat::kBoxes), out);
    return kOk;
  });
}

struct EvalArgs {
  std::string manifest;
  std::optional<std::string> user;  // every user in the manifest when absent
  std::optional<std::string> lang;  // defaults to the user name
  std::string tessdata = "tessdata";
  bool dict = false;
  std::optional<std::string> output;
  std::optional<std::string> tsv;
  std::optional<std::string> svg;
};

inline int cmd_eval(const EvalArgs& a, RunConfig cfg, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const auto manifest = load_manifest(a.manifest);
    if (a.dict) cfg.use_dictionary = true;
    std::vector<std::string> users = a.user ? std::vector<std::string>{*a.user} : manifest.users();
    if (a.lang && users.size() != 1) throw Error("--lang needs --user when the manifest has several users");
    std::vector<std::pair<std::string, EvalReport>> reports;
    for (const auto& user : users) {
      const auto ls = load_language_set(std::filesystem::path(a.tessdata) / (a.lang ? *a.lang : user));
      reports.emplace_back(user, evaluate_user(manifest, user, ls, cfg.recognizer()));
    }
    write_output(a.output, render_report(reports), out);
    if (a.tsv) write_file(*a.tsv, render_tsv(reports));
    if (a.svg) {
      if (reports.size() != 1) throw Error("--svg needs a single user");
      write_file(*a.svg, render_glyph_svg(reports.front().second));
    }
    return kOk;
  });
}

struct ServeArgs {
  std::string corpus;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::string> assets;
};

inline int cmd_serve(const ServeArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    LabelerService service(a.corpus, cfg.segmenter);
    httplib::Server server;
    std::optional<std::filesystem::path> assets;
    if (a.assets) assets = *a.assets;
    mount_labeler_routes(server, service, assets);
    if (!server.bind_to_port(a.host, a.port)) throw Error("cannot bind " + a.host + ":" + std::to_string(a.port));
    out << "serving " << a.corpus << " on http://" << a.host << ":" << a.port << "\n" << std::flush;
    server.listen_after_bind();
    return kOk;
  });
}

}  // namespace handocr::cli
