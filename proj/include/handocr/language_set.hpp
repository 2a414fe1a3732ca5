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
#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "handocr/dawg.hpp"
#include "handocr/error.hpp"
#include "handocr/features.hpp"
#include "handocr/image.hpp"
#include "handocr/trainer.hpp"

namespace handocr {

// Source sequence -> replacement sequence, applied before dictionary lookup.
struct Ambiguity {
  std::string source;
  std::string target;

  friend bool operator==(const Ambiguity&, const Ambiguity&) = default;
};

// Everything trained for one writer. Persisted as a directory of eight text
// files named after the set.
struct LanguageSet {
  std::string name;
  std::vector<Prototype> prototypes;
  Unicharset unicharset;
  std::vector<FrequencyEntry> freq_table;
  Dawg freq_dawg;
  Dawg word_dawg;
  std::vector<std::string> user_words;
  std::vector<Ambiguity> ambiguities;
  double reject_threshold = 1.0;
  nlohmann::json meta = nlohmann::json::object();

  double prior(const std::string& glyph) const {
    for (const auto& f : freq_table)
      if (f.glyph == glyph) return f.prior;
    return 0.0;
  }

  friend bool operator==(const LanguageSet&, const LanguageSet&) = default;
};

inline constexpr const char* kLanguageSetFiles[] = {"unicharset", "prototypes", "freq-table", "freq-dawg",
                                                    "word-dawg",  "user-words", "ambiguities", "meta"};

class LanguageSetExists : public Error {
 public:
  using Error::Error;
};

inline bool valid_language_name(const std::string& name) {
  if (name.empty() || name.size() > 16) return false;
  for (char c : name)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  return true;
}

namespace detail {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    lines.emplace_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

inline std::vector<std::string> split_on(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto p = line.find(sep, start);
    out.push_back(line.substr(start, p == std::string::npos ? std::string::npos : p - start));
    if (p == std::string::npos) return out;
    start = p + 1;
  }
}

inline double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw Error("");
    return v;
  } catch (const std::exception&) {
    throw Error(where + ": bad number '" + s + "'");
  }
}

inline int parse_count(const std::string& s, const std::string& where) {
  int v = 0;
  if (!parse_int(s, v) || v < 0) throw Error(where + ": bad count '" + s + "'");
  return v;
}

}  // namespace detail

inline std::string serialize_unicharset(const Unicharset& uc) {
  std::string out = std::to_string(uc.entries.size()) + "\n";
  char flags[16];
  for (const auto& e : uc.entries) {
    std::snprintf(flags, sizeof flags, "%x", e.flags);
    out += e.glyph + ' ' + flags + ' ' + std::to_string(e.count) + '\n';
  }
  return out;
}

inline Unicharset parse_unicharset(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw Error("unicharset: empty file");
  const int n = detail::parse_count(lines[0], "unicharset line 1");
  if (static_cast<std::size_t>(n) + 1 != lines.size()) throw Error("unicharset: entry count mismatch");
  Unicharset uc;
  for (int i = 1; i <= n; ++i) {
    const auto where = "unicharset line " + std::to_string(i + 1);
    const auto f = detail::split_on(lines[i], ' ');
    if (f.size() != 3 || !utf8::is_single_scalar(f[0])) throw Error(where + ": malformed entry");
    unsigned flags = 0;
    try {
      std::size_t used = 0;
      flags = static_cast<unsigned>(std::stoul(f[1], &used, 16));
      if (used != f[1].size()) throw Error("");
    } catch (const std::exception&) {
      throw Error(where + ": bad flags");
    }
    const int count = detail::parse_count(f[2], where);
    if (count < 1) throw Error(where + ": count must be positive");
    if (uc.find(f[0])) throw Error(where + ": duplicate glyph");
    uc.entries.push_back({f[0], flags, count});
  }
  return uc;
}

inline std::string serialize_prototypes(const std::vector<Prototype>& protos) {
  std::string out;
  for (const auto& p : protos) {
    out += p.label + ' ' + std::to_string(p.member_count) + ' ' + format_g9(p.spread);
    for (double v : p.centroid) out += ' ' + format_g9(v);
    out += '\n';
  }
  return out;
}

inline std::vector<Prototype> parse_prototypes(std::string_view text) {
  std::vector<Prototype> out;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto where = "prototypes line " + std::to_string(i + 1);
    const auto f = detail::split_on(lines[i], ' ');
    if (f.size() != 3 + kFeatureDim || !utf8::is_single_scalar(f[0])) throw Error(where + ": malformed prototype");
    Prototype p;
    p.label = f[0];
    p.member_count = detail::parse_count(f[1], where);
    if (p.member_count < 1) throw Error(where + ": member count must be positive");
    p.spread = detail::parse_double(f[2], where);
    for (std::size_t d = 0; d < kFeatureDim; ++d) p.centroid[d] = detail::parse_double(f[3 + d], where);
    out.push_back(std::move(p));
  }
  return out;
}

inline std::string serialize_freq_table(const std::vector<FrequencyEntry>& table) {
  std::string out;
  for (const auto& f : table) out += f.glyph + ' ' + detail::format_g17(f.prior) + '\n';
  return out;
}

inline std::vector<FrequencyEntry> parse_freq_table(std::string_view text) {
  std::vector<FrequencyEntry> out;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto where = "freq-table line " + std::to_string(i + 1);
    const auto f = detail::split_on(lines[i], ' ');
    if (f.size() != 2) throw Error(where + ": malformed entry");
    out.push_back({f[0], detail::parse_double(f[1], where)});
  }
  return out;
}

inline std::string serialize_ambiguities(const std::vector<Ambiguity>& ambigs) {
  std::string out;
  for (const auto& a : ambigs) out += a.source + '\t' + a.target + '\n';
  return out;
}

inline std::vector<Ambiguity> parse_ambiguities(std::string_view text) {
  std::vector<Ambiguity> out;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = detail::split_on(lines[i], '\t');
    if (f.size() != 2 || f[0].empty() || !utf8::decode(f[0]) || !utf8::decode(f[1]))
      throw Error("ambiguities line " + std::to_string(i + 1) + ": expected <source>\\t<target>");
    out.push_back({f[0], f[1]});
  }
  return out;
}

// Cross-file consistency: every prototype label is in the unicharset and
// every unicharset glyph has at least one prototype.
inline void check_consistency(const LanguageSet& ls) {
  if (ls.prototypes.empty()) throw Error("language set has no prototypes");
  if (ls.unicharset.entries.empty()) throw Error("language set has an empty unicharset");
  for (const auto& p : ls.prototypes)
    if (!ls.unicharset.find(p.label)) throw Error("prototype label '" + p.label + "' missing from unicharset");
  for (const auto& e : ls.unicharset.entries) {
    const bool covered = std::any_of(ls.prototypes.begin(), ls.prototypes.end(),
                                     [&](const Prototype& p) { return p.label == e.glyph; });
    if (!covered) throw Error("unicharset glyph '" + e.glyph + "' has no prototype");
  }
  if (!(ls.reject_threshold > 0.0) || !std::isfinite(ls.reject_threshold))
    throw Error("reject threshold must be positive and finite");
}

inline LanguageSet load_language_set(const std::filesystem::path& dir) {
  for (const char* f : kLanguageSetFiles)
    if (!std::filesystem::exists(dir / f)) throw Error("language set '" + dir.string() + "' is missing " + f);
  auto read = [&](const char* f) { return read_file((dir / f).string()); };
  LanguageSet ls;
  ls.name = dir.filename().string();
  ls.unicharset = parse_unicharset(read("unicharset"));
  ls.prototypes = parse_prototypes(read("prototypes"));
  ls.freq_table = parse_freq_table(read("freq-table"));
  ls.freq_dawg = parse_dawg(read("freq-dawg"));
  ls.word_dawg = parse_dawg(read("word-dawg"));
  ls.user_words = parse_wordlist(read("user-words"));
  ls.ambiguities = parse_ambiguities(read("ambiguities"));
  try {
    ls.meta = nlohmann::json::parse(read("meta"));
  } catch (const nlohmann::json::exception& e) {
    throw Error("language set meta: " + std::string(e.what()));
  }
  if (!ls.meta.is_object() || !ls.meta.contains("reject_threshold") || !ls.meta["reject_threshold"].is_number())
    throw Error("language set meta lacks reject_threshold");
  ls.reject_threshold = ls.meta["reject_threshold"].get<double>();
  check_consistency(ls);
  return ls;
}

// Writes `<root>/<name>/` and returns the set as re-read from disk, so the
// caller sees exactly the values a later load will produce.
inline LanguageSet assemble_language_set(const LanguageSet& ls, const std::filesystem::path& root,
                                         bool force = false) {
  namespace fs = std::filesystem;
  if (!valid_language_name(ls.name)) throw Error("language set name must match [a-z0-9_]{1,16}: '" + ls.name + "'");
  check_consistency(ls);
  const fs::path dir = root / ls.name;
  if (fs::exists(dir)) {
    if (!force) throw LanguageSetExists("language set '" + ls.name + "' already exists (use --force)");
    fs::remove_all(dir);
  }
  fs::create_directories(dir);
  auto write = [&](const char* f, const std::string& content) { write_file((dir / f).string(), content); };
  nlohmann::json meta = ls.meta;
  meta["reject_threshold"] = ls.reject_threshold;
  write("unicharset", serialize_unicharset(ls.unicharset));
  write("prototypes", serialize_prototypes(ls.prototypes));
  write("freq-table", serialize_freq_table(ls.freq_table));
  write("freq-dawg", serialize_dawg(ls.freq_dawg));
  write("word-dawg", serialize_dawg(ls.word_dawg));
  std::string user_words;
  for (const auto& w : ls.user_words) user_words += w + '\n';
  write("user-words", user_words);
  write("ambiguities", serialize_ambiguities(ls.ambiguities));
  write("meta", meta.dump(2) + "\n");
  return load_language_set(dir);
}

}  // namespace handocr
