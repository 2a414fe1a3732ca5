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

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "handocr/error.hpp"
#include "handocr/geometry.hpp"
#include "handocr/image.hpp"
#include "handocr/utf8.hpp"

namespace handocr {

// One labeled character box: `label left bottom right top page`.
struct GlyphBox {
  std::string label;
  Rect rect;
  int page = 0;

  friend bool operator==(const GlyphBox&, const GlyphBox&) = default;
};

// Boxes in file order. Order is never changed by the codec.
struct BoxFile {
  std::vector<GlyphBox> boxes;

  friend bool operator==(const BoxFile&, const BoxFile&) = default;
};

// Label written by makebox for boxes still awaiting a human label.
inline constexpr std::string_view kPlaceholderLabel = "*";

namespace detail {

inline bool parse_int(std::string_view field, int& out) {
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(' ', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace detail

// Parses the whole file or nothing: every bad line is reported with its
// 1-based line number before anything is returned.
inline BoxFile parse_boxfile(std::string_view content) {
  BoxFile bf;
  std::vector<Diagnostic> diags;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const auto line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;

    const auto fields = detail::split_spaces(line);
    if (fields.size() != 5 && fields.size() != 6) {
      diags.push_back({line_no, "expected 5 or 6 fields, found " + std::to_string(fields.size())});
      continue;
    }
    GlyphBox box;
    box.label = std::string(fields[0]);
    if (!utf8::is_single_scalar(fields[0])) {
      diags.push_back({line_no, "label must be exactly one character"});
      continue;
    }
    int coords[4];
    bool ok = true;
    for (int i = 0; i < 4; ++i) ok = ok && detail::parse_int(fields[i + 1], coords[i]);
    if (fields.size() == 6) ok = ok && detail::parse_int(fields[5], box.page);
    if (!ok) {
      diags.push_back({line_no, "non-integer coordinate"});
      continue;
    }
    if (box.page < 0) {
      diags.push_back({line_no, "negative page index"});
      continue;
    }
    box.rect = {coords[0], coords[1], coords[2], coords[3]};
    if (box.rect.empty()) {
      diags.push_back({line_no, "empty box"});
      continue;
    }
    bf.boxes.push_back(std::move(box));
  }
  if (!diags.empty()) throw ParseError(std::move(diags));
  return bf;
}

inline std::string serialize_box(const GlyphBox& b) {
  return b.label + ' ' + std::to_string(b.rect.left) + ' ' + std::to_string(b.rect.bottom) + ' ' +
         std::to_string(b.rect.right) + ' ' + std::to_string(b.rect.top) + ' ' + std::to_string(b.page) + '\n';
}

inline std::string serialize_boxfile(const BoxFile& bf) {
  std::string out;
  for (const auto& b : bf.boxes) out += serialize_box(b);
  return out;
}

// Checks every box against the page bounds (half-open high edges).
inline const BoxFile& bind_to_page(const BoxFile& bf, const PageImage& page) {
  std::vector<Diagnostic> diags;
  for (std::size_t i = 0; i < bf.boxes.size(); ++i) {
    const auto& r = bf.boxes[i].rect;
    if (r.left < 0 || r.bottom < 0 || r.right > page.width() || r.top > page.height())
      diags.push_back({i + 1, "box outside " + std::to_string(page.width()) + "x" +
                                  std::to_string(page.height()) + " page"});
  }
  if (!diags.empty()) throw ParseError(std::move(diags));
  return bf;
}

inline BoxFile load_boxfile(const std::string& path) {
  try {
    return parse_boxfile(read_file(path));
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace handocr
