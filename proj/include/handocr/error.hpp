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

#include <stdexcept>
#include <string>
#include <vector>

namespace handocr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One problem found while reading a line-oriented text format.
struct Diagnostic {
  std::size_t line = 0;  // 1-based
  std::string message;
};

// Raised by the line-oriented parsers. Carries every diagnostic found, not
// just the first, so callers can report the whole file at once.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics)
      : Error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string join(const std::vector<Diagnostic>& diags) {
    std::string out;
    for (const auto& d : diags) {
      if (!out.empty()) out += "; ";
      out += d.message + " at line " + std::to_string(d.line);
    }
    return out;
  }

  std::vector<Diagnostic> diagnostics_;
};

}  // namespace handocr
