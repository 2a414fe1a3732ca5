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

// Umbrella header for the core library (the HTTP labeler lives separately in
// labeler_server.hpp).
#include "handocr/boxfile.hpp"
#include "handocr/config.hpp"
#include "handocr/corpus.hpp"
#include "handocr/dawg.hpp"
#include "handocr/error.hpp"
#include "handocr/evaluator.hpp"
#include "handocr/features.hpp"
#include "handocr/geometry.hpp"
#include "handocr/image.hpp"
#include "handocr/language_set.hpp"
#include "handocr/recognizer.hpp"
#include "handocr/segmenter.hpp"
#include "handocr/synth.hpp"
#include "handocr/trainer.hpp"
#include "handocr/utf8.hpp"
