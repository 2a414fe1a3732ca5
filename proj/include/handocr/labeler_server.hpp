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

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "handocr/boxfile.hpp"
#include "handocr/error.hpp"
#include "handocr/image.hpp"
#include "handocr/png.hpp"
#include "handocr/segmenter.hpp"

namespace handocr {

// HTTP surface for the box-correction UI. Pages are the .pbm/.pgm files of
// a corpus directory; each page's ground truth is the sibling `<stem>.box`.
// Writes are serialized per page and versioned: a PUT must echo the current
// version or it is refused with 409.
class LabelerService {
 public:
  struct Response {
    int status = 200;
    nlohmann::json body;
  };

  explicit LabelerService(std::filesystem::path corpus_dir, SegmenterConfig seg = {})
      : dir_(std::move(corpus_dir)), seg_(seg) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir_)) throw Error("corpus directory '" + dir_.string() + "' not found");
    std::vector<fs::path> images;
    for (const auto& entry : fs::directory_iterator(dir_)) {
      const auto ext = entry.path().extension().string();
      if (entry.is_regular_file() && (ext == ".pbm" || ext == ".pgm")) images.push_back(entry.path());
    }
    std::sort(images.begin(), images.end());
    for (const auto& img : images) {
      auto page = std::make_unique<Page>();
      page->id = img.stem().string();
      if (pages_.count(page->id)) continue;
      page->image_path = img;
      page->box_path = dir_ / (page->id + ".box");
      const auto raster = load_page(img.string());
      page->width = raster.width();
      page->height = raster.height();
      order_.push_back(page->id);
      pages_.emplace(page->id, std::move(page));
    }
  }

  Response list_pages() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& id : order_) {
      const auto& p = *pages_.at(id);
      std::lock_guard lock(p.mutex);
      arr.push_back({{"id", id},
                     {"image_url", "/api/pages/" + id + "/image"},
                     {"box_url", "/api/pages/" + id + "/boxes"},
                     {"width", p.width},
                     {"height", p.height},
                     {"version", p.version}});
    }
    return {200, arr};
  }

  std::optional<std::string> page_png(const std::string& id) const {
    const Page* p = find(id);
    if (!p) return std::nullopt;
    return encode_png(load_page(p->image_path.string()));
  }

  Response get_boxes(const std::string& id) const {
    const Page* p = find(id);
    if (!p) return not_found(id);
    std::lock_guard lock(p->mutex);
    try {
      return {200, {{"version", p->version}, {"boxes", boxes_to_json(read_boxes(*p))}}};
    } catch (const Error& e) {
      return {500, {{"error", e.what()}}};
    }
  }

  Response put_boxes(const std::string& id, const std::string& body) {
    Page* p = find(id);
    if (!p) return not_found(id);
    nlohmann::json req;
    try {
      req = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      return {400, {{"error", std::string("invalid JSON: ") + e.what()}}};
    }
    if (!req.is_object() || !req.contains("version") || !req["version"].is_number_unsigned() ||
        !req.contains("boxes"))
      return {400, {{"error", "body must be {version, boxes}"}}};
    BoxFile bf;
    try {
      bf = boxes_from_json(req["boxes"], *p);
    } catch (const Error& e) {
      return {400, {{"error", e.what()}}};
    }
    std::lock_guard lock(p->mutex);
    if (req["version"].get<std::uint64_t>() != p->version)
      return {409, {{"error", "stale version"}, {"version", p->version}}};
    try {
      write_atomically(p->box_path, serialize_boxfile(bf));
    } catch (const Error& e) {
      return {500, {{"error", e.what()}}};
    }
    return {200, {{"version", ++p->version}}};
  }

  // Replaces the page's boxes with a fresh segmentation labeled "*".
  Response autosegment(const std::string& id) {
    Page* p = find(id);
    if (!p) return not_found(id);
    std::lock_guard lock(p->mutex);
    try {
      const auto page = binarize_auto(load_page(p->image_path.string()));
      write_atomically(p->box_path, serialize_boxfile(placeholder_boxes(page, seg_)));
    } catch (const Error& e) {
      return {500, {{"error", e.what()}}};
    }
    return {200, {{"version", ++p->version}}};
  }

  // Candidate boxes of a page in reading order, all labeled "*".
  static BoxFile placeholder_boxes(const PageImage& page, const SegmenterConfig& seg) {
    BoxFile bf;
    for (const auto& line : segment_page(page, seg).lines)
      for (const auto& word : line)
        for (const auto& c : word) bf.boxes.push_back({std::string(kPlaceholderLabel), c.bbox, 0});
    return bf;
  }

  static void write_atomically(const std::filesystem::path& path, const std::string& content) {
    static std::atomic<unsigned> counter{0};
    auto tmp = path;
    tmp += ".tmp" + std::to_string(counter++);
    write_file(tmp.string(), content);
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      throw Error("cannot replace '" + path.string() + "'");
    }
  }

  static nlohmann::json boxes_to_json(const BoxFile& bf) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& b : bf.boxes)
      arr.push_back({{"label", b.label},
                     {"left", b.rect.left},
                     {"bottom", b.rect.bottom},
                     {"right", b.rect.right},
                     {"top", b.rect.top},
                     {"page", b.page}});
    return arr;
  }

 private:
  struct Page {
    std::string id;
    std::filesystem::path image_path;
    std::filesystem::path box_path;
    int width = 0;
    int height = 0;
    std::uint64_t version = 1;
    mutable std::mutex mutex;
  };

  Page* find(const std::string& id) const {
    auto it = pages_.find(id);
    return it == pages_.end() ? nullptr : it->second.get();
  }

  static Response not_found(const std::string& id) { return {404, {{"error", "no page '" + id + "'"}}}; }

  static BoxFile read_boxes(const Page& p) {
    if (!std::filesystem::exists(p.box_path)) return {};
    return load_boxfile(p.box_path.string());
  }

  // Server-side validation mirrors the codec: the result must survive
  // serialize -> parse unchanged and fit the page.
  static BoxFile boxes_from_json(const nlohmann::json& arr, const Page& p) {
    if (!arr.is_array()) throw Error("boxes must be an array");
    BoxFile bf;
    try {
      for (const auto& j : arr) {
        GlyphBox b;
        b.label = j.at("label").get<std::string>();
        b.rect = {j.at("left").get<int>(), j.at("bottom").get<int>(), j.at("right").get<int>(), j.at("top").get<int>()};
        b.page = j.contains("page") ? j.at("page").get<int>() : 0;
        bf.boxes.push_back(std::move(b));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("malformed box: ") + e.what());
    }
    const auto reparsed = parse_boxfile(serialize_boxfile(bf));
    if (reparsed != bf) throw Error("boxes do not survive the box-file codec");
    PageImage bounds(p.width, p.height);
    bind_to_page(bf, bounds);
    return bf;
  }

  std::filesystem::path dir_;
  SegmenterConfig seg_;
  std::vector<std::string> order_;
  std::map<std::string, std::unique_ptr<Page>> pages_;
};

inline constexpr const char* kLabelerIndexHtml =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>handocr labeler</title></head>"
    "<body><p>Labeler API is running. Pages: <a href=\"/api/pages\">/api/pages</a></p></body></html>\n";

// Wires the service into an httplib server. Static UI assets are served from
// `assets_dir` when given.
inline void mount_labeler_routes(httplib::Server& server, LabelerService& service,
                                 const std::optional<std::filesystem::path>& assets_dir = std::nullopt) {
  auto send = [](httplib::Response& res, const LabelerService::Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get("/api/pages", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.list_pages());
  });
  server.Get(R"(/api/pages/([^/]+)/image)", [&service](const httplib::Request& req, httplib::Response& res) {
    try {
      if (auto png = service.page_png(req.matches[1])) {
        res.set_content(*png, "image/png");
        return;
      }
      res.status = 404;
      res.set_content(R"({"error":"no such page"})", "application/json");
    } catch (const Error& e) {
      res.status = 500;
      res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
    }
  });
  server.Get(R"(/api/pages/([^/]+)/boxes)", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.get_boxes(req.matches[1]));
  });
  server.Put(R"(/api/pages/([^/]+)/boxes)", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.put_boxes(req.matches[1], req.body));
  });
  server.Post(R"(/api/pages/([^/]+)/autosegment)",
              [&service, send](const httplib::Request& req, httplib::Response& res) {
                send(res, service.autosegment(req.matches[1]));
              });
  if (assets_dir) {
    server.set_mount_point("/", assets_dir->string());
  } else {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kLabelerIndexHtml, "text/html");
    });
  }
}

}  // namespace handocr
