/*
 * Copyright 2026 The revwrap Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef REVWRAP_TEMPLATE_STORE_H_
#define REVWRAP_TEMPLATE_STORE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "revwrap/page_model.h"
#include "revwrap/segmenter.h"
#include "revwrap/skeleton.h"
#include "revwrap/util.h"

namespace revwrap {

// Start/end markup of one attribute inside the RoI, as canonical tag strings
// ("<p>", "</td>", "<br>"). An absent tag means the attribute is bounded by
// the region edge or by its neighbour.
struct AttributeDelimiter {
  std::string label;
  std::optional<std::string> start_tag;
  std::optional<std::string> end_tag;
  std::size_t ordinal = 0;
  friend bool operator==(const AttributeDelimiter&, const AttributeDelimiter&) = default;
};

struct HistoryEntry {
  Signature signature;
  Timestamp updated_at;
  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct Template {
  std::string id;
  std::string source_ref;
  RoiSpec roi_spec;
  Signature signature;
  std::vector<std::string> upper_open_path;
  std::vector<std::string> lower_open_path;
  std::vector<AttributeDelimiter> delimiters;
  std::string tag_class_version;
  Timestamp created_at;
  Timestamp updated_at;
  std::vector<HistoryEntry> history;  // superseded signatures, oldest first

  nlohmann::ordered_json ToJson() const;
  static Template FromJson(const nlohmann::json& j);
  // Canonical on-disk text: two-space indented JSON plus a newline.
  std::string Serialize() const;

  friend bool operator==(const Template&, const Template&) = default;
};

// Content hash of (source_ref, normalized RoI spec).
std::string TemplateId(const std::string& source_ref, const RoiSpec& roi);

// Nearest layout or void tag on each side of every attribute, searched
// within `region` and stopping at displayed text. A tag occurrence sitting
// between two attributes is given to the later one as its start. Throws
// Error(kDelimiterCollision, label) when two neighbouring attributes end up
// with nothing to tell them apart.
std::vector<AttributeDelimiter> InduceDelimiters(const PageBundle& page, const RoiLocation& loc,
                                                 const Span& region, const TagClassConfig& config);

struct InduceOptions {
  bool first_match = false;
  std::optional<Timestamp> now;  // defaults to Now()
};

struct Induction {
  Template tmpl;
  RoiLocation location;
  SplitMetrics metrics;
  // Locate warnings plus attributes the template fails to re-extract from
  // its own exemplar.
  std::vector<std::string> warnings;
};

Induction InduceTemplateDetailed(const PageBundle& page, const RoiSpec& roi,
                                 const std::string& source_ref, const TagClassConfig& config,
                                 const InduceOptions& options = {});

Template InduceTemplate(const PageBundle& page, const RoiSpec& roi, const std::string& source_ref,
                        const TagClassConfig& config, const InduceOptions& options = {});

// One JSON file per template, <dir>/<id>.json. Single writer per template;
// concurrent readers are fine.
class TemplateStore {
 public:
  explicit TemplateStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path PathFor(const std::string& id) const;

  // Writes atomically (temp file + rename); creates the directory.
  std::filesystem::path Save(const Template& t) const;
  // Throws Error(kTemplateNotFound) for unknown ids.
  Template Load(const std::string& id) const;
  bool Contains(const std::string& id) const;
  // Ids sorted by updated_at, ties by id.
  std::vector<std::string> List() const;
  std::vector<Template> LoadAll() const;

 private:
  std::filesystem::path dir_;
};

}  // namespace revwrap

#endif  // REVWRAP_TEMPLATE_STORE_H_
