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

#ifndef REVWRAP_EXTRACTOR_H_
#define REVWRAP_EXTRACTOR_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "revwrap/page_model.h"
#include "revwrap/template_store.h"

namespace revwrap {

struct TemplateRegion {
  Span region;    // between the innermost upper and outermost lower path tags
  Span roi_span;  // region tightened to its first and last displayed character
};

// Finds the region whose unpaired-tag prefix is the template's upper open path
// and whose unpaired-tag suffix is its lower open path. When several regions
// qualify, only those the template's delimiters can be applied to are kept.
//
// Errors: kRegionNotFound, kAmbiguousRegion (typically a list page),
// kConfigMismatch when `config` is not the version the template was built
// with.
TemplateRegion LocateRoiByTemplate(const PageBundle& page, const Template& tmpl,
                                   const TagClassConfig& config);

struct ExtractedValue {
  std::string label;
  std::string text;  // normalized
  Span source_span;
};

struct ExtractionRecord {
  std::string template_id;
  std::string source_ref;
  Timestamp extracted_at;
  std::vector<ExtractedValue> values;

  // {"template_id", "source_ref", "extracted_at", "values": [{"label", "text"}]};
  // with_spans adds "start"/"end" source offsets to each value.
  nlohmann::ordered_json ToJson(bool with_spans = false) const;
};

// Walks the delimiters in order over `region`:
//   - a start tag moves the cursor past its next occurrence;
//   - the value then runs to the next occurrence of the end tag, which must
//     not lie beyond the next attribute's start tag; without an end tag it
//     runs to the next attribute's start tag, or to the region end.
// Throws Error(kDelimiterNotFound, label) when a required tag is missing.
std::vector<ExtractedValue> SliceAttributes(const PageBundle& page,
                                            std::span<const AttributeDelimiter> delimiters,
                                            const Span& region);

ExtractionRecord Extract(const Template& tmpl, const PageBundle& page, const TagClassConfig& config,
                         std::optional<Timestamp> now = std::nullopt);

// `region` shrunk to its first and last displayed character; an empty span
// at region.begin when it shows no text.
Span TightenToText(const PageBundle& page, const Span& region);

}  // namespace revwrap

#endif  // REVWRAP_EXTRACTOR_H_
