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

#ifndef REVWRAP_SEGMENTER_H_
#define REVWRAP_SEGMENTER_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "revwrap/page_model.h"

namespace revwrap {

struct RoiAttribute {
  std::string label;
  std::string text;
  friend bool operator==(const RoiAttribute&, const RoiAttribute&) = default;
};

// The operator's pasted region of interest and its labeled sub-regions.
// Texts are held in Normalize() form.
struct RoiSpec {
  std::string roi_text;
  std::vector<RoiAttribute> attributes;

  // Parses {"roi_text", "attributes": [{"label", "text"}]} and normalizes all
  // texts. Throws Error(kInvalidRoiSpec) on shape errors, an empty RoI, or
  // empty/duplicate labels.
  static RoiSpec FromJson(const nlohmann::json& j);
  static RoiSpec LoadFile(const std::string& path);
  nlohmann::ordered_json ToJson() const;

  friend bool operator==(const RoiSpec&, const RoiSpec&) = default;
};

struct AttributeSpan {
  std::string label;
  Span span;        // source bytes
  Span normalized;  // bytes of PageBundle::rendered.text
};

struct RoiLocation {
  Span roi_span;    // first to last displayed source character of the RoI
  Span normalized;  // the matched window in rendered text
  std::vector<AttributeSpan> attribute_spans;
  std::vector<std::string> warnings;
};

struct LocateOptions {
  // Take the first of several RoI occurrences instead of failing.
  bool first_match = false;
};

// Finds the unique occurrence of roi.roi_text in the rendered page and each
// attribute within it, mapped back to source byte spans.
//
// Errors: kRoiNotFound, kAmbiguousRoi, kAttributeNotFound(label) when an
// attribute is absent or cannot be placed after the previous one,
// kAmbiguousAttribute(label) when more than one placement is consistent with
// the attribute order.
RoiLocation LocateRoi(const PageBundle& page, const RoiSpec& roi,
                      const LocateOptions& options = {});

// Start offsets (within `window`) of each attribute, under the constraint
// that attributes appear in list order without overlapping. Same errors as
// LocateRoi for the attribute part.
std::vector<std::size_t> PlaceAttributes(std::string_view window,
                                         const std::vector<RoiAttribute>& attributes);

struct PagePartition {
  std::string_view upper;
  std::string_view lower;
};

// upper = source[0, roi_span.begin), lower = source[roi_span.end, size).
PagePartition SplitPage(std::string_view source, const Span& roi_span);

}  // namespace revwrap

#endif  // REVWRAP_SEGMENTER_H_
