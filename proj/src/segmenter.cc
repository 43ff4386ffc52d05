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

#include "revwrap/segmenter.h"

#include <algorithm>
#include <limits>
#include <set>

#include "revwrap/error.h"
#include "revwrap/util.h"

namespace revwrap {

namespace {

std::vector<std::size_t> FindAll(std::string_view haystack, std::string_view needle) {
  std::vector<std::size_t> hits;
  if (needle.empty()) return hits;
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + 1)) {
    hits.push_back(pos);
  }
  return hits;
}

}  // namespace

RoiSpec RoiSpec::FromJson(const nlohmann::json& j) {
  RoiSpec spec;
  try {
    if (!j.is_object()) throw Error(ErrorCode::kInvalidRoiSpec, "RoI spec must be a JSON object");
    spec.roi_text = Normalize(j.at("roi_text").get<std::string>());
    if (j.contains("attributes")) {
      for (const auto& a : j.at("attributes")) {
        spec.attributes.push_back(
            {Normalize(a.at("label").get<std::string>()), Normalize(a.at("text").get<std::string>())});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidRoiSpec, std::string("malformed RoI spec: ") + e.what());
  }
  if (spec.roi_text.empty()) throw Error(ErrorCode::kInvalidRoiSpec, "roi_text is empty");
  std::set<std::string> seen;
  for (const auto& a : spec.attributes) {
    if (a.label.empty()) throw Error(ErrorCode::kInvalidRoiSpec, "attribute with empty label");
    if (!seen.insert(a.label).second) {
      throw Error(ErrorCode::kInvalidRoiSpec, "duplicate attribute label '" + a.label + "'", a.label);
    }
  }
  return spec;
}

RoiSpec RoiSpec::LoadFile(const std::string& path) {
  const std::string text = ReadFileOrThrow(path);
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kInvalidRoiSpec, "RoI spec is not valid JSON: " + path);
  return FromJson(j);
}

nlohmann::ordered_json RoiSpec::ToJson() const {
  nlohmann::ordered_json j;
  j["roi_text"] = roi_text;
  j["attributes"] = nlohmann::ordered_json::array();
  for (const auto& a : attributes) {
    nlohmann::ordered_json item;
    item["label"] = a.label;
    item["text"] = a.text;
    j["attributes"].push_back(std::move(item));
  }
  return j;
}

std::vector<std::size_t> PlaceAttributes(std::string_view window,
                                         const std::vector<RoiAttribute>& attributes) {
  const std::size_t count = attributes.size();
  std::vector<std::vector<std::size_t>> occ(count);
  for (std::size_t k = 0; k < count; ++k) {
    occ[k] = FindAll(window, attributes[k].text);
    if (occ[k].empty()) {
      throw Error(ErrorCode::kAttributeNotFound,
                  "text of attribute '" + attributes[k].label + "' does not occur in the RoI",
                  attributes[k].label);
    }
  }
  // reach_fwd[k][i]: attributes 0..k can be placed with k at occ[k][i].
  // reach_bwd[k][i]: attributes k..count-1 can be placed with k at occ[k][i].
  std::vector<std::vector<char>> reach_fwd(count), reach_bwd(count);
  std::size_t min_end = 0;
  for (std::size_t k = 0; k < count; ++k) {
    reach_fwd[k].assign(occ[k].size(), 0);
    std::size_t next_min_end = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < occ[k].size(); ++i) {
      if (occ[k][i] >= min_end) {
        reach_fwd[k][i] = 1;
        next_min_end = std::min(next_min_end, occ[k][i] + attributes[k].text.size());
      }
    }
    if (next_min_end == std::numeric_limits<std::size_t>::max()) {
      throw Error(ErrorCode::kAttributeNotFound,
                  "attribute '" + attributes[k].label +
                      "' does not occur after the preceding attributes in the RoI",
                  attributes[k].label);
    }
    min_end = next_min_end;
  }
  std::size_t max_start = window.size();
  for (std::size_t k = count; k-- > 0;) {
    reach_bwd[k].assign(occ[k].size(), 0);
    std::size_t next_max_start = 0;
    bool any = false;
    for (std::size_t i = 0; i < occ[k].size(); ++i) {
      if (occ[k][i] + attributes[k].text.size() <= max_start) {
        reach_bwd[k][i] = 1;
        next_max_start = any ? std::max(next_max_start, occ[k][i]) : occ[k][i];
        any = true;
      }
    }
    max_start = next_max_start;
  }
  std::vector<std::size_t> positions;
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t chosen = 0, feasible = 0;
    for (std::size_t i = 0; i < occ[k].size(); ++i) {
      if (reach_fwd[k][i] && reach_bwd[k][i]) {
        if (feasible++ == 0) chosen = occ[k][i];
      }
    }
    if (feasible > 1) {
      throw Error(ErrorCode::kAmbiguousAttribute,
                  "attribute '" + attributes[k].label + "' occurs " + std::to_string(feasible) +
                      " times in the RoI; extend its text to make it unique",
                  attributes[k].label);
    }
    positions.push_back(chosen);
  }
  return positions;
}

RoiLocation LocateRoi(const PageBundle& page, const RoiSpec& roi, const LocateOptions& options) {
  const std::string needle = Normalize(roi.roi_text);
  if (needle.empty()) throw Error(ErrorCode::kInvalidRoiSpec, "roi_text is empty");
  const std::string& text = page.rendered.text;
  RoiLocation loc;
  std::size_t first = text.find(needle);
  if (first == std::string::npos) {
    throw Error(ErrorCode::kRoiNotFound, "RoI text not found in " + page.source_ref);
  }
  const std::size_t second = text.find(needle, first + 1);
  if (second != std::string::npos) {
    const std::size_t occurrences = FindAll(text, needle).size();
    const std::string msg = "RoI text occurs " + std::to_string(occurrences) + " times in " +
                            page.source_ref;
    if (!options.first_match) throw Error(ErrorCode::kAmbiguousRoi, msg + "; extend the pasted text");
    loc.warnings.push_back(msg + "; using the first occurrence");
  }
  loc.normalized = {first, first + needle.size()};
  loc.roi_span = page.rendered.SourceSpan(loc.normalized.begin, loc.normalized.end);

  std::vector<RoiAttribute> attributes = roi.attributes;
  for (auto& a : attributes) {
    a.text = Normalize(a.text);
    if (a.text.empty()) {
      throw Error(ErrorCode::kAttributeNotFound, "attribute '" + a.label + "' has no text", a.label);
    }
  }
  const std::string_view window(text.data() + first, needle.size());
  const std::vector<std::size_t> positions = PlaceAttributes(window, attributes);
  for (std::size_t k = 0; k < attributes.size(); ++k) {
    const std::size_t b = first + positions[k];
    const std::size_t e = b + attributes[k].text.size();
    loc.attribute_spans.push_back({attributes[k].label, page.rendered.SourceSpan(b, e), {b, e}});
  }
  return loc;
}

PagePartition SplitPage(std::string_view source, const Span& roi_span) {
  return {source.substr(0, roi_span.begin), source.substr(roi_span.end)};
}

}  // namespace revwrap
