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

#include "revwrap/extractor.h"

#include <algorithm>

#include "revwrap/error.h"
#include "revwrap/skeleton.h"

namespace revwrap {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// First tag token at or after `from` whose canonical form is `canonical` and
// which ends no later than `limit`.
std::size_t FindNextTag(const std::vector<TagToken>& tokens, const std::string& canonical,
                        std::size_t from, std::size_t limit) {
  auto it = std::lower_bound(tokens.begin(), tokens.end(), from,
                             [](const TagToken& t, std::size_t p) { return t.span.begin < p; });
  for (; it != tokens.end() && it->span.end <= limit; ++it) {
    if (it->is_tag() && it->Canonical() == canonical) {
      return static_cast<std::size_t>(it - tokens.begin());
    }
  }
  return kNone;
}

std::string RenderSlice(const PageBundle& page, std::size_t begin, std::size_t end) {
  std::vector<TagToken> slice;
  for (const auto& t : page.stripped) {
    if (t.span.begin >= end) break;
    if (t.span.begin >= begin && t.span.end <= end) slice.push_back(t);
  }
  return RenderText(page.source, slice).text;
}

bool SameNames(const std::vector<TagToken>& skeleton, const std::vector<std::size_t>& indices,
               std::size_t offset, const std::vector<std::string>& names) {
  if (indices.size() != names.size()) return false;
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (skeleton[indices[k] + offset].name != names[k]) return false;
  }
  return true;
}

}  // namespace

std::vector<ExtractedValue> SliceAttributes(const PageBundle& page,
                                            std::span<const AttributeDelimiter> delimiters,
                                            const Span& region) {
  const auto& tokens = page.tokens;
  std::vector<ExtractedValue> values;
  std::size_t cursor = region.begin;
  for (std::size_t k = 0; k < delimiters.size(); ++k) {
    const AttributeDelimiter& d = delimiters[k];
    const AttributeDelimiter* next = k + 1 < delimiters.size() ? &delimiters[k + 1] : nullptr;
    if (d.start_tag) {
      const std::size_t t = FindNextTag(tokens, *d.start_tag, cursor, region.end);
      if (t == kNone) {
        throw Error(ErrorCode::kDelimiterNotFound,
                    "start delimiter " + *d.start_tag + " of '" + d.label + "' not found", d.label);
      }
      cursor = tokens[t].span.end;
    }
    const std::size_t value_begin = cursor;
    std::size_t value_end = region.end;
    const std::size_t next_start = next && next->start_tag
                                       ? FindNextTag(tokens, *next->start_tag, cursor, region.end)
                                       : kNone;
    if (d.end_tag) {
      const std::size_t bound = next_start == kNone ? region.end : tokens[next_start].span.end;
      const std::size_t t = FindNextTag(tokens, *d.end_tag, cursor, bound);
      if (t == kNone) {
        throw Error(ErrorCode::kDelimiterNotFound,
                    "end delimiter " + *d.end_tag + " of '" + d.label + "' not found", d.label);
      }
      value_end = tokens[t].span.begin;
      cursor = tokens[t].span.end;
    } else if (next && next->start_tag) {
      if (next_start == kNone) {
        throw Error(ErrorCode::kDelimiterNotFound,
                    "start delimiter " + *next->start_tag + " of '" + next->label + "' not found",
                    next->label);
      }
      value_end = tokens[next_start].span.begin;
      cursor = value_end;
    } else {
      cursor = value_end;
    }
    values.push_back({d.label, RenderSlice(page, value_begin, value_end), {value_begin, value_end}});
  }
  return values;
}

Span TightenToText(const PageBundle& page, const Span& region) {
  const auto& anchors = page.rendered.offset_map;
  const std::string& text = page.rendered.text;
  auto it = std::lower_bound(anchors.begin(), anchors.end(), region.begin,
                             [](const OffsetAnchor& a, std::size_t p) { return a.source < p; });
  std::size_t first = kNone, last = kNone;
  for (; it != anchors.end() && it->source_end <= region.end; ++it) {
    if (text[it->normalized] == ' ') continue;
    if (first == kNone) first = it->source;
    last = it->source_end;
  }
  if (first == kNone) return {region.begin, region.begin};
  return {first, last};
}

TemplateRegion LocateRoiByTemplate(const PageBundle& page, const Template& tmpl,
                                   const TagClassConfig& config) {
  if (config.version != tmpl.tag_class_version) {
    throw Error(ErrorCode::kConfigMismatch, "template " + tmpl.id + " was induced with tag classes '" +
                                                tmpl.tag_class_version + "', not '" +
                                                config.version + "'");
  }
  const std::vector<TagToken> skeleton = LayoutSkeleton(page.tokens);
  const auto& upper_path = tmpl.upper_open_path;
  const auto& lower_path = tmpl.lower_open_path;

  // Skeleton indices after which the unpaired prefix equals the upper path
  // and ends with that very token; kNone stands for the page start.
  std::vector<std::size_t> starts;
  if (upper_path.empty()) {
    starts.push_back(kNone);
  } else {
    std::vector<std::size_t> stack, unpaired;
    for (std::size_t i = 0; i < skeleton.size(); ++i) {
      const TagToken& t = skeleton[i];
      if (t.kind == TokenKind::kOpenTag) {
        stack.push_back(i);
        unpaired.push_back(i);
      } else if (!stack.empty() && skeleton[stack.back()].name == t.name) {
        const auto pos = std::find(unpaired.rbegin(), unpaired.rend(), stack.back());
        unpaired.erase(std::next(pos).base());
        stack.pop_back();
        continue;
      } else {
        unpaired.push_back(i);
      }
      if (unpaired.back() == i && SameNames(skeleton, unpaired, 0, upper_path)) starts.push_back(i);
    }
  }

  std::vector<Span> regions;
  for (const std::size_t i : starts) {
    const std::size_t begin = i == kNone ? 0 : skeleton[i].span.end;
    if (lower_path.empty()) {
      regions.push_back({begin, page.source.size()});
      continue;
    }
    for (std::size_t j = i == kNone ? 0 : i + 1; j < skeleton.size(); ++j) {
      if (skeleton[j].name != lower_path.front()) continue;
      const std::span<const TagToken> suffix(skeleton.data() + j, skeleton.size() - j);
      const SkeletonMatch m = MatchSkeleton(suffix);
      if (!m.unpaired.empty() && m.unpaired.front() == 0 &&
          SameNames(skeleton, m.unpaired, j, lower_path)) {
        regions.push_back({begin, skeleton[j].span.begin});
        break;
      }
    }
  }

  if (regions.empty()) {
    throw Error(ErrorCode::kRegionNotFound,
                "no region of " + page.source_ref + " matches the open paths of template " + tmpl.id);
  }
  if (regions.size() > 1) {
    std::vector<Span> fitting;
    for (const Span& r : regions) {
      try {
        SliceAttributes(page, tmpl.delimiters, r);
        fitting.push_back(r);
      } catch (const Error&) {
      }
    }
    if (fitting.size() != 1) {
      throw Error(ErrorCode::kAmbiguousRegion,
                  std::to_string(regions.size()) + " regions of " + page.source_ref +
                      " match template " + tmpl.id + " (" + std::to_string(fitting.size()) +
                      " fit its delimiters)");
    }
    regions = std::move(fitting);
  }
  return {regions.front(), TightenToText(page, regions.front())};
}

nlohmann::ordered_json ExtractionRecord::ToJson(bool with_spans) const {
  nlohmann::ordered_json j;
  j["template_id"] = template_id;
  j["source_ref"] = source_ref;
  j["extracted_at"] = FormatTimestamp(extracted_at);
  j["values"] = nlohmann::ordered_json::array();
  for (const auto& v : values) {
    nlohmann::ordered_json item;
    item["label"] = v.label;
    item["text"] = v.text;
    if (with_spans) {
      item["start"] = v.source_span.begin;
      item["end"] = v.source_span.end;
    }
    j["values"].push_back(std::move(item));
  }
  return j;
}

ExtractionRecord Extract(const Template& tmpl, const PageBundle& page, const TagClassConfig& config,
                         std::optional<Timestamp> now) {
  const TemplateRegion region = LocateRoiByTemplate(page, tmpl, config);
  ExtractionRecord record;
  record.template_id = tmpl.id;
  record.source_ref = page.source_ref;
  record.extracted_at = now.value_or(Now());
  record.values = SliceAttributes(page, tmpl.delimiters, region.region);
  return record;
}

}  // namespace revwrap
