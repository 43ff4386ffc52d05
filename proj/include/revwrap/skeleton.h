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

// Tag-balance metrics over the layout skeleton of the page parts on either
// side of the region of interest.
//
// A part's skeleton is its layout-format open and close tags. Within one part
// an open tag and a later close tag of the same name pair up when the open is
// on top of the stack as the close arrives; everything else is unpaired. For
// the part above the RoI the unpaired tags are the still-open ancestors of the
// RoI; below it they are the closes of those ancestors.
//
//   n_ot  = number of unpaired tags
//   n_ct  = number of pairs (kClosedTagsPerPair each)
//   sigma = n_ot - n_ct
//   delta = sigma_upper - sigma_lower, whose sign classifies the page.

#ifndef REVWRAP_SKELETON_H_
#define REVWRAP_SKELETON_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "revwrap/page_model.h"

namespace revwrap {

// How many closed-tag counts one matched open/close couple contributes.
inline constexpr std::int64_t kClosedTagsPerPair = 1;

enum class Side { kUpper, kLower };
std::string_view SideName(Side side);

// Layout-format open/close tokens of `part_source`, spans shifted by
// `base_offset`. Text, comments, text-format, other and self-closing tags
// are dropped.
std::vector<TagToken> LayoutSkeleton(std::string_view part_source, const TagClassConfig& config,
                                     std::size_t base_offset = 0);
// Same filter over already-lexed tokens.
std::vector<TagToken> LayoutSkeleton(std::span<const TagToken> tokens);

struct SkeletonMatch {
  static constexpr std::size_t kUnpaired = static_cast<std::size_t>(-1);
  std::vector<std::size_t> partner;  // per token: index of its pair, or kUnpaired
  std::vector<std::size_t> unpaired;  // indices in document order
  std::size_t pair_count = 0;
};

SkeletonMatch MatchSkeleton(std::span<const TagToken> skeleton);

struct PartMetrics {
  Side side = Side::kUpper;
  std::int64_t n_ot = 0;
  std::int64_t n_ct = 0;
  std::int64_t sigma = 0;
  // Names of the unpaired tags in document order: deepest last for the
  // upper part, deepest first for the lower part.
  std::vector<std::string> open_path;
};

PartMetrics ComputePartMetrics(std::span<const TagToken> skeleton, Side side);

enum class Symmetry { kFullySymmetric, kLowerAsymmetric, kUpperAsymmetric };
std::string_view SymmetryName(Symmetry s);

struct Signature {
  std::int64_t sigma_upper = 0;
  std::int64_t sigma_lower = 0;
  std::int64_t delta = 0;
  Symmetry symmetry = Symmetry::kFullySymmetric;

  static Signature FromSigmas(std::int64_t sigma_upper, std::int64_t sigma_lower);
  nlohmann::ordered_json ToJson() const;
  // Throws Error(kStoreError) if fields are missing or inconsistent.
  static Signature FromJson(const nlohmann::json& j);
  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature ComputeSignature(const PartMetrics& upper, const PartMetrics& lower);

struct PartNode {
  std::string name;
  TokenKind kind = TokenKind::kOpenTag;  // of the token that created the node
  bool paired = false;
  std::vector<PartNode> children;
};

// Left-to-right forest over a skeleton. Paired tags become nodes holding
// what they enclose. An unpaired open starts a node that holds the rest of
// the part; an unpaired close wraps everything scanned before it at its
// level. The unpaired nodes form the spine leading to (or away from) the RoI.
struct PartTree {
  std::vector<PartNode> roots;

  std::size_t root_count() const { return roots.size(); }
  std::size_t CountNodes(bool paired) const;
  // Spine node names, outermost first, for either part.
  std::vector<std::string> Spine() const;
  nlohmann::ordered_json ToJson() const;
};

PartTree BuildPartTree(std::span<const TagToken> skeleton);

// Everything derived from cutting a page around one RoI span.
struct SplitMetrics {
  PartMetrics upper;
  PartMetrics lower;
  Signature signature;
  // Source range between the innermost unpaired upper tag and the first
  // unpaired lower tag; the page start/end when a part has none.
  Span enclosing_region;
};

SplitMetrics AnalyzeSplit(const PageBundle& page, const Span& roi_span);

}  // namespace revwrap

#endif  // REVWRAP_SKELETON_H_
