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

#include "revwrap/skeleton.h"

#include "revwrap/error.h"

namespace revwrap {

namespace {

bool IsSkeletonToken(const TagToken& t) {
  return (t.kind == TokenKind::kOpenTag || t.kind == TokenKind::kCloseTag) &&
         t.tag_class == TagClass::kLayoutFormat;
}

void CollectSpine(const std::vector<PartNode>& nodes, std::vector<std::string>* out) {
  for (const auto& n : nodes) {
    if (!n.paired) out->push_back(n.name);
    CollectSpine(n.children, out);
  }
}

std::size_t CountIn(const std::vector<PartNode>& nodes, bool paired) {
  std::size_t total = 0;
  for (const auto& n : nodes) total += (n.paired == paired ? 1 : 0) + CountIn(n.children, paired);
  return total;
}

nlohmann::ordered_json NodesToJson(const std::vector<PartNode>& nodes) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& n : nodes) {
    nlohmann::ordered_json j;
    j["name"] = n.name;
    j["paired"] = n.paired;
    if (!n.paired) j["kind"] = std::string(TokenKindName(n.kind));
    j["children"] = NodesToJson(n.children);
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

std::string_view SideName(Side side) { return side == Side::kUpper ? "upper" : "lower"; }

std::vector<TagToken> LayoutSkeleton(std::string_view part_source, const TagClassConfig& config,
                                     std::size_t base_offset) {
  std::vector<TagToken> out = LayoutSkeleton(Tokenize(part_source, config));
  for (auto& t : out) {
    t.span.begin += base_offset;
    t.span.end += base_offset;
  }
  return out;
}

std::vector<TagToken> LayoutSkeleton(std::span<const TagToken> tokens) {
  std::vector<TagToken> out;
  for (const auto& t : tokens) {
    if (IsSkeletonToken(t)) out.push_back(t);
  }
  return out;
}

SkeletonMatch MatchSkeleton(std::span<const TagToken> skeleton) {
  SkeletonMatch m;
  m.partner.assign(skeleton.size(), SkeletonMatch::kUnpaired);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < skeleton.size(); ++i) {
    const TagToken& t = skeleton[i];
    if (t.kind == TokenKind::kOpenTag) {
      stack.push_back(i);
    } else if (!stack.empty() && skeleton[stack.back()].name == t.name) {
      m.partner[i] = stack.back();
      m.partner[stack.back()] = i;
      stack.pop_back();
      ++m.pair_count;
    }
  }
  for (std::size_t i = 0; i < skeleton.size(); ++i) {
    if (m.partner[i] == SkeletonMatch::kUnpaired) m.unpaired.push_back(i);
  }
  return m;
}

PartMetrics ComputePartMetrics(std::span<const TagToken> skeleton, Side side) {
  const SkeletonMatch m = MatchSkeleton(skeleton);
  PartMetrics p;
  p.side = side;
  p.n_ot = static_cast<std::int64_t>(m.unpaired.size());
  p.n_ct = static_cast<std::int64_t>(m.pair_count) * kClosedTagsPerPair;
  p.sigma = p.n_ot - p.n_ct;
  for (std::size_t i : m.unpaired) p.open_path.push_back(skeleton[i].name);
  return p;
}

std::string_view SymmetryName(Symmetry s) {
  switch (s) {
    case Symmetry::kFullySymmetric: return "fully-symmetric";
    case Symmetry::kLowerAsymmetric: return "lower-asymmetric";
    case Symmetry::kUpperAsymmetric: return "upper-asymmetric";
  }
  return "?";
}

Signature Signature::FromSigmas(std::int64_t sigma_upper, std::int64_t sigma_lower) {
  Signature s;
  s.sigma_upper = sigma_upper;
  s.sigma_lower = sigma_lower;
  s.delta = sigma_upper - sigma_lower;
  s.symmetry = s.delta == 0  ? Symmetry::kFullySymmetric
               : s.delta < 0 ? Symmetry::kLowerAsymmetric
                             : Symmetry::kUpperAsymmetric;
  return s;
}

nlohmann::ordered_json Signature::ToJson() const {
  nlohmann::ordered_json j;
  j["sigma_upper"] = sigma_upper;
  j["sigma_lower"] = sigma_lower;
  j["delta"] = delta;
  j["symmetry"] = std::string(SymmetryName(symmetry));
  return j;
}

Signature Signature::FromJson(const nlohmann::json& j) {
  Signature s;
  try {
    s = FromSigmas(j.at("sigma_upper").get<std::int64_t>(), j.at("sigma_lower").get<std::int64_t>());
    if (j.at("delta").get<std::int64_t>() != s.delta ||
        j.at("symmetry").get<std::string>() != SymmetryName(s.symmetry)) {
      throw Error(ErrorCode::kStoreError, "signature delta/symmetry inconsistent with sigmas");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kStoreError, std::string("malformed signature: ") + e.what());
  }
  return s;
}

Signature ComputeSignature(const PartMetrics& upper, const PartMetrics& lower) {
  return Signature::FromSigmas(upper.sigma, lower.sigma);
}

std::size_t PartTree::CountNodes(bool paired) const { return CountIn(roots, paired); }

std::vector<std::string> PartTree::Spine() const {
  std::vector<std::string> out;
  CollectSpine(roots, &out);
  return out;
}

nlohmann::ordered_json PartTree::ToJson() const { return NodesToJson(roots); }

PartTree BuildPartTree(std::span<const TagToken> skeleton) {
  const SkeletonMatch m = MatchSkeleton(skeleton);
  PartTree tree;
  // Containers of the open elements; only the top one is ever appended to,
  // so the pointers below it stay valid.
  std::vector<std::vector<PartNode>*> stack{&tree.roots};
  for (std::size_t i = 0; i < skeleton.size(); ++i) {
    const TagToken& t = skeleton[i];
    const bool paired = m.partner[i] != SkeletonMatch::kUnpaired;
    auto* top = stack.back();
    if (t.kind == TokenKind::kOpenTag) {
      top->push_back(PartNode{t.name, t.kind, paired, {}});
      stack.push_back(&top->back().children);
    } else if (paired) {
      stack.pop_back();
    } else {
      PartNode node{t.name, t.kind, false, std::move(*top)};
      top->clear();
      top->push_back(std::move(node));
    }
  }
  return tree;
}

SplitMetrics AnalyzeSplit(const PageBundle& page, const Span& roi_span) {
  std::vector<TagToken> upper_tokens, lower_tokens;
  for (const auto& t : page.tokens) {
    if (t.span.end <= roi_span.begin) {
      upper_tokens.push_back(t);
    } else if (t.span.begin >= roi_span.end) {
      lower_tokens.push_back(t);
    }
  }
  const auto upper = LayoutSkeleton(upper_tokens);
  const auto lower = LayoutSkeleton(lower_tokens);
  SplitMetrics out;
  out.upper = ComputePartMetrics(upper, Side::kUpper);
  out.lower = ComputePartMetrics(lower, Side::kLower);
  out.signature = ComputeSignature(out.upper, out.lower);
  const SkeletonMatch mu = MatchSkeleton(upper);
  const SkeletonMatch ml = MatchSkeleton(lower);
  out.enclosing_region.begin = mu.unpaired.empty() ? 0 : upper[mu.unpaired.back()].span.end;
  out.enclosing_region.end =
      ml.unpaired.empty() ? page.source.size() : lower[ml.unpaired.front()].span.begin;
  return out;
}

}  // namespace revwrap
