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

// Tolerant HTML lexing, tag classification and displayed-text rendering.
//
// The lexer never rejects input: every byte of the source belongs to exactly
// one token, and constructs it cannot make sense of (a '<' that does not start
// a tag, an unterminated comment) are emitted as text. Rendering reproduces
// what an operator copies out of a browser window, in the canonical
// whitespace-collapsed form produced by Normalize(), and keeps a map from
// every rendered character back to the source bytes it came from.

#ifndef REVWRAP_PAGE_MODEL_H_
#define REVWRAP_PAGE_MODEL_H_

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace revwrap {

// Half-open byte range [begin, end) into a source string.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool Contains(const Span& other) const {
    return begin <= other.begin && other.end <= end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class TokenKind { kOpenTag, kCloseTag, kSelfClosingTag, kText, kComment, kDoctype };

enum class TagClass { kNone, kTextFormat, kLayoutFormat, kOther };

std::string_view TokenKindName(TokenKind kind);
std::string_view TagClassName(TagClass tag_class);

struct TagToken {
  TokenKind kind = TokenKind::kText;
  std::string name;  // lowercase; empty for text, comments and doctype
  Span span;
  TagClass tag_class = TagClass::kNone;  // kNone for non-tags

  bool is_tag() const {
    return kind == TokenKind::kOpenTag || kind == TokenKind::kCloseTag ||
           kind == TokenKind::kSelfClosingTag;
  }
  // "<name>" for open and self-closing tags, "</name>" for close tags.
  std::string Canonical() const;
  std::string_view Slice(std::string_view source) const {
    return source.substr(span.begin, span.size());
  }
  friend bool operator==(const TagToken&, const TagToken&) = default;
};

struct TagClassConfig {
  std::set<std::string> text_format_names;
  std::set<std::string> layout_format_names;
  std::set<std::string> void_names;
  std::string version;

  // The built-in sets; version "default-1".
  static const TagClassConfig& Defaults();

  // Throws Error(kConfigError) when the text-format and layout-format sets
  // intersect or the version is empty.
  void Validate() const;

  // {"version", "text_format", "layout_format", "void"}. A missing version
  // is derived from a hash of the three sets.
  static TagClassConfig FromJson(const nlohmann::json& j);
  static TagClassConfig LoadFile(const std::string& path);
  nlohmann::ordered_json ToJson() const;

  bool IsVoid(std::string_view name) const;
};

struct OffsetAnchor {
  std::size_t normalized = 0;  // byte offset of a code point in the text
  std::size_t source = 0;      // first source byte it was decoded from
  std::size_t source_end = 0;  // one past its last source byte; == source for
                               // separators synthesized at tag boundaries
};

struct NormalizedText {
  std::string text;
  // One anchor per emitted code point, ordered by both coordinates.
  std::vector<OffsetAnchor> offset_map;

  // Anchor for the code point containing byte `normalized_index` of text.
  const OffsetAnchor& AnchorAt(std::size_t normalized_index) const;
  // Source range covering the rendered bytes [begin, end); end > begin.
  Span SourceSpan(std::size_t begin, std::size_t end) const;
};

std::vector<TagToken> Tokenize(std::string_view source,
                               const TagClassConfig& config = TagClassConfig::Defaults());

TagClass ClassifyTag(std::string_view name, const TagClassConfig& config);

std::vector<TagToken> StripTextFormatTags(std::span<const TagToken> tokens);

// Concatenates displayed text: entities decoded, every tag boundary and
// whitespace run turned into one space, both ends trimmed. Text inside
// script, style and title elements is not displayed. Comments are invisible
// and do not separate words. Callers normally pass StripTextFormatTags output
// so that inline markup does not split words.
NormalizedText RenderText(std::string_view source, std::span<const TagToken> tokens);

// Entity-decodes to a fixed point, collapses whitespace runs (including
// U+00A0) to one space and trims. Idempotent.
std::string Normalize(std::string_view text);

// Decodes one character reference starting at `pos` (which must point at
// '&'). Returns the number of bytes consumed, 0 if no reference parses there.
std::size_t DecodeEntityAt(std::string_view text, std::size_t pos, char32_t* out);

// Everything the downstream modules need from one page.
struct PageBundle {
  std::string source_ref;
  std::string source;
  std::vector<TagToken> tokens;    // full token stream
  std::vector<TagToken> stripped;  // text-format tags removed
  NormalizedText rendered;

  static PageBundle Build(std::string source_ref, std::string source,
                          const TagClassConfig& config = TagClassConfig::Defaults());
};

void AppendUtf8(char32_t cp, std::string* out);

}  // namespace revwrap

#endif  // REVWRAP_PAGE_MODEL_H_
