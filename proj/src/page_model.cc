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

#include "revwrap/page_model.h"

#include <algorithm>
#include <array>
#include <string>
#include <unordered_map>

#include "revwrap/error.h"
#include "revwrap/util.h"

namespace revwrap {

namespace {

bool IsAsciiAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool IsAsciiDigit(char c) { return c >= '0' && c <= '9'; }
bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
bool IsNameChar(char c) {
  return IsAsciiAlpha(c) || IsAsciiDigit(c) || c == '-' || c == '_' || c == ':' || c == '.';
}

bool StartsWithNoCase(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    char c = s[pos + k];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[k]) return false;
  }
  return true;
}

// Finds the end of a start tag whose name ends at `pos`. Quoted attribute
// values may contain '>'; an unterminated quote falls back to the first '>'.
std::size_t FindStartTagEnd(std::string_view src, std::size_t pos) {
  char quote = 0;
  char last = 0;  // last non-space character outside quotes
  for (std::size_t k = pos; k < src.size(); ++k) {
    const char c = src[k];
    if (quote) {
      if (c == quote) {
        quote = 0;
        last = c;
      }
      continue;
    }
    // Only quotes that open an attribute value count.
    if ((c == '"' || c == '\'') && last == '=') {
      quote = c;
    } else if (c == '>') {
      return k;
    }
    if (!IsAsciiSpace(c)) last = c;
  }
  return src.find('>', pos);
}

// Lexes markup starting at src[i] == '<'. Returns false when the '<' does not
// begin a well-formed construct; the caller then treats it as text.
bool LexMarkup(std::string_view src, std::size_t i, TagToken* tok) {
  const std::size_t n = src.size();
  if (i + 1 >= n) return false;
  const char next = src[i + 1];
  if (src.compare(i, 4, "<!--") == 0) {
    const std::size_t close = src.find("-->", i + 4);
    if (close == std::string_view::npos) return false;
    *tok = TagToken{TokenKind::kComment, "", {i, close + 3}, TagClass::kNone};
    return true;
  }
  if (next == '!' || next == '?') {
    const std::size_t close = src.find('>', i + 2);
    if (close == std::string_view::npos) return false;
    const TokenKind kind =
        StartsWithNoCase(src, i, "<!doctype") ? TokenKind::kDoctype : TokenKind::kComment;
    *tok = TagToken{kind, "", {i, close + 1}, TagClass::kNone};
    return true;
  }
  const bool closing = next == '/';
  const std::size_t name_start = closing ? i + 2 : i + 1;
  if (name_start >= n || !IsAsciiAlpha(src[name_start])) return false;
  std::size_t name_end = name_start;
  while (name_end < n && IsNameChar(src[name_end])) ++name_end;
  std::string name = AsciiLower(src.substr(name_start, name_end - name_start));
  const std::size_t close =
      closing ? src.find('>', name_end) : FindStartTagEnd(src, name_end);
  if (close == std::string_view::npos) return false;
  TokenKind kind = TokenKind::kOpenTag;
  if (closing) {
    kind = TokenKind::kCloseTag;
  } else if (close > name_end && src[close - 1] == '/') {
    kind = TokenKind::kSelfClosingTag;
  }
  *tok = TagToken{kind, std::move(name), {i, close + 1}, TagClass::kNone};
  return true;
}

// Content of these elements is raw text: no markup is recognized inside.
bool IsRawTextElement(std::string_view name) { return name == "script" || name == "style"; }

// Elements whose text is not part of the displayed page.
bool IsHiddenTextElement(std::string_view name) {
  return name == "script" || name == "style" || name == "title";
}

std::size_t FindRawTextEnd(std::string_view src, std::size_t pos, std::string_view name) {
  std::string needle = "</";
  needle += name;
  for (std::size_t k = pos; k < src.size(); ++k) {
    if (src[k] != '<' || !StartsWithNoCase(src, k, needle)) continue;
    const std::size_t after = k + needle.size();
    if (after >= src.size() || IsAsciiSpace(src[after]) || src[after] == '>' ||
        src[after] == '/') {
      return k;
    }
  }
  return src.size();
}

// ---- character references -------------------------------------------------

struct EntityEntry {
  const char* name;
  char32_t cp;
};

constexpr EntityEntry kEntities[] = {
#include "entities.inc"
};

const std::unordered_map<std::string_view, char32_t>& EntityTable() {
  static const auto* table = [] {
    auto* m = new std::unordered_map<std::string_view, char32_t>();
    for (const auto& e : kEntities) m->emplace(e.name, e.cp);
    return m;
  }();
  return *table;
}

// Numeric references in 0x80..0x9F name windows-1252 characters.
constexpr std::array<char32_t, 32> kC1Remap = {
    0x20AC, 0x0081, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
    0x2039, 0x0152, 0x008D, 0x017D, 0x008F, 0x0090, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
    0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0x009D, 0x017E, 0x0178};

// `at(k)` yields the k-th character after the '&' (0 past the end or for
// non-ASCII). Returns the number of characters after '&' consumed including
// ';', or 0.
template <typename At>
std::size_t ParseEntity(At at, char32_t* out) {
  constexpr std::size_t kMaxLen = 32;
  if (at(0) == '#') {
    const bool hex = at(1) == 'x' || at(1) == 'X';
    std::size_t k = hex ? 2 : 1;
    std::uint64_t value = 0;
    std::size_t digits = 0;
    for (;; ++k, ++digits) {
      const char32_t c = at(k);
      int d = -1;
      if (c >= '0' && c <= '9') d = static_cast<int>(c - '0');
      else if (hex && c >= 'a' && c <= 'f') d = static_cast<int>(c - 'a' + 10);
      else if (hex && c >= 'A' && c <= 'F') d = static_cast<int>(c - 'A' + 10);
      if (d < 0) break;
      if (value <= 0x10FFFF) value = value * (hex ? 16 : 10) + static_cast<unsigned>(d);
    }
    if (digits == 0 || at(k) != ';') return 0;
    char32_t cp = static_cast<char32_t>(std::min<std::uint64_t>(value, 0x110000));
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    if (cp >= 0x80 && cp <= 0x9F) cp = kC1Remap[cp - 0x80];
    *out = cp;
    return k + 1;
  }
  std::string name;
  std::size_t k = 0;
  for (; k < kMaxLen; ++k) {
    const char32_t c = at(k);
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) break;
    name.push_back(static_cast<char>(c));
  }
  if (name.empty() || at(k) != ';') return 0;
  const auto& table = EntityTable();
  const auto it = table.find(name);
  if (it == table.end()) return 0;
  *out = it->second;
  return k + 1;
}

// ---- decoding units ------------------------------------------------------

// One code point (or one undecodable byte, passed through verbatim) together
// with the source bytes it stands for.
struct Unit {
  char32_t cp = 0;
  bool raw = false;
  bool boundary = false;  // synthesized at a tag boundary
  std::size_t begin = 0;
  std::size_t end = 0;
};

bool IsSpaceUnit(const Unit& u) {
  if (u.raw) return false;
  return u.cp == ' ' || u.cp == '\t' || u.cp == '\n' || u.cp == '\r' || u.cp == '\f' ||
         u.cp == '\v' || u.cp == 0xA0;
}

void DecodeUtf8Units(std::string_view text, std::size_t base, std::vector<Unit>* out) {
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if (b0 >= 0xC2 && b0 <= 0xDF) {
      len = 2;
      cp = b0 & 0x1F;
    } else if (b0 >= 0xE0 && b0 <= 0xEF) {
      len = 3;
      cp = b0 & 0x0F;
    } else if (b0 >= 0xF0 && b0 <= 0xF4) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= n;
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (ok && ((len == 3 && (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF))) ||
               (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)))) {
      ok = false;
    }
    if (!ok) {
      out->push_back(Unit{b0, true, false, base + i, base + i + 1});
      ++i;
      continue;
    }
    out->push_back(Unit{cp, false, false, base + i, base + i + len});
    i += len;
  }
}

// One decoding pass; returns true if any reference was replaced.
bool DecodeEntitiesPass(const std::vector<Unit>& in, std::vector<Unit>* out) {
  out->clear();
  out->reserve(in.size());
  bool changed = false;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Unit& u = in[i];
    if (!u.raw && u.cp == '&') {
      auto at = [&](std::size_t k) -> char32_t {
        const std::size_t idx = i + 1 + k;
        if (idx >= in.size() || in[idx].raw || in[idx].cp > 0x7F) return 0;
        return in[idx].cp;
      };
      char32_t cp = 0;
      if (const std::size_t used = ParseEntity(at, &cp); used > 0) {
        out->push_back(Unit{cp, false, false, u.begin, in[i + used].end});
        i += used;
        changed = true;
        continue;
      }
    }
    out->push_back(u);
  }
  return changed;
}

void DecodeToFixedPoint(std::vector<Unit>* units) {
  std::vector<Unit> next;
  while (DecodeEntitiesPass(*units, &next)) units->swap(next);
}

void AppendUnit(const Unit& u, std::string* out) {
  if (u.raw) {
    out->push_back(static_cast<char>(u.cp));
  } else {
    AppendUtf8(u.cp, out);
  }
}

// Collapses whitespace and boundaries into single spaces, trims, and emits
// text plus anchors. Fed one unit at a time so callers can stream segments.
class Collapser {
 public:
  explicit Collapser(NormalizedText* result) : result_(result) {}

  void Feed(const Unit& u) {
    if (u.boundary || IsSpaceUnit(u)) {
      pending_ = true;
      if (!u.boundary && !has_space_) {
        has_space_ = true;
        space_ = {u.begin, u.end};
      }
      return;
    }
    if (pending_ && !result_->text.empty()) {
      OffsetAnchor a{result_->text.size(), u.begin, u.begin};
      if (has_space_) a = {result_->text.size(), space_.begin, space_.end};
      result_->offset_map.push_back(a);
      result_->text.push_back(' ');
    }
    pending_ = false;
    has_space_ = false;
    result_->offset_map.push_back({result_->text.size(), u.begin, u.end});
    AppendUnit(u, &result_->text);
  }

 private:
  NormalizedText* result_;
  bool pending_ = false;
  bool has_space_ = false;
  Span space_;
};

void EmitCollapsed(const std::vector<Unit>& units, NormalizedText* result) {
  Collapser c(result);
  for (const Unit& u : units) c.Feed(u);
}

}  // namespace

void AppendUtf8(char32_t cp, std::string* out) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string_view TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kOpenTag: return "open-tag";
    case TokenKind::kCloseTag: return "close-tag";
    case TokenKind::kSelfClosingTag: return "self-closing-tag";
    case TokenKind::kText: return "text-run";
    case TokenKind::kComment: return "comment";
    case TokenKind::kDoctype: return "doctype";
  }
  return "?";
}

std::string_view TagClassName(TagClass tag_class) {
  switch (tag_class) {
    case TagClass::kNone: return "none";
    case TagClass::kTextFormat: return "text-format";
    case TagClass::kLayoutFormat: return "layout-format";
    case TagClass::kOther: return "other";
  }
  return "?";
}

std::string TagToken::Canonical() const {
  return kind == TokenKind::kCloseTag ? "</" + name + ">" : "<" + name + ">";
}

const TagClassConfig& TagClassConfig::Defaults() {
  static const TagClassConfig* config = [] {
    auto* c = new TagClassConfig;
    c->text_format_names = {"b",     "i",   "em",  "strong", "u",    "s",    "small", "big",
                            "font",  "sup", "sub", "span",   "a",    "abbr", "code",  "tt"};
    c->layout_format_names = {"html", "head",  "body",  "title", "table", "thead",
                              "tbody", "tr",   "td",    "th",    "div",   "p",
                              "ul",   "ol",    "li",    "dl",    "dt",    "dd",
                              "form", "br",    "hr",    "center", "blockquote"};
    c->void_names = {"br", "hr", "img", "input", "meta", "link"};
    c->version = "default-1";
    return c;
  }();
  return *config;
}

void TagClassConfig::Validate() const {
  for (const auto& name : text_format_names) {
    if (layout_format_names.count(name) != 0) {
      throw Error(ErrorCode::kConfigError,
                  "tag '" + name + "' is both text-format and layout-format");
    }
  }
  if (version.empty()) throw Error(ErrorCode::kConfigError, "tag class config has no version");
}

TagClassConfig TagClassConfig::FromJson(const nlohmann::json& j) {
  TagClassConfig c;
  try {
    auto read_set = [&](const char* key, std::set<std::string>* out) {
      if (!j.contains(key)) return;
      for (const auto& v : j.at(key)) out->insert(AsciiLower(v.get<std::string>()));
    };
    read_set("text_format", &c.text_format_names);
    read_set("layout_format", &c.layout_format_names);
    read_set("void", &c.void_names);
    if (j.contains("version")) c.version = j.at("version").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("bad tag class config: ") + e.what());
  }
  if (c.version.empty()) {
    std::string blob;
    for (const auto* s : {&c.text_format_names, &c.layout_format_names, &c.void_names}) {
      for (const auto& name : *s) blob += name + ",";
      blob += ";";
    }
    c.version = "h-" + Fnv1a64Hex(blob);
  }
  c.Validate();
  return c;
}

TagClassConfig TagClassConfig::LoadFile(const std::string& path) {
  const std::string text = ReadFileOrThrow(path);
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kConfigError, "tag class config is not a JSON object: " + path);
  }
  return FromJson(j);
}

nlohmann::ordered_json TagClassConfig::ToJson() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["text_format"] = text_format_names;
  j["layout_format"] = layout_format_names;
  j["void"] = void_names;
  return j;
}

bool TagClassConfig::IsVoid(std::string_view name) const {
  return void_names.count(std::string(name)) != 0;
}

TagClass ClassifyTag(std::string_view name, const TagClassConfig& config) {
  const std::string key = AsciiLower(name);
  if (config.text_format_names.count(key) != 0) return TagClass::kTextFormat;
  if (config.layout_format_names.count(key) != 0) return TagClass::kLayoutFormat;
  return TagClass::kOther;
}

std::vector<TagToken> Tokenize(std::string_view src, const TagClassConfig& config) {
  std::vector<TagToken> out;
  const std::size_t n = src.size();
  out.reserve(n / 4);
  std::size_t text_start = std::string_view::npos;
  auto flush_text = [&](std::size_t end) {
    if (text_start != std::string_view::npos && end > text_start) {
      out.push_back(TagToken{TokenKind::kText, "", {text_start, end}, TagClass::kNone});
    }
    text_start = std::string_view::npos;
  };
  std::size_t i = 0;
  while (i < n) {
    TagToken tok;
    if (src[i] != '<' || !LexMarkup(src, i, &tok)) {
      if (text_start == std::string_view::npos) text_start = i;
      ++i;
      continue;
    }
    flush_text(i);
    if (tok.is_tag()) {
      tok.tag_class = ClassifyTag(tok.name, config);
      if (tok.kind == TokenKind::kOpenTag && config.IsVoid(tok.name)) {
        tok.kind = TokenKind::kSelfClosingTag;
      }
    }
    i = tok.span.end;
    const bool raw = tok.kind == TokenKind::kOpenTag && IsRawTextElement(tok.name);
    const std::string name = tok.name;
    out.push_back(std::move(tok));
    if (raw) {
      const std::size_t end = FindRawTextEnd(src, i, name);
      if (end > i) out.push_back(TagToken{TokenKind::kText, "", {i, end}, TagClass::kNone});
      i = end;
    }
  }
  flush_text(n);
  return out;
}

std::vector<TagToken> StripTextFormatTags(std::span<const TagToken> tokens) {
  std::vector<TagToken> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (t.is_tag() && t.tag_class == TagClass::kTextFormat) continue;
    out.push_back(t);
  }
  return out;
}

NormalizedText RenderText(std::string_view source, std::span<const TagToken> tokens) {
  NormalizedText result;
  // Upper bounds; untouched capacity is never faulted in.
  result.text.reserve(source.size());
  result.offset_map.reserve(source.size());
  Collapser out(&result);
  std::vector<Unit> segment;
  auto flush_segment = [&] {
    DecodeToFixedPoint(&segment);
    for (const Unit& u : segment) out.Feed(u);
    segment.clear();
  };
  std::string hidden;  // name of the enclosing hidden-text element, if any
  for (const auto& t : tokens) {
    switch (t.kind) {
      case TokenKind::kText:
        if (hidden.empty()) DecodeUtf8Units(t.Slice(source), t.span.begin, &segment);
        break;
      case TokenKind::kOpenTag:
      case TokenKind::kCloseTag:
      case TokenKind::kSelfClosingTag:
        if (t.kind == TokenKind::kOpenTag && hidden.empty() && IsHiddenTextElement(t.name)) {
          hidden = t.name;
        } else if (t.kind == TokenKind::kCloseTag && t.name == hidden) {
          hidden.clear();
        }
        flush_segment();
        out.Feed(Unit{' ', false, true, t.span.begin, t.span.end});
        break;
      case TokenKind::kComment:
      case TokenKind::kDoctype:
        break;
    }
  }
  flush_segment();
  return result;
}

std::string Normalize(std::string_view text) {
  std::vector<Unit> units;
  units.reserve(text.size());
  DecodeUtf8Units(text, 0, &units);
  DecodeToFixedPoint(&units);
  NormalizedText result;
  EmitCollapsed(units, &result);
  return std::move(result.text);
}

std::size_t DecodeEntityAt(std::string_view text, std::size_t pos, char32_t* out) {
  if (pos >= text.size() || text[pos] != '&') return 0;
  auto at = [&](std::size_t k) -> char32_t {
    const std::size_t idx = pos + 1 + k;
    if (idx >= text.size()) return 0;
    const auto c = static_cast<unsigned char>(text[idx]);
    return c < 0x80 ? c : 0;
  };
  const std::size_t used = ParseEntity(at, out);
  return used == 0 ? 0 : used + 1;
}

const OffsetAnchor& NormalizedText::AnchorAt(std::size_t normalized_index) const {
  auto it = std::upper_bound(
      offset_map.begin(), offset_map.end(), normalized_index,
      [](std::size_t idx, const OffsetAnchor& a) { return idx < a.normalized; });
  if (it == offset_map.begin()) throw std::out_of_range("normalized index before first anchor");
  return *(it - 1);
}

Span NormalizedText::SourceSpan(std::size_t begin, std::size_t end) const {
  const OffsetAnchor& first = AnchorAt(begin);
  const OffsetAnchor& last = AnchorAt(end - 1);
  return {first.source, std::max(first.source, last.source_end)};
}

PageBundle PageBundle::Build(std::string source_ref, std::string source,
                             const TagClassConfig& config) {
  PageBundle page;
  page.source_ref = std::move(source_ref);
  page.source = std::move(source);
  page.tokens = Tokenize(page.source, config);
  page.stripped = StripTextFormatTags(page.tokens);
  page.rendered = RenderText(page.source, page.stripped);
  return page;
}

}  // namespace revwrap
