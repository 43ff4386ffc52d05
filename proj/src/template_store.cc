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

#include "revwrap/template_store.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <system_error>
#include <thread>

#include "revwrap/error.h"
#include "revwrap/extractor.h"

namespace revwrap {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Text tokens whose content is never displayed.
std::vector<char> HiddenTextFlags(const std::vector<TagToken>& tokens) {
  std::vector<char> hidden(tokens.size(), 0);
  std::string open;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const TagToken& t = tokens[i];
    if (t.kind == TokenKind::kOpenTag && open.empty() &&
        (t.name == "script" || t.name == "style" || t.name == "title")) {
      open = t.name;
    } else if (t.kind == TokenKind::kCloseTag && t.name == open) {
      open.clear();
    } else if (t.kind == TokenKind::kText && !open.empty()) {
      hidden[i] = 1;
    }
  }
  return hidden;
}

// Index of the token containing source byte `pos`.
std::size_t TokenAt(const std::vector<TagToken>& tokens, std::size_t pos) {
  auto it = std::upper_bound(tokens.begin(), tokens.end(), pos,
                             [](std::size_t p, const TagToken& t) { return p < t.span.begin; });
  if (it == tokens.begin()) return kNone;
  const std::size_t idx = static_cast<std::size_t>(it - tokens.begin()) - 1;
  return pos < tokens[idx].span.end ? idx : kNone;
}

class DelimiterScanner {
 public:
  DelimiterScanner(const PageBundle& page, const Span& region, const TagClassConfig& config)
      : page_(page), region_(region), config_(config), hidden_(HiddenTextFlags(page.tokens)) {}

  // Nearest qualifying tag before `pos` with no displayed text in between.
  std::size_t Backward(std::size_t pos) const {
    if (pos == 0 || pos <= region_.begin) return kNone;
    const auto& tokens = page_.tokens;
    for (std::size_t t = TokenAt(tokens, pos - 1); t != kNone; t = t == 0 ? kNone : t - 1) {
      const TagToken& tok = tokens[t];
      if (tok.span.end <= region_.begin) break;
      if (tok.kind == TokenKind::kText) {
        if (Displays(t, std::max(tok.span.begin, region_.begin), std::min(tok.span.end, pos))) {
          return kNone;
        }
      } else if (tok.is_tag()) {
        if (tok.span.begin < region_.begin) break;
        if (Qualifies(tok)) return t;
      }
    }
    return kNone;
  }

  // Nearest qualifying tag at or after `pos` with no displayed text in between.
  std::size_t Forward(std::size_t pos) const {
    const auto& tokens = page_.tokens;
    if (pos >= region_.end) return kNone;
    for (std::size_t t = TokenAt(tokens, pos); t != kNone && t < tokens.size(); ++t) {
      const TagToken& tok = tokens[t];
      if (tok.span.begin >= region_.end) break;
      if (tok.kind == TokenKind::kText) {
        if (Displays(t, std::max(tok.span.begin, pos), std::min(tok.span.end, region_.end))) {
          return kNone;
        }
      } else if (tok.is_tag()) {
        if (tok.span.end > region_.end) break;
        if (Qualifies(tok)) return t;
      }
    }
    return kNone;
  }

 private:
  bool Qualifies(const TagToken& t) const {
    if (t.tag_class == TagClass::kLayoutFormat) return true;
    return t.kind == TokenKind::kSelfClosingTag && config_.IsVoid(t.name);
  }

  bool Displays(std::size_t token, std::size_t b, std::size_t e) const {
    if (hidden_[token] || e <= b) return false;
    return !Normalize(std::string_view(page_.source).substr(b, e - b)).empty();
  }

  const PageBundle& page_;
  Span region_;
  const TagClassConfig& config_;
  std::vector<char> hidden_;
};

std::optional<std::string> OptionalString(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

nlohmann::ordered_json Template::ToJson() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["source_ref"] = source_ref;
  j["roi_spec"] = roi_spec.ToJson();
  j["signature"] = signature.ToJson();
  j["upper_open_path"] = upper_open_path;
  j["lower_open_path"] = lower_open_path;
  j["delimiters"] = nlohmann::ordered_json::array();
  for (const auto& d : delimiters) {
    nlohmann::ordered_json item;
    item["label"] = d.label;
    item["start_tag"] = d.start_tag ? nlohmann::ordered_json(*d.start_tag) : nullptr;
    item["end_tag"] = d.end_tag ? nlohmann::ordered_json(*d.end_tag) : nullptr;
    item["ordinal"] = d.ordinal;
    j["delimiters"].push_back(std::move(item));
  }
  j["tag_class_version"] = tag_class_version;
  j["created_at"] = FormatTimestamp(created_at);
  j["updated_at"] = FormatTimestamp(updated_at);
  j["history"] = nlohmann::ordered_json::array();
  for (const auto& h : history) {
    nlohmann::ordered_json item;
    item["signature"] = h.signature.ToJson();
    item["updated_at"] = FormatTimestamp(h.updated_at);
    j["history"].push_back(std::move(item));
  }
  return j;
}

Template Template::FromJson(const nlohmann::json& j) {
  Template t;
  try {
    t.id = j.at("id").get<std::string>();
    t.source_ref = j.at("source_ref").get<std::string>();
    t.roi_spec = RoiSpec::FromJson(j.at("roi_spec"));
    t.signature = Signature::FromJson(j.at("signature"));
    t.upper_open_path = j.at("upper_open_path").get<std::vector<std::string>>();
    t.lower_open_path = j.at("lower_open_path").get<std::vector<std::string>>();
    for (const auto& d : j.at("delimiters")) {
      t.delimiters.push_back({d.at("label").get<std::string>(), OptionalString(d, "start_tag"),
                              OptionalString(d, "end_tag"), d.at("ordinal").get<std::size_t>()});
    }
    t.tag_class_version = j.at("tag_class_version").get<std::string>();
    t.created_at = ParseTimestamp(j.at("created_at").get<std::string>());
    t.updated_at = ParseTimestamp(j.at("updated_at").get<std::string>());
    for (const auto& h : j.at("history")) {
      t.history.push_back({Signature::FromJson(h.at("signature")),
                           ParseTimestamp(h.at("updated_at").get<std::string>())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kStoreError, std::string("malformed template: ") + e.what());
  }
  return t;
}

std::string Template::Serialize() const { return ToJson().dump(2) + "\n"; }

std::string TemplateId(const std::string& source_ref, const RoiSpec& roi) {
  return Fnv1a64Hex(source_ref + "\n" + roi.ToJson().dump());
}

std::vector<AttributeDelimiter> InduceDelimiters(const PageBundle& page, const RoiLocation& loc,
                                                 const Span& region, const TagClassConfig& config) {
  const DelimiterScanner scanner(page, region, config);
  const auto& spans = loc.attribute_spans;
  std::vector<std::size_t> start_tok(spans.size()), end_tok(spans.size());
  for (std::size_t k = 0; k < spans.size(); ++k) {
    start_tok[k] = scanner.Backward(spans[k].span.begin);
    end_tok[k] = scanner.Forward(spans[k].span.end);
  }
  for (std::size_t k = 0; k + 1 < spans.size(); ++k) {
    if (end_tok[k] != kNone && end_tok[k] == start_tok[k + 1]) end_tok[k] = kNone;
    if (end_tok[k] == kNone && start_tok[k + 1] == kNone) {
      throw Error(ErrorCode::kDelimiterCollision,
                  "no markup separates attribute '" + spans[k].label + "' from '" +
                      spans[k + 1].label + "'",
                  spans[k + 1].label);
    }
  }
  std::vector<AttributeDelimiter> out;
  for (std::size_t k = 0; k < spans.size(); ++k) {
    AttributeDelimiter d;
    d.label = spans[k].label;
    d.ordinal = k;
    if (start_tok[k] != kNone) d.start_tag = page.tokens[start_tok[k]].Canonical();
    if (end_tok[k] != kNone) d.end_tag = page.tokens[end_tok[k]].Canonical();
    out.push_back(std::move(d));
  }
  return out;
}

Induction InduceTemplateDetailed(const PageBundle& page, const RoiSpec& roi,
                                 const std::string& source_ref, const TagClassConfig& config,
                                 const InduceOptions& options) {
  RoiSpec normalized = roi;
  normalized.roi_text = Normalize(roi.roi_text);
  for (auto& a : normalized.attributes) {
    a.label = Normalize(a.label);
    a.text = Normalize(a.text);
  }
  Induction result;
  result.location = LocateRoi(page, normalized, {options.first_match});
  result.metrics = AnalyzeSplit(page, result.location.roi_span);
  result.warnings = result.location.warnings;

  Template& t = result.tmpl;
  t.id = TemplateId(source_ref, normalized);
  t.source_ref = source_ref;
  t.roi_spec = normalized;
  t.signature = result.metrics.signature;
  t.upper_open_path = result.metrics.upper.open_path;
  t.lower_open_path = result.metrics.lower.open_path;
  t.delimiters =
      InduceDelimiters(page, result.location, result.metrics.enclosing_region, config);
  t.tag_class_version = config.version;
  t.created_at = t.updated_at = options.now.value_or(Now());

  try {
    const auto values = SliceAttributes(page, t.delimiters, result.metrics.enclosing_region);
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (values[k].text != normalized.attributes[k].text) {
        result.warnings.push_back("attribute '" + values[k].label + "' re-extracts as \"" +
                                  values[k].text + "\"");
      }
    }
  } catch (const Error& e) {
    result.warnings.push_back(std::string("template does not re-extract its exemplar: ") +
                              e.what());
  }
  return result;
}

Template InduceTemplate(const PageBundle& page, const RoiSpec& roi, const std::string& source_ref,
                        const TagClassConfig& config, const InduceOptions& options) {
  return InduceTemplateDetailed(page, roi, source_ref, config, options).tmpl;
}

TemplateStore::TemplateStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path TemplateStore::PathFor(const std::string& id) const {
  const bool valid = !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           c == '-' || c == '_';
  });
  if (!valid) throw Error(ErrorCode::kTemplateNotFound, "no template with id '" + id + "'");
  return dir_ / (id + ".json");
}

std::filesystem::path TemplateStore::Save(const Template& t) const {
  static std::atomic<unsigned> counter{0};
  const auto path = PathFor(t.id);
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::kStoreError, "cannot create store " + dir_.string() + ": " + ec.message());
  const auto tmp = dir_ / (t.id + ".json.tmp" +
                           std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) +
                           "." + std::to_string(counter++));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << t.Serialize();
    if (!out) throw Error(ErrorCode::kStoreError, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kStoreError, "cannot write " + path.string() + ": " + ec.message());
  return path;
}

Template TemplateStore::Load(const std::string& id) const {
  const auto path = PathFor(id);
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kTemplateNotFound, "no template with id '" + id + "'");
  }
  std::string text;
  try {
    text = ReadFileOrThrow(path.string());
  } catch (const Error&) {
    throw Error(ErrorCode::kStoreError, "cannot read " + path.string());
  }
  const nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kStoreError, "corrupt template file " + path.string());
  return Template::FromJson(j);
}

bool TemplateStore::Contains(const std::string& id) const {
  try {
    return std::filesystem::exists(PathFor(id));
  } catch (const Error&) {
    return false;
  }
}

std::vector<Template> TemplateStore::LoadAll() const {
  std::vector<Template> out;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    out.push_back(Load(entry.path().stem().string()));
  }
  std::sort(out.begin(), out.end(), [](const Template& a, const Template& b) {
    return a.updated_at != b.updated_at ? a.updated_at < b.updated_at : a.id < b.id;
  });
  return out;
}

std::vector<std::string> TemplateStore::List() const {
  std::vector<std::string> ids;
  for (const auto& t : LoadAll()) ids.push_back(t.id);
  return ids;
}

}  // namespace revwrap
