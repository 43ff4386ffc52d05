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

#include "revwrap/fetcher.h"

#include <curl/curl.h>
#include <iconv.h>

#include <array>
#include <cerrno>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "revwrap/error.h"

namespace revwrap {

namespace {

constexpr std::size_t kMetaScanBytes = 4096;
constexpr long kMaxRedirects = 5;

// 0x80..0x9F of windows-1252; undefined slots stay C1 controls.
constexpr std::array<char32_t, 32> kCp1252High = {
    0x20AC, 0x0081, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
    0x2039, 0x0152, 0x008D, 0x017D, 0x008F, 0x0090, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
    0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0x009D, 0x017E, 0x0178};

bool IsUtf8Label(std::string_view label) {
  return label == "utf-8" || label == "utf8" || label == "unicode-1-1-utf-8";
}

bool IsLatin1Label(std::string_view label) {
  static constexpr std::string_view kLabels[] = {
      "iso-8859-1", "iso8859-1", "iso_8859-1", "latin1",   "l1",           "cp819",
      "ibm819",     "cp1252",    "windows-1252", "x-cp1252", "us-ascii",   "ascii",
      "iso-ir-100", "csisolatin1", "iso_8859-1:1987", "ansi_x3.4-1968"};
  for (auto l : kLabels) {
    if (l == label) return true;
  }
  return false;
}

std::string DecodeUtf8(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  const std::size_t n = raw.size();
  std::size_t i = 0;
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(raw[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      out.push_back(static_cast<char>(b0));
      ++i;
      continue;
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
      const auto b = static_cast<unsigned char>(raw[i + k]);
      if ((b & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (ok && ((len == 3 && (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF))) ||
               (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)))) {
      ok = false;
    }
    if (!ok) {
      AppendUtf8(0xFFFD, &out);
      ++i;
      continue;
    }
    out.append(raw.substr(i, len));
    i += len;
  }
  return out;
}

std::string DecodeCp1252(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (const char c : raw) {
    const auto b = static_cast<unsigned char>(c);
    if (b < 0x80) {
      out.push_back(c);
    } else if (b < 0xA0) {
      AppendUtf8(kCp1252High[b - 0x80], &out);
    } else {
      AppendUtf8(b, &out);
    }
  }
  return out;
}

std::optional<std::string> DecodeIconv(std::string_view raw, const std::string& charset) {
  iconv_t cd = iconv_open("UTF-8", charset.c_str());
  if (cd == reinterpret_cast<iconv_t>(-1)) return std::nullopt;
  std::string out;
  std::array<char, 4096> buf;
  char* in = const_cast<char*>(raw.data());
  std::size_t in_left = raw.size();
  while (in_left > 0) {
    char* o = buf.data();
    std::size_t o_left = buf.size();
    const std::size_t rc = iconv(cd, &in, &in_left, &o, &o_left);
    out.append(buf.data(), buf.size() - o_left);
    if (rc == static_cast<std::size_t>(-1)) {
      if (errno == E2BIG) continue;
      // EILSEQ or a truncated tail: one replacement per bad byte.
      AppendUtf8(0xFFFD, &out);
      ++in;
      --in_left;
      iconv(cd, nullptr, nullptr, nullptr, nullptr);
    }
  }
  iconv_close(cd);
  return DecodeUtf8(out);
}

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '"' || s[b] == '\'')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '"' || s[e - 1] == '\'' ||
                   s[e - 1] == ';')) {
    --e;
  }
  return std::string(s.substr(b, e - b));
}

std::optional<std::string> CharsetAfter(std::string_view lower, std::size_t pos) {
  pos += 7;  // "charset"
  while (pos < lower.size() && (lower[pos] == ' ' || lower[pos] == '\t')) ++pos;
  if (pos >= lower.size() || lower[pos] != '=') return std::nullopt;
  ++pos;
  while (pos < lower.size() && (lower[pos] == ' ' || lower[pos] == '"' || lower[pos] == '\'')) ++pos;
  std::size_t end = pos;
  while (end < lower.size() && lower[end] != '"' && lower[end] != '\'' && lower[end] != ';' &&
         lower[end] != ' ' && lower[end] != '>' && lower[end] != '/' && lower[end] != ',') {
    ++end;
  }
  std::string label = Trim(lower.substr(pos, end - pos));
  if (label.empty()) return std::nullopt;
  return label;
}

struct BomInfo {
  std::size_t length = 0;
  const char* charset = nullptr;
};

BomInfo DetectBom(std::string_view raw) {
  if (raw.starts_with("\xEF\xBB\xBF")) return {3, "utf-8"};
  if (raw.starts_with("\xFF\xFE")) return {2, "utf-16le"};
  if (raw.starts_with("\xFE\xFF")) return {2, "utf-16be"};
  return {};
}

std::string FilePathOf(const std::string& ref) {
  if (ref.starts_with("file://")) {
    std::string path = ref.substr(7);
    if (path.starts_with("localhost/")) path = path.substr(9);
    return path;
  }
  return ref;
}

std::string ReadLocal(const std::string& ref, const FetchOptions& options) {
  const std::string path = FilePathOf(ref);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kFileNotFound, "no such file: " + path);
  }
  const auto size = std::filesystem::file_size(path, ec);
  if (!ec && size > options.max_bytes) {
    throw Error(ErrorCode::kTooLarge, path + " is " + std::to_string(size) + " bytes, limit " +
                                          std::to_string(options.max_bytes));
  }
  return ReadFileOrThrow(path);
}

void CurlGlobalInit() {
  static const bool done = [] {
    curl_global_init(CURL_GLOBAL_DEFAULT);
    return true;
  }();
  (void)done;
}

struct Sink {
  std::string* body;
  std::size_t max_bytes;
  bool overflow = false;
};

std::size_t WriteBody(char* data, std::size_t size, std::size_t nmemb, void* user) {
  auto* sink = static_cast<Sink*>(user);
  const std::size_t n = size * nmemb;
  if (sink->body->size() + n > sink->max_bytes) {
    sink->overflow = true;
    return 0;
  }
  sink->body->append(data, n);
  return n;
}

struct CurlDeleter {
  void operator()(CURL* c) const { curl_easy_cleanup(c); }
};

// Returns the body; fills status and content type.
std::string ReadRemote(const std::string& url, const FetchOptions& options, int* status,
                       std::string* content_type) {
  CurlGlobalInit();
  std::unique_ptr<CURL, CurlDeleter> curl(curl_easy_init());
  if (!curl) throw Error(ErrorCode::kNetworkError, "could not initialise transfer");
  std::string body;
  Sink sink{&body, options.max_bytes};
  char errbuf[CURL_ERROR_SIZE] = {0};
  CURL* c = curl.get();
  curl_easy_setopt(c, CURLOPT_URL, url.c_str());
  curl_easy_setopt(c, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(c, CURLOPT_MAXREDIRS, kMaxRedirects);
  curl_easy_setopt(c, CURLOPT_TIMEOUT, options.timeout_seconds);
  curl_easy_setopt(c, CURLOPT_USERAGENT, options.user_agent.c_str());
  curl_easy_setopt(c, CURLOPT_WRITEFUNCTION, WriteBody);
  curl_easy_setopt(c, CURLOPT_WRITEDATA, &sink);
  curl_easy_setopt(c, CURLOPT_ERRORBUFFER, errbuf);
  curl_easy_setopt(c, CURLOPT_NOSIGNAL, 1L);
  curl_easy_setopt(c, CURLOPT_ACCEPT_ENCODING, "");
  curl_easy_setopt(c, CURLOPT_PROTOCOLS, static_cast<long>(CURLPROTO_HTTP | CURLPROTO_HTTPS));
  curl_easy_setopt(c, CURLOPT_REDIR_PROTOCOLS, static_cast<long>(CURLPROTO_HTTP | CURLPROTO_HTTPS));
  const CURLcode rc = curl_easy_perform(c);
  if (sink.overflow || rc == CURLE_FILESIZE_EXCEEDED) {
    throw Error(ErrorCode::kTooLarge, url + " exceeds " + std::to_string(options.max_bytes) + " bytes");
  }
  if (rc != CURLE_OK) {
    throw Error(ErrorCode::kNetworkError,
                url + ": " + (errbuf[0] ? std::string(errbuf) : curl_easy_strerror(rc)));
  }
  long code = 0;
  curl_easy_getinfo(c, CURLINFO_RESPONSE_CODE, &code);
  *status = static_cast<int>(code);
  if (code >= 400) {
    throw Error(ErrorCode::kHttpError, url + " returned HTTP " + std::to_string(code), "",
                static_cast<int>(code));
  }
  char* ct = nullptr;
  curl_easy_getinfo(c, CURLINFO_CONTENT_TYPE, &ct);
  if (ct != nullptr) *content_type = ct;
  return body;
}

}  // namespace

bool IsRemoteRef(std::string_view source_ref) {
  const std::string lower = AsciiLower(source_ref.substr(0, 8));
  return lower.starts_with("http://") || lower.starts_with("https://");
}

std::optional<std::string> CharsetFromContentType(std::string_view content_type) {
  const std::string lower = AsciiLower(content_type);
  const std::size_t pos = lower.find("charset");
  if (pos == std::string::npos) return std::nullopt;
  return CharsetAfter(lower, pos);
}

std::optional<std::string> CharsetFromMeta(std::string_view raw) {
  const std::string lower = AsciiLower(raw.substr(0, kMetaScanBytes));
  std::size_t pos = 0;
  while ((pos = lower.find("<meta", pos)) != std::string::npos) {
    const std::size_t end = lower.find('>', pos);
    const std::string_view tag = std::string_view(lower).substr(
        pos, end == std::string::npos ? std::string::npos : end - pos);
    const std::size_t at = tag.find("charset");
    if (at != std::string_view::npos) {
      if (auto label = CharsetAfter(tag, at)) return label;
    }
    pos += 5;
  }
  return std::nullopt;
}

std::string DecodeBytes(std::string_view raw, std::string_view charset) {
  const std::string label = AsciiLower(charset);
  if (label.empty() || IsUtf8Label(label)) return DecodeUtf8(raw);
  if (IsLatin1Label(label)) return DecodeCp1252(raw);
  if (auto decoded = DecodeIconv(raw, label)) return *decoded;
  return DecodeUtf8(raw);
}

PageSource Fetch(const std::string& source_ref, const FetchOptions& options) {
  if (source_ref.empty()) throw Error(ErrorCode::kUsage, "empty source reference");
  PageSource page;
  page.source_ref = source_ref;
  std::string content_type;
  if (IsRemoteRef(source_ref)) {
    page.raw = ReadRemote(source_ref, options, &page.status, &content_type);
  } else {
    page.raw = ReadLocal(source_ref, options);
  }
  page.fetched_at = Now();

  const BomInfo bom = DetectBom(page.raw);
  std::optional<std::string> charset;
  if (bom.charset != nullptr) {
    charset = bom.charset;
  } else if (auto from_header = CharsetFromContentType(content_type)) {
    charset = from_header;
  } else {
    charset = CharsetFromMeta(page.raw);
  }
  page.charset = charset.value_or("utf-8");
  if (!IsUtf8Label(page.charset) && !IsLatin1Label(page.charset)) {
    iconv_t cd = iconv_open("UTF-8", page.charset.c_str());
    if (cd == reinterpret_cast<iconv_t>(-1)) {
      page.charset = "utf-8";
    } else {
      iconv_close(cd);
    }
  }
  page.decoded = DecodeBytes(std::string_view(page.raw).substr(bom.length), page.charset);
  return page;
}

PageBundle FetchBundle(const std::string& source_ref, const TagClassConfig& config,
                       const FetchOptions& options) {
  PageSource src = Fetch(source_ref, options);
  return PageBundle::Build(src.source_ref, std::move(src.decoded), config);
}

}  // namespace revwrap
