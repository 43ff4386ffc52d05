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

#ifndef REVWRAP_FETCHER_H_
#define REVWRAP_FETCHER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "revwrap/page_model.h"
#include "revwrap/util.h"

namespace revwrap {

struct FetchOptions {
  long timeout_seconds = 30;
  std::size_t max_bytes = 16u << 20;
  std::string user_agent = "revwrap/0.1";
};

struct PageSource {
  std::string source_ref;
  std::string raw;
  std::string decoded;  // UTF-8
  std::string charset;  // lowercased label actually used
  Timestamp fetched_at;
  int status = 0;  // HTTP status, 0 for files
};

// http:// and https:// go over the network (at most 5 redirects, proxy from
// the usual environment variables); file:// refs and anything else are read
// from disk.
//
// Errors: kFileNotFound, kNetworkError, kHttpError (http_status set),
// kTooLarge.
PageSource Fetch(const std::string& source_ref, const FetchOptions& options = {});

bool IsRemoteRef(std::string_view source_ref);

// charset=... out of a Content-Type value, lowercased.
std::optional<std::string> CharsetFromContentType(std::string_view content_type);
// <meta charset> or <meta http-equiv content="...charset=..."> in the first
// few KiB of the document.
std::optional<std::string> CharsetFromMeta(std::string_view raw);

// Total decode to UTF-8; never throws. Unknown labels fall back to UTF-8.
// Invalid sequences become U+FFFD.
std::string DecodeBytes(std::string_view raw, std::string_view charset);

PageBundle FetchBundle(const std::string& source_ref, const TagClassConfig& config,
                       const FetchOptions& options = {});

}  // namespace revwrap

#endif  // REVWRAP_FETCHER_H_
