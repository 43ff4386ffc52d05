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

#ifndef REVWRAP_ERROR_H_
#define REVWRAP_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace revwrap {

// Every failure the library reports. The CLI exit status and the service's
// ApiError are both pure functions of the code.
enum class ErrorCode {
  kUsage,
  kInvalidRoiSpec,
  kRoiNotFound,
  kAmbiguousRoi,
  kAttributeNotFound,
  kAmbiguousAttribute,
  kDelimiterCollision,
  kRegionNotFound,
  kAmbiguousRegion,
  kDelimiterNotFound,
  kRoiLost,
  kTemplateNotFound,
  kFileNotFound,
  kNetworkError,
  kHttpError,
  kTooLarge,
  kStoreError,
  kConfigError,
  kConfigMismatch,
};

// Stable machine-readable name, e.g. "roi_not_found".
std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string label = {},
        int http_status = 0)
      : std::runtime_error(message),
        code_(code),
        label_(std::move(label)),
        http_status_(http_status) {}

  ErrorCode code() const { return code_; }
  // Attribute label for per-attribute errors, empty otherwise.
  const std::string& label() const { return label_; }
  // Upstream HTTP status for kHttpError.
  int http_status() const { return http_status_; }

 private:
  ErrorCode code_;
  std::string label_;
  int http_status_;
};

}  // namespace revwrap

#endif  // REVWRAP_ERROR_H_
