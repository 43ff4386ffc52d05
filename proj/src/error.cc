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

#include "revwrap/error.h"

namespace revwrap {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return "usage";
    case ErrorCode::kInvalidRoiSpec: return "invalid_roi_spec";
    case ErrorCode::kRoiNotFound: return "roi_not_found";
    case ErrorCode::kAmbiguousRoi: return "ambiguous_roi";
    case ErrorCode::kAttributeNotFound: return "attribute_not_found";
    case ErrorCode::kAmbiguousAttribute: return "ambiguous_attribute";
    case ErrorCode::kDelimiterCollision: return "delimiter_collision";
    case ErrorCode::kRegionNotFound: return "region_not_found";
    case ErrorCode::kAmbiguousRegion: return "ambiguous_region";
    case ErrorCode::kDelimiterNotFound: return "delimiter_not_found";
    case ErrorCode::kRoiLost: return "roi_lost";
    case ErrorCode::kTemplateNotFound: return "not_found";
    case ErrorCode::kFileNotFound: return "file_not_found";
    case ErrorCode::kNetworkError: return "network_error";
    case ErrorCode::kHttpError: return "http_error";
    case ErrorCode::kTooLarge: return "too_large";
    case ErrorCode::kStoreError: return "store_error";
    case ErrorCode::kConfigError: return "config_error";
    case ErrorCode::kConfigMismatch: return "config_mismatch";
  }
  return "unknown";
}

}  // namespace revwrap
