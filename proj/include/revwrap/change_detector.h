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

// Template drift detection from stored and fresh signatures.
//
//   case 1  delta, sigma_upper and sigma_lower all unchanged
//   case 2  delta unchanged, both sigmas changed (by the same amount)
//   case 3  delta changed, exactly one sigma changed
//   case 4  delta changed, both sigmas changed
//
// Cases 2-4 all mean the template changed.

#ifndef REVWRAP_CHANGE_DETECTOR_H_
#define REVWRAP_CHANGE_DETECTOR_H_

#include <optional>
#include <string_view>

#include "json.hpp"
#include "revwrap/page_model.h"
#include "revwrap/skeleton.h"
#include "revwrap/template_store.h"

namespace revwrap {

enum class ChangedSide { kNone, kUpper, kLower, kBoth };
std::string_view ChangedSideName(ChangedSide side);

struct ChangeReport {
  int case_id = 1;
  ChangedSide changed_side = ChangedSide::kNone;
  Signature old_signature;
  Signature new_signature;
  bool replaced = false;

  bool changed() const { return case_id != 1; }
  // {"case", "changed_side", "old_signature", "new_signature", "replaced"}
  nlohmann::ordered_json ToJson() const;
};

ChangeReport Compare(const Signature& old_signature, const Signature& new_signature);

struct RecheckOptions {
  bool auto_replace = false;
  // Required when auto_replace is set.
  const TemplateStore* store = nullptr;
  std::optional<Timestamp> now;
};

// Recomputes the page signature (from the stored RoI text when it is still
// on the page, otherwise from the region the stored open paths lead to) and
// compares it with the template's. With auto_replace, a changed template is
// re-induced from `page`, its old signature pushed to history, and saved.
//
// Errors: kRoiLost when replacement is requested but the RoI text is gone;
// kRegionNotFound/kAmbiguousRegion when neither route can segment the page.
ChangeReport Recheck(const Template& tmpl, const PageBundle& page, const TagClassConfig& config,
                     const RecheckOptions& options = {});

}  // namespace revwrap

#endif  // REVWRAP_CHANGE_DETECTOR_H_
