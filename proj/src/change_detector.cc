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

#include "revwrap/change_detector.h"

#include "revwrap/error.h"
#include "revwrap/extractor.h"
#include "revwrap/segmenter.h"

namespace revwrap {

std::string_view ChangedSideName(ChangedSide side) {
  switch (side) {
    case ChangedSide::kNone: return "none";
    case ChangedSide::kUpper: return "upper";
    case ChangedSide::kLower: return "lower";
    case ChangedSide::kBoth: return "both";
  }
  return "?";
}

nlohmann::ordered_json ChangeReport::ToJson() const {
  nlohmann::ordered_json j;
  j["case"] = case_id;
  j["changed_side"] = std::string(ChangedSideName(changed_side));
  j["old_signature"] = old_signature.ToJson();
  j["new_signature"] = new_signature.ToJson();
  j["replaced"] = replaced;
  return j;
}

ChangeReport Compare(const Signature& old_signature, const Signature& new_signature) {
  ChangeReport r;
  r.old_signature = old_signature;
  r.new_signature = new_signature;
  const bool upper = old_signature.sigma_upper != new_signature.sigma_upper;
  const bool lower = old_signature.sigma_lower != new_signature.sigma_lower;
  const bool delta = old_signature.delta != new_signature.delta;
  if (!upper && !lower) {
    r.case_id = 1;
    r.changed_side = ChangedSide::kNone;
  } else if (upper && lower) {
    r.case_id = delta ? 4 : 2;
    r.changed_side = ChangedSide::kBoth;
  } else {
    r.case_id = 3;
    r.changed_side = upper ? ChangedSide::kUpper : ChangedSide::kLower;
  }
  return r;
}

ChangeReport Recheck(const Template& tmpl, const PageBundle& page, const TagClassConfig& config,
                     const RecheckOptions& options) {
  if (config.version != tmpl.tag_class_version) {
    throw Error(ErrorCode::kConfigMismatch, "template " + tmpl.id + " was induced with tag classes '" +
                                                tmpl.tag_class_version + "', not '" +
                                                config.version + "'");
  }
  std::optional<RoiLocation> loc;
  try {
    loc = LocateRoi(page, tmpl.roi_spec);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kRoiNotFound && e.code() != ErrorCode::kAmbiguousRoi &&
        e.code() != ErrorCode::kAttributeNotFound && e.code() != ErrorCode::kAmbiguousAttribute) {
      throw;
    }
  }
  Span roi_span;
  if (loc) {
    roi_span = loc->roi_span;
  } else {
    roi_span = LocateRoiByTemplate(page, tmpl, config).roi_span;
  }
  ChangeReport report = Compare(tmpl.signature, AnalyzeSplit(page, roi_span).signature);
  if (!report.changed() || !options.auto_replace) return report;

  if (!loc) {
    throw Error(ErrorCode::kRoiLost, "RoI of template " + tmpl.id + " is no longer on " +
                                         page.source_ref + "; relabel the page");
  }
  if (options.store == nullptr) throw Error(ErrorCode::kUsage, "auto-replace needs a template store");
  const Timestamp now = options.now.value_or(Now());
  Template next = InduceTemplate(page, tmpl.roi_spec, tmpl.source_ref, config, {false, now});
  next.id = tmpl.id;
  next.created_at = tmpl.created_at;
  next.history = tmpl.history;
  next.history.push_back({tmpl.signature, tmpl.updated_at});
  options.store->Save(next);
  report.replaced = true;
  return report;
}

}  // namespace revwrap
