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

// JSON strings in, JSON strings out; revwrap/__init__.py decodes them.

#include <pybind11/pybind11.h>

#include "json.hpp"
#include "revwrap/change_detector.h"
#include "revwrap/error.h"
#include "revwrap/extractor.h"
#include "revwrap/page_model.h"
#include "revwrap/segmenter.h"
#include "revwrap/skeleton.h"
#include "revwrap/template_store.h"

namespace py = pybind11;
using ojson = nlohmann::ordered_json;

namespace {

revwrap::TagClassConfig ConfigFrom(const std::string& config_json) {
  if (config_json.empty()) return revwrap::TagClassConfig::Defaults();
  return revwrap::TagClassConfig::FromJson(nlohmann::json::parse(config_json));
}

std::string TokenizeJson(const std::string& source, const std::string& config_json) {
  ojson out = ojson::array();
  for (const auto& t : revwrap::Tokenize(source, ConfigFrom(config_json))) {
    ojson j;
    j["kind"] = std::string(revwrap::TokenKindName(t.kind));
    j["name"] = t.name;
    j["class"] = std::string(revwrap::TagClassName(t.tag_class));
    j["begin"] = t.span.begin;
    j["end"] = t.span.end;
    out.push_back(std::move(j));
  }
  return out.dump();
}

std::string Classify(const std::string& name, const std::string& config_json) {
  return std::string(revwrap::TagClassName(revwrap::ClassifyTag(name, ConfigFrom(config_json))));
}

std::string Render(const std::string& source, const std::string& config_json) {
  return revwrap::PageBundle::Build("inline", source, ConfigFrom(config_json)).rendered.text;
}

std::string AnalyzeJson(const std::string& source, const std::string& roi_json,
                        const std::string& config_json) {
  const auto page = revwrap::PageBundle::Build("inline", source, ConfigFrom(config_json));
  const auto roi = revwrap::RoiSpec::FromJson(nlohmann::json::parse(roi_json));
  const auto loc = revwrap::LocateRoi(page, roi);
  const auto m = revwrap::AnalyzeSplit(page, loc.roi_span);
  ojson j;
  j["roi_span"] = {loc.roi_span.begin, loc.roi_span.end};
  j["upper"] = {{"n_ot", m.upper.n_ot}, {"n_ct", m.upper.n_ct}, {"sigma", m.upper.sigma}};
  j["lower"] = {{"n_ot", m.lower.n_ot}, {"n_ct", m.lower.n_ct}, {"sigma", m.lower.sigma}};
  j["signature"] = m.signature.ToJson();
  return j.dump();
}

std::string InduceJson(const std::string& source, const std::string& roi_json,
                       const std::string& source_ref, const std::string& config_json) {
  const auto config = ConfigFrom(config_json);
  const auto page = revwrap::PageBundle::Build(source_ref, source, config);
  const auto roi = revwrap::RoiSpec::FromJson(nlohmann::json::parse(roi_json));
  return revwrap::InduceTemplate(page, roi, source_ref, config).ToJson().dump();
}

std::string ExtractJson(const std::string& template_json, const std::string& source,
                        const std::string& source_ref, const std::string& config_json) {
  const auto config = ConfigFrom(config_json);
  const auto tmpl = revwrap::Template::FromJson(nlohmann::json::parse(template_json));
  const auto page = revwrap::PageBundle::Build(source_ref, source, config);
  return revwrap::Extract(tmpl, page, config).ToJson(false).dump();
}

std::string CompareJson(const std::string& old_json, const std::string& new_json) {
  const auto a = revwrap::Signature::FromJson(nlohmann::json::parse(old_json));
  const auto b = revwrap::Signature::FromJson(nlohmann::json::parse(new_json));
  return revwrap::Compare(a, b).ToJson().dump();
}

std::string RecheckJson(const std::string& template_json, const std::string& source,
                        const std::string& config_json) {
  const auto config = ConfigFrom(config_json);
  const auto tmpl = revwrap::Template::FromJson(nlohmann::json::parse(template_json));
  const auto page = revwrap::PageBundle::Build(tmpl.source_ref, source, config);
  return revwrap::Recheck(tmpl, page, config).ToJson().dump();
}

}  // namespace

PYBIND11_MODULE(_revwrap, m) {
  m.doc() = "revwrap core bindings";

  static py::exception<revwrap::Error> exc(m, "RevwrapError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const revwrap::Error& e) {
      py::tuple args = py::make_tuple(std::string(revwrap::ErrorCodeName(e.code())), e.what(), e.label());
      PyErr_SetObject(exc.ptr(), args.ptr());
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("tokenize", &TokenizeJson, py::arg("source"), py::arg("config") = "");
  m.def("normalize", [](const std::string& s) { return revwrap::Normalize(s); }, py::arg("text"));
  m.def("classify", &Classify, py::arg("name"), py::arg("config") = "");
  m.def("render", &Render, py::arg("source"), py::arg("config") = "");
  m.def("analyze", &AnalyzeJson, py::arg("source"), py::arg("roi_spec"), py::arg("config") = "");
  m.def("induce", &InduceJson, py::arg("source"), py::arg("roi_spec"), py::arg("source_ref"),
        py::arg("config") = "");
  m.def("extract", &ExtractJson, py::arg("template"), py::arg("source"),
        py::arg("source_ref") = "inline", py::arg("config") = "");
  m.def("compare", &CompareJson, py::arg("old_signature"), py::arg("new_signature"));
  m.def("recheck", &RecheckJson, py::arg("template"), py::arg("source"), py::arg("config") = "");
}
