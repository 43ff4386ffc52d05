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

#include "revwrap/service.h"

#include <ostream>

#include "httplib.h"
#include "revwrap/change_detector.h"
#include "revwrap/extractor.h"
#include "revwrap/segmenter.h"

namespace revwrap {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::string_view kTemplatesPrefix = "/api/templates/";
constexpr std::string_view kCheckSuffix = "/check";

ApiResponse JsonResponse(int status, const ojson& j) { return {status, j.dump()}; }

std::string RequireString(const nlohmann::json& body, const char* key) {
  if (!body.is_object() || !body.contains(key) || !body[key].is_string()) {
    throw Error(ErrorCode::kUsage, std::string("request needs a string '") + key + "'");
  }
  return body[key].get<std::string>();
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
    case ErrorCode::kInvalidRoiSpec:
    case ErrorCode::kConfigError:
      return 400;
    case ErrorCode::kRoiNotFound:
    case ErrorCode::kAmbiguousRoi:
    case ErrorCode::kAttributeNotFound:
    case ErrorCode::kAmbiguousAttribute:
    case ErrorCode::kDelimiterCollision:
    case ErrorCode::kRegionNotFound:
    case ErrorCode::kAmbiguousRegion:
    case ErrorCode::kDelimiterNotFound:
      return 422;
    case ErrorCode::kTemplateNotFound:
    case ErrorCode::kFileNotFound:
      return 404;
    case ErrorCode::kRoiLost:
    case ErrorCode::kConfigMismatch:
      return 409;
    case ErrorCode::kTooLarge:
      return 413;
    case ErrorCode::kNetworkError:
    case ErrorCode::kHttpError:
      return 502;
    case ErrorCode::kStoreError:
      return 500;
  }
  return 500;
}

nlohmann::ordered_json ApiErrorJson(const Error& e) {
  ojson j;
  j["status"] = HttpStatusFor(e.code());
  j["code"] = std::string(ErrorCodeName(e.code()));
  j["message"] = e.what();
  if (!e.label().empty()) j["label"] = e.label();
  return j;
}

Service::Service(ServiceOptions options)
    : options_(std::move(options)), store_(options_.store_dir) {}

std::mutex& Service::LockFor(const std::string& id) {
  std::lock_guard<std::mutex> guard(locks_mu_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

ApiResponse Service::Handle(const std::string& method, const std::string& path,
                            const std::string& body) {
  try {
    nlohmann::json parsed;
    if (!body.empty()) {
      parsed = nlohmann::json::parse(body, nullptr, false);
      if (parsed.is_discarded()) throw Error(ErrorCode::kUsage, "request body is not JSON");
    }
    return Dispatch(method, path, parsed);
  } catch (const Error& e) {
    return JsonResponse(HttpStatusFor(e.code()), ApiErrorJson(e));
  } catch (const std::exception& e) {
    return JsonResponse(500, ApiErrorJson(Error(ErrorCode::kStoreError, e.what())));
  }
}

ApiResponse Service::Dispatch(const std::string& method, const std::string& path,
                              const nlohmann::json& body) {
  if (method == "POST" && path == "/api/fetch") return JsonResponse(200, HandleFetch(body));
  if (method == "POST" && path == "/api/preview") return JsonResponse(200, HandlePreview(body));
  if (path == "/api/templates") {
    if (method == "POST") return JsonResponse(200, HandleSave(body));
    if (method == "GET") return JsonResponse(200, HandleList());
  }
  if (path.starts_with(kTemplatesPrefix)) {
    std::string rest = path.substr(kTemplatesPrefix.size());
    if (method == "POST" && rest.ends_with(kCheckSuffix)) {
      rest.resize(rest.size() - kCheckSuffix.size());
      return JsonResponse(200, HandleCheck(rest, body));
    }
    if (method == "GET" && rest.find('/') == std::string::npos) return HandleGet(rest);
  }
  throw Error(ErrorCode::kTemplateNotFound, "no route for " + method + " " + path);
}

ojson Service::HandleFetch(const nlohmann::json& body) {
  const std::string url = RequireString(body, "url");
  if (url.empty()) throw Error(ErrorCode::kUsage, "url is empty");
  PageSource src = Fetch(url, options_.fetch);
  const PageBundle page = PageBundle::Build(src.source_ref, src.decoded, options_.tag_config);
  ojson j;
  j["source_ref"] = src.source_ref;
  j["decoded"] = std::move(src.decoded);
  j["rendered_text"] = page.rendered.text;
  return j;
}

PageBundle Service::PageFromRequest(const nlohmann::json& body) {
  if (body.is_object() && body.contains("source") && body["source"].is_string()) {
    std::string ref = body.contains("source_ref") && body["source_ref"].is_string()
                          ? body["source_ref"].get<std::string>()
                          : std::string("inline");
    return PageBundle::Build(std::move(ref), body["source"].get<std::string>(), options_.tag_config);
  }
  const std::string ref = RequireString(body, "source_ref");
  if (ref.empty()) throw Error(ErrorCode::kUsage, "source_ref is empty");
  return FetchBundle(ref, options_.tag_config, options_.fetch);
}

ojson Service::HandlePreview(const nlohmann::json& body) {
  if (!body.is_object() || !body.contains("roi_spec")) {
    throw Error(ErrorCode::kUsage, "request needs 'roi_spec'");
  }
  const RoiSpec roi = RoiSpec::FromJson(body["roi_spec"]);
  const PageBundle page = PageFromRequest(body);
  const Induction ind = InduceTemplateDetailed(page, roi, page.source_ref, options_.tag_config);
  ojson tmpl = ind.tmpl.ToJson();
  tmpl.erase("id");

  ojson j;
  j["signature"] = ind.tmpl.signature.ToJson();
  j["delimiters"] = tmpl["delimiters"];
  ojson diagnostics = ojson::array();
  for (const auto& w : ind.warnings) diagnostics.push_back(w);
  try {
    const ExtractionRecord rec = Extract(ind.tmpl, page, options_.tag_config, ind.tmpl.created_at);
    ojson values = rec.ToJson(true)["values"];
    j["extraction"] = std::move(values);
  } catch (const Error& e) {
    j["extraction"] = nullptr;
    diagnostics.push_back(std::string("trial extraction failed: ") + e.what());
  }
  j["diagnostics"] = std::move(diagnostics);
  j["template"] = std::move(tmpl);
  return j;
}

ojson Service::HandleSave(const nlohmann::json& body) {
  if (!body.is_object() || !body.contains("roi_spec")) {
    throw Error(ErrorCode::kUsage, "request needs 'roi_spec'");
  }
  const RoiSpec roi = RoiSpec::FromJson(body["roi_spec"]);
  const PageBundle page = PageFromRequest(body);
  const Template tmpl = InduceTemplate(page, roi, page.source_ref, options_.tag_config);
  {
    std::lock_guard<std::mutex> guard(LockFor(tmpl.id));
    store_.Save(tmpl);
  }
  ojson j;
  j["template_id"] = tmpl.id;
  return j;
}

ojson Service::HandleList() {
  ojson list = ojson::array();
  for (const Template& t : store_.LoadAll()) {
    ojson item;
    item["id"] = t.id;
    item["source_ref"] = t.source_ref;
    item["signature"] = t.signature.ToJson();
    item["attributes"] = t.delimiters.size();
    item["created_at"] = FormatTimestamp(t.created_at);
    item["updated_at"] = FormatTimestamp(t.updated_at);
    list.push_back(std::move(item));
  }
  return list;
}

ApiResponse Service::HandleGet(const std::string& id) {
  std::lock_guard<std::mutex> guard(LockFor(id));
  store_.Load(id);  // validates id and contents
  return {200, ReadFileOrThrow(store_.PathFor(id).string())};
}

ojson Service::HandleCheck(const std::string& id, const nlohmann::json& body) {
  bool auto_replace = true;
  std::optional<std::string> page_ref;
  if (body.is_object()) {
    if (body.contains("auto_replace")) {
      if (!body["auto_replace"].is_boolean()) throw Error(ErrorCode::kUsage, "auto_replace must be a boolean");
      auto_replace = body["auto_replace"].get<bool>();
    }
    if (body.contains("page_ref") && !body["page_ref"].is_null()) page_ref = RequireString(body, "page_ref");
  }
  std::lock_guard<std::mutex> guard(LockFor(id));
  const Template tmpl = store_.Load(id);
  const PageBundle page =
      FetchBundle(page_ref.value_or(tmpl.source_ref), options_.tag_config, options_.fetch);
  RecheckOptions opts;
  opts.auto_replace = auto_replace;
  opts.store = &store_;
  return Recheck(tmpl, page, options_.tag_config, opts).ToJson();
}

void Service::Mount(httplib::Server& server) {
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse r = Handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Post("/api/fetch", route);
  server.Post("/api/preview", route);
  server.Post("/api/templates", route);
  server.Get("/api/templates", route);
  server.Get(R"(/api/templates/[^/]+)", route);
  server.Post(R"(/api/templates/[^/]+/check)", route);
  if (options_.ui_dir) server.set_mount_point("/", options_.ui_dir->string());
}

int Serve(ServiceOptions options, const std::string& listen, std::ostream& err) {
  std::string host = "127.0.0.1";
  std::string port_text = listen;
  if (const auto colon = listen.rfind(':'); colon != std::string::npos) {
    if (colon > 0) host = listen.substr(0, colon);
    port_text = listen.substr(colon + 1);
  }
  int port = 0;
  try {
    port = std::stoi(port_text);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kUsage, "bad --listen address: " + listen);
  }
  if (port <= 0 || port > 65535) throw Error(ErrorCode::kUsage, "bad --listen port: " + listen);
  Service service(std::move(options));
  httplib::Server server;
  service.Mount(server);
  err << "listening on http://" << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    throw Error(ErrorCode::kNetworkError, "cannot listen on " + host + ":" + std::to_string(port));
  }
  return 0;
}

}  // namespace revwrap
