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

// JSON-over-HTTP API for the labeling front end.
//
//   POST /api/fetch                   {url}
//   POST /api/preview                 {source_ref | source, roi_spec}
//   POST /api/templates               {source_ref | source, roi_spec}
//   GET  /api/templates
//   GET  /api/templates/{id}
//   POST /api/templates/{id}/check    {page_ref?, auto_replace? = true}
//
// Errors come back as {"status", "code", "message", "label"?}.

#ifndef REVWRAP_SERVICE_H_
#define REVWRAP_SERVICE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"
#include "revwrap/error.h"
#include "revwrap/fetcher.h"
#include "revwrap/page_model.h"
#include "revwrap/template_store.h"

namespace httplib {
class Server;
}

namespace revwrap {

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

int HttpStatusFor(ErrorCode code);
nlohmann::ordered_json ApiErrorJson(const Error& e);

struct ServiceOptions {
  std::filesystem::path store_dir;
  std::optional<std::filesystem::path> ui_dir;
  TagClassConfig tag_config = TagClassConfig::Defaults();
  FetchOptions fetch;
};

class Service {
 public:
  explicit Service(ServiceOptions options);

  // Transport-free dispatch; the HTTP routes call this.
  ApiResponse Handle(const std::string& method, const std::string& path, const std::string& body);

  void Mount(httplib::Server& server);

 private:
  ApiResponse Dispatch(const std::string& method, const std::string& path, const nlohmann::json& body);
  nlohmann::ordered_json HandleFetch(const nlohmann::json& body);
  nlohmann::ordered_json HandlePreview(const nlohmann::json& body);
  nlohmann::ordered_json HandleSave(const nlohmann::json& body);
  nlohmann::ordered_json HandleList();
  ApiResponse HandleGet(const std::string& id);
  nlohmann::ordered_json HandleCheck(const std::string& id, const nlohmann::json& body);

  PageBundle PageFromRequest(const nlohmann::json& body);
  std::mutex& LockFor(const std::string& id);

  ServiceOptions options_;
  TemplateStore store_;
  std::mutex locks_mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

// Blocks until the server stops. `listen` is "host:port" or ":port";
// the host defaults to 127.0.0.1.
int Serve(ServiceOptions options, const std::string& listen, std::ostream& err);

}  // namespace revwrap

#endif  // REVWRAP_SERVICE_H_
