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

#include "revwrap/cli.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "revwrap/change_detector.h"
#include "revwrap/extractor.h"
#include "revwrap/fetcher.h"
#include "revwrap/segmenter.h"
#include "revwrap/service.h"
#include "revwrap/template_store.h"

namespace revwrap {

namespace {

using ojson = nlohmann::ordered_json;

constexpr unsigned kMaxBatchWorkers = 8;

struct Common {
  std::string store;
  std::string tag_config;
  std::string user_agent = FetchOptions{}.user_agent;
  long timeout = FetchOptions{}.timeout_seconds;

  TagClassConfig Config() const {
    return tag_config.empty() ? TagClassConfig::Defaults() : TagClassConfig::LoadFile(tag_config);
  }
  FetchOptions Fetch() const {
    FetchOptions o;
    o.user_agent = user_agent;
    o.timeout_seconds = timeout;
    return o;
  }
};

void AddCommon(CLI::App* cmd, Common* c, bool need_store = true) {
  cmd->add_option("--store", c->store, "template store directory")->required(need_store);
  cmd->add_option("--tag-config", c->tag_config, "tag class JSON");
  cmd->add_option("--user-agent", c->user_agent, "HTTP user agent");
  cmd->add_option("--timeout", c->timeout, "fetch timeout in seconds");
}

std::vector<std::string> ReadRefs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot read batch file " + path);
  std::vector<std::string> refs;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    refs.push_back(line.substr(b, e - b + 1));
  }
  return refs;
}

ojson ErrorLine(const std::string& ref, const Error& e) {
  ojson j;
  j["source_ref"] = ref;
  ojson err;
  err["code"] = std::string(ErrorCodeName(e.code()));
  err["message"] = e.what();
  if (!e.label().empty()) err["label"] = e.label();
  j["error"] = std::move(err);
  return j;
}

int RunInduce(const Common& c, const std::string& page_ref, const std::string& roi_path,
              bool first_match, std::ostream& out, std::ostream& err) {
  const TagClassConfig config = c.Config();
  const RoiSpec roi = RoiSpec::LoadFile(roi_path);
  const PageBundle page = FetchBundle(page_ref, config, c.Fetch());
  InduceOptions opts;
  opts.first_match = first_match;
  const Induction ind = InduceTemplateDetailed(page, roi, page_ref, config, opts);
  for (const auto& w : ind.warnings) err << "warning: " << w << "\n";
  const auto path = TemplateStore(c.store).Save(ind.tmpl);
  err << "saved " << path.string() << "\n";
  out << ind.tmpl.ToJson().dump() << "\n";
  return kExitOk;
}

int RunCheck(const Common& c, const std::string& id, const std::string& page_ref, bool auto_replace,
             std::ostream& out, std::ostream& err) {
  const TagClassConfig config = c.Config();
  const TemplateStore store(c.store);
  const Template tmpl = store.Load(id);
  const std::string ref = page_ref.empty() ? tmpl.source_ref : page_ref;
  const PageBundle page = FetchBundle(ref, config, c.Fetch());
  RecheckOptions opts;
  opts.auto_replace = auto_replace;
  opts.store = &store;
  const ChangeReport report = Recheck(tmpl, page, config, opts);
  out << report.ToJson().dump() << "\n";
  if (!report.changed()) return kExitOk;
  err << "template " << id << " changed (case " << report.case_id << ", "
      << ChangedSideName(report.changed_side) << ")" << (report.replaced ? "; replaced" : "") << "\n";
  return kExitChanged;
}

int RunExtract(const Common& c, const std::string& id, const std::string& page_ref,
               const std::string& batch, bool verbose, std::ostream& out, std::ostream& err) {
  const TagClassConfig config = c.Config();
  const Template tmpl = TemplateStore(c.store).Load(id);
  const FetchOptions fetch = c.Fetch();
  if (batch.empty()) {
    const PageBundle page = FetchBundle(page_ref, config, fetch);
    out << Extract(tmpl, page, config).ToJson(verbose).dump() << "\n";
    return kExitOk;
  }

  std::vector<std::string> refs = ReadRefs(batch);
  if (!page_ref.empty()) refs.insert(refs.begin(), page_ref);
  std::vector<std::string> lines(refs.size());
  std::vector<int> codes(refs.size(), kExitOk);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < refs.size(); i = next++) {
      try {
        const PageBundle page = FetchBundle(refs[i], config, fetch);
        lines[i] = Extract(tmpl, page, config).ToJson(verbose).dump();
      } catch (const Error& e) {
        lines[i] = ErrorLine(refs[i], e).dump();
        codes[i] = ExitCodeFor(e.code());
      }
    }
  };
  const unsigned workers = std::max(
      1u, std::min({kMaxBatchWorkers, std::thread::hardware_concurrency(),
                    static_cast<unsigned>(refs.size())}));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::size_t failed = 0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    out << lines[i] << "\n";
    if (codes[i] != kExitOk) ++failed;
  }
  if (failed == 0) return kExitOk;
  err << failed << " of " << refs.size() << " pages failed\n";
  return kExitExtraction;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
    case ErrorCode::kConfigError:
      return kExitUsage;
    case ErrorCode::kDelimiterNotFound:
    case ErrorCode::kRegionNotFound:
    case ErrorCode::kAmbiguousRegion:
      return kExitExtraction;
    case ErrorCode::kNetworkError:
    case ErrorCode::kHttpError:
    case ErrorCode::kTooLarge:
      return kExitNetwork;
    case ErrorCode::kInvalidRoiSpec:
    case ErrorCode::kRoiNotFound:
    case ErrorCode::kAmbiguousRoi:
    case ErrorCode::kAttributeNotFound:
    case ErrorCode::kAmbiguousAttribute:
    case ErrorCode::kDelimiterCollision:
    case ErrorCode::kRoiLost:
    case ErrorCode::kTemplateNotFound:
    case ErrorCode::kFileNotFound:
    case ErrorCode::kStoreError:
    case ErrorCode::kConfigMismatch:
      return kExitInput;
  }
  return kExitInput;
}

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wrapper induction from labeled page regions", "revwrap"};
  app.require_subcommand(1);

  Common common;
  std::string page, roi, template_id, batch, listen = "127.0.0.1:8080", ui_dir;
  bool first_match = false, auto_replace = false, verbose = false;

  CLI::App* induce = app.add_subcommand("induce", "induce a template from a labeled page");
  AddCommon(induce, &common);
  induce->add_option("--page", page, "page path or URL")->required();
  induce->add_option("--roi", roi, "RoI spec JSON")->required();
  induce->add_flag("--first-match", first_match, "take the first RoI occurrence");

  CLI::App* check = app.add_subcommand("check", "recheck a stored template");
  AddCommon(check, &common);
  check->add_option("--template", template_id, "template id")->required();
  check->add_option("--page", page, "page to check instead of the template's source");
  check->add_flag("--auto-replace", auto_replace, "re-induce and save on change");

  CLI::App* extract = app.add_subcommand("extract", "extract records with a stored template");
  AddCommon(extract, &common);
  extract->add_option("--template", template_id, "template id")->required();
  auto* page_opt = extract->add_option("--page", page, "page path or URL");
  auto* batch_opt = extract->add_option("--batch", batch, "file with one page ref per line");
  extract->add_flag("--verbose", verbose, "include source offsets");

  CLI::App* serve = app.add_subcommand("serve", "run the labeling API");
  AddCommon(serve, &common);
  serve->add_option("--listen", listen, "host:port");
  serve->add_option("--ui-dir", ui_dir, "static UI files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, err, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*induce) return RunInduce(common, page, roi, first_match, out, err);
    if (*check) return RunCheck(common, template_id, page, auto_replace, out, err);
    if (*extract) {
      if (page_opt->count() == 0 && batch_opt->count() == 0) {
        err << "extract: one of --page or --batch is required\n";
        return kExitUsage;
      }
      return RunExtract(common, template_id, page, batch, verbose, out, err);
    }
    if (*serve) {
      ServiceOptions opts;
      opts.store_dir = common.store;
      if (!ui_dir.empty()) opts.ui_dir = ui_dir;
      opts.tag_config = common.Config();
      opts.fetch = common.Fetch();
      return Serve(std::move(opts), listen, err);
    }
  } catch (const Error& e) {
    err << "error: " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace revwrap
