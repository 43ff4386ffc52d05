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

#include <cstdlib>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "revwrap/error.h"
#include "revwrap/fetcher.h"
#include "test_support.h"

using namespace revwrap;
using revwrap::testing::FixturePath;
using revwrap::testing::ReadFixture;

namespace {

ErrorCode CodeOf(const std::function<void()>& fn, int* http_status = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (http_status) *http_status = e.http_status();
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kUsage;
}

// Loopback server for the transport paths.
class LocalServer {
 public:
  LocalServer() {
    ::setenv("NO_PROXY", "127.0.0.1,localhost", 0);
    server_.Get("/page", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("<p>caf\xE9</p>", "text/html; charset=ISO-8859-1");
    });
    server_.Get("/utf8", [](const httplib::Request& req, httplib::Response& res) {
      res.set_content("<p>" + req.get_header_value("User-Agent") + "</p>", "text/html");
    });
    server_.Get("/moved", [](const httplib::Request&, httplib::Response& res) {
      res.set_redirect("/page");
    });
    server_.Get("/loop", [](const httplib::Request&, httplib::Response& res) {
      res.set_redirect("/loop");
    });
    server_.Get("/big", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(std::string(4096, 'x'), "text/plain");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  std::string Url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_SUITE("fetcher") {
  TEST_CASE("local file") {
    const auto page = Fetch(FixturePath("a.html"));
    CHECK(page.status == 0);
    CHECK(page.decoded == ReadFixture("a.html"));
    CHECK(page.raw == page.decoded);
    CHECK(page.charset == "utf-8");
    CHECK(Fetch("file://" + FixturePath("a.html")).decoded == page.decoded);
    CHECK_FALSE(IsRemoteRef(FixturePath("a.html")));
    CHECK(IsRemoteRef("HTTPS://example.org/"));
  }

  TEST_CASE("missing and oversized files") {
    CHECK(CodeOf([] { Fetch("/nonexistent/page.html"); }) == ErrorCode::kFileNotFound);
    FetchOptions small;
    small.max_bytes = 10;
    CHECK(CodeOf([&] { Fetch(FixturePath("a.html"), small); }) == ErrorCode::kTooLarge);
    CHECK(CodeOf([] { Fetch(""); }) == ErrorCode::kUsage);
  }

  TEST_CASE("meta charset selects a single-byte table") {
    const auto page = Fetch(FixturePath("latin1.html"));
    CHECK(page.charset == "iso-8859-1");
    // 0xE9 in the Latin-1 table is U+00E9.
    CHECK(page.decoded.find("caf\xC3\xA9 au lait") != std::string::npos);
  }

  TEST_CASE("charset labels") {
    CHECK(CharsetFromContentType("text/html; charset=UTF-8") == "utf-8");
    CHECK(CharsetFromContentType("text/html; Charset=\"windows-1251\"") == "windows-1251");
    CHECK_FALSE(CharsetFromContentType("text/html").has_value());
    CHECK(CharsetFromMeta("<meta http-equiv=\"Content-Type\" content=\"text/html; charset=shift_jis\">") ==
          "shift_jis");
    CHECK(CharsetFromMeta("<META CHARSET='Latin1'>") == "latin1");
    CHECK_FALSE(CharsetFromMeta("<p>charset=x</p>").has_value());
  }

  TEST_CASE("decoding never throws") {
    CHECK(DecodeBytes("a\xFF" "b", "utf-8") == "a\xEF\xBF\xBD" "b");
    CHECK(DecodeBytes("\xE2\x82", "utf-8") == "\xEF\xBF\xBD\xEF\xBF\xBD");
    CHECK(DecodeBytes("\x80", "windows-1252") == "\xE2\x82\xAC");
    CHECK(DecodeBytes("\xE9", "no-such-charset") == "\xEF\xBF\xBD");
    // iconv path: KOI8-R 0xC1 is U+0430.
    CHECK(DecodeBytes("\xC1", "koi8-r") == "\xD0\xB0");
  }

  TEST_CASE("byte order mark wins") {
    testing::TempDir dir;
    const auto path = dir.Write("bom.html", "\xEF\xBB\xBF<meta charset=latin1><p>\xC3\xA9</p>");
    const auto page = Fetch(path);
    CHECK(page.charset == "utf-8");
    CHECK(page.decoded == "<meta charset=latin1><p>\xC3\xA9</p>");
  }

  TEST_CASE("http over loopback") {
    LocalServer server;
    auto page = Fetch(server.Url("/page"));
    CHECK(page.status == 200);
    CHECK(page.charset == "iso-8859-1");
    CHECK(page.decoded == "<p>caf\xC3\xA9</p>");

    page = Fetch(server.Url("/moved"));
    CHECK(page.decoded == "<p>caf\xC3\xA9</p>");

    FetchOptions opts;
    opts.user_agent = "tide-gauge/2";
    CHECK(Fetch(server.Url("/utf8"), opts).decoded == "<p>tide-gauge/2</p>");

    int status = 0;
    CHECK(CodeOf([&] { Fetch(server.Url("/missing")); }, &status) == ErrorCode::kHttpError);
    CHECK(status == 404);
    CHECK(CodeOf([&] { Fetch(server.Url("/loop")); }) == ErrorCode::kNetworkError);

    opts.max_bytes = 100;
    CHECK(CodeOf([&] { Fetch(server.Url("/big"), opts); }) == ErrorCode::kTooLarge);
  }

  TEST_CASE("unreachable host") {
    FetchOptions opts;
    opts.timeout_seconds = 5;
    // Port 1 on loopback is closed in the sandbox.
    CHECK(CodeOf([&] { Fetch("http://127.0.0.1:1/", opts); }) == ErrorCode::kNetworkError);
  }
}
