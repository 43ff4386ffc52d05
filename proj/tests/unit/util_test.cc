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

#include "doctest.h"
#include "revwrap/error.h"
#include "revwrap/util.h"
#include "test_support.h"

using namespace revwrap;

TEST_SUITE("util") {
  TEST_CASE("timestamps round-trip through their text form") {
    const Timestamp t = ParseTimestamp("2026-03-01T09:30:00Z");
    CHECK(FormatTimestamp(t) == "2026-03-01T09:30:00Z");
    CHECK(FormatTimestamp(t + std::chrono::hours(24 * 31)) == "2026-04-01T09:30:00Z");
    const Timestamp now = Now();
    CHECK(ParseTimestamp(FormatTimestamp(now)) == now);
  }

  TEST_CASE("malformed timestamps are store errors") {
    for (const char* bad : {"", "2026-03-01", "yesterday", "2026-03-01T09:30:00"}) {
      CAPTURE(bad);
      try {
        ParseTimestamp(bad);
        FAIL("accepted");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kStoreError);
      }
    }
  }

  TEST_CASE("fnv1a matches published vectors") {
    // Offset basis for the empty string; "a" from the reference table.
    CHECK(Fnv1a64Hex("") == "cbf29ce484222325");
    CHECK(Fnv1a64Hex("a") == "af63dc4c8601ec8c");
    CHECK(Fnv1a64Hex("foobar") == "85944171f73967e8");
  }

  TEST_CASE("error codes have stable names") {
    CHECK(ErrorCodeName(ErrorCode::kRoiNotFound) == "roi_not_found");
    CHECK(ErrorCodeName(ErrorCode::kAmbiguousRoi) == "ambiguous_roi");
    CHECK(ErrorCodeName(ErrorCode::kTemplateNotFound) == "not_found");
    CHECK(ErrorCodeName(ErrorCode::kDelimiterNotFound) == "delimiter_not_found");
  }

  TEST_CASE("missing files") {
    try {
      ReadFileOrThrow("/nonexistent/revwrap/file.html");
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kFileNotFound);
    }
  }

  TEST_CASE("ascii lower leaves non-ascii bytes alone") {
    CHECK(AsciiLower("DiV\xC3\x89") == "div\xC3\x89");
  }
}
