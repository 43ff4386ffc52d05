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

#include <fstream>

#include "doctest.h"
#include "revwrap/error.h"
#include "revwrap/template_store.h"
#include "test_support.h"

using namespace revwrap;
using revwrap::testing::FixedTime;
using revwrap::testing::FixturePath;
using revwrap::testing::MakeRoi;
using revwrap::testing::ReadFixture;

namespace {

AttributeDelimiter D(std::string label, std::optional<std::string> start, std::optional<std::string> end,
                     std::size_t ordinal) {
  return {std::move(label), std::move(start), std::move(end), ordinal};
}

Template InduceA(int clock = 0) {
  const auto page = PageBundle::Build("a.html", ReadFixture("a.html"));
  return InduceTemplate(page, RoiSpec::LoadFile(FixturePath("a.roi.json")), "a.html",
                        TagClassConfig::Defaults(), {false, FixedTime(clock)});
}

std::vector<AttributeDelimiter> DelimitersFor(const std::string& src, const RoiSpec& roi) {
  const auto page = PageBundle::Build("t", src);
  return InduceTemplate(page, roi, "t", TagClassConfig::Defaults(), {false, FixedTime()}).delimiters;
}

}  // namespace

TEST_SUITE("template_store") {
  TEST_CASE("Fixture-A delimiters reproduce the reference table") {
    const Template t = InduceA();
    const std::vector<AttributeDelimiter> expected = {
        D("Title", std::nullopt, "<br>", 0),
        D("Author", "<p>", std::nullopt, 1),
        D("Abstract", "<p>", std::nullopt, 2),
        D("Publication", "<p>", "<br>", 3),
    };
    CHECK(t.delimiters == expected);
    CHECK(t.signature == Signature::FromSigmas(3, 5));
    CHECK(t.signature.symmetry == Symmetry::kLowerAsymmetric);
    CHECK(t.upper_open_path == std::vector<std::string>{"html", "body", "table", "tr", "td"});
    CHECK(t.lower_open_path == std::vector<std::string>{"td", "tr", "table", "body", "html"});
    CHECK(t.tag_class_version == "default-1");
    CHECK(t.history.empty());
    CHECK(t.created_at == FixedTime());
    CHECK(t.updated_at == FixedTime());
  }

  TEST_CASE("attribute covering the whole RoI without inner tags") {
    const auto d = DelimitersFor("<p>alpha beta</p>", MakeRoi({{"Only", "alpha beta"}}));
    CHECK(d == std::vector<AttributeDelimiter>{D("Only", std::nullopt, std::nullopt, 0)});
  }

  TEST_CASE("close tags are legal delimiters") {
    const auto d = DelimitersFor("<div>Label: <td>X</td> more</div>",
                                 MakeRoi({{"Value", "X"}}, "Label: X more"));
    CHECK(d == std::vector<AttributeDelimiter>{D("Value", "<td>", "</td>", 0)});
  }

  TEST_CASE("formatting and comments do not block the scan") {
    const auto d = DelimitersFor("<div>a<p><!-- c --><b><i>v</i></b><br>z</div>",
                                 MakeRoi({{"V", "v"}}, "a v z"));
    CHECK(d == std::vector<AttributeDelimiter>{D("V", "<p>", "<br>", 0)});
  }

  TEST_CASE("neighbours with nothing between them collide") {
    const auto page = PageBundle::Build("t", "<div>alpha beta</div>");
    try {
      InduceTemplate(page, MakeRoi({{"A", "alpha"}, {"B", "beta"}}), "t", TagClassConfig::Defaults());
      FAIL("no collision");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDelimiterCollision);
      CHECK(e.label() == "B");
    }
  }

  TEST_CASE("induction errors propagate") {
    const auto page = PageBundle::Build("a.html", ReadFixture("a.html"));
    CHECK_THROWS_AS(InduceTemplate(page, MakeRoi({}, "zzz not on page"), "a", TagClassConfig::Defaults()),
                    Error);
  }

  TEST_CASE("induction is deterministic") {
    const Template a = InduceA(0);
    Template b = InduceA(60);
    CHECK(a.id == b.id);
    CHECK(a.updated_at != b.updated_at);
    b.created_at = a.created_at;
    b.updated_at = a.updated_at;
    CHECK(a == b);
    CHECK(a.id.size() == 16);
  }

  TEST_CASE("JSON layout") {
    const auto j = InduceA().ToJson();
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"id", "source_ref", "roi_spec", "signature",
                                           "upper_open_path", "lower_open_path", "delimiters",
                                           "tag_class_version", "created_at", "updated_at",
                                           "history"});
    CHECK(j["delimiters"][0]["start_tag"].is_null());
    CHECK(j["delimiters"][0]["end_tag"] == "<br>");
    CHECK(j["signature"]["symmetry"] == "lower-asymmetric");
    CHECK(j["created_at"] == "2026-03-01T09:30:00Z");
  }

  TEST_CASE("save and load round-trip") {
    testing::TempDir dir;
    const TemplateStore store(dir.path() / "store");
    Template t = InduceA();
    t.history.push_back({Signature::FromSigmas(1, 2), FixedTime(-100)});
    const auto path = store.Save(t);
    CHECK(std::filesystem::exists(path));
    CHECK(store.Contains(t.id));
    CHECK(store.Load(t.id) == t);
    CHECK(ReadFileOrThrow(path.string()) == t.Serialize());
  }

  TEST_CASE("unknown and malformed templates") {
    testing::TempDir dir;
    const TemplateStore store(dir.path());
    try {
      store.Load("missing");
      FAIL("loaded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kTemplateNotFound);
    }
    CHECK_THROWS_AS(store.Load("../etc/passwd"), Error);
    dir.Write("broken.json", "{\"id\": 3");
    try {
      store.Load("broken");
      FAIL("loaded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kStoreError);
    }
  }

  TEST_CASE("listing sorts by updated_at") {
    testing::TempDir dir;
    const TemplateStore store(dir.path());
    const auto page = PageBundle::Build("a.html", ReadFixture("a.html"));
    const auto roi = RoiSpec::LoadFile(FixturePath("a.roi.json"));
    std::vector<std::string> expected;
    // Written newest first; ids depend on source_ref.
    for (int k = 2; k >= 0; --k) {
      const std::string ref = "copy" + std::to_string(k) + ".html";
      const auto t = InduceTemplate(page, roi, ref, TagClassConfig::Defaults(), {false, FixedTime(k)});
      store.Save(t);
      expected.insert(expected.begin(), t.id);
    }
    CHECK(store.List() == expected);
    CHECK(store.LoadAll().size() == 3);
  }
}
