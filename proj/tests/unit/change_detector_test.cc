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

#include <random>

#include "doctest.h"
#include "revwrap/change_detector.h"
#include "revwrap/error.h"
#include "test_support.h"

using namespace revwrap;
using revwrap::testing::FixedTime;
using revwrap::testing::FixturePath;
using revwrap::testing::ReadFixture;

namespace {

Template TemplateA() {
  const auto page = PageBundle::Build("a.html", ReadFixture("a.html"));
  return InduceTemplate(page, RoiSpec::LoadFile(FixturePath("a.roi.json")), "a.html",
                        TagClassConfig::Defaults(), {false, FixedTime()});
}

ChangeReport CheckFixture(const std::string& name, const RecheckOptions& opts = {}) {
  return Recheck(TemplateA(), PageBundle::Build(name, ReadFixture(name)), TagClassConfig::Defaults(), opts);
}

}  // namespace

TEST_SUITE("change_detector") {
  TEST_CASE("compare covers the four cases") {
    const auto base = Signature::FromSigmas(3, 5);
    auto r = Compare(base, base);
    CHECK(r.case_id == 1);
    CHECK(r.changed_side == ChangedSide::kNone);
    r = Compare(base, Signature::FromSigmas(4, 6));
    CHECK(r.case_id == 2);
    CHECK(r.changed_side == ChangedSide::kBoth);
    r = Compare(base, Signature::FromSigmas(4, 5));
    CHECK(r.case_id == 3);
    CHECK(r.changed_side == ChangedSide::kUpper);
    r = Compare(base, Signature::FromSigmas(3, 7));
    CHECK(r.case_id == 3);
    CHECK(r.changed_side == ChangedSide::kLower);
    r = Compare(base, Signature::FromSigmas(5, 6));
    CHECK(r.case_id == 4);
    CHECK(r.changed_side == ChangedSide::kBoth);
  }

  TEST_CASE("case partition over random signature pairs") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int i = 0; i < 5000; ++i) {
      const auto a = Signature::FromSigmas(d(rng), d(rng));
      const auto b = Signature::FromSigmas(d(rng), d(rng));
      const auto r = Compare(a, b);
      const bool du = a.sigma_upper != b.sigma_upper;
      const bool dl = a.sigma_lower != b.sigma_lower;
      const bool dd = a.delta != b.delta;
      // Delta equal with exactly one sigma changed cannot happen.
      REQUIRE_FALSE((!dd && du != dl));
      REQUIRE_FALSE((dd && !du && !dl));
      const int expected = !du && !dl ? 1 : (!dd ? 2 : (du != dl ? 3 : 4));
      REQUIRE(r.case_id == expected);
    }
  }

  TEST_CASE("report JSON") {
    const auto j = Compare(Signature::FromSigmas(3, 5), Signature::FromSigmas(4, 5)).ToJson();
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"case", "changed_side", "old_signature", "new_signature",
                                           "replaced"});
    CHECK(j["case"] == 3);
    CHECK(j["changed_side"] == "upper");
    CHECK(j["replaced"] == false);
  }

  TEST_CASE("unmodified page") {
    const auto r = CheckFixture("a.html");
    CHECK(r.case_id == 1);
    CHECK_FALSE(r.replaced);
    CHECK(CheckFixture("b.html").case_id == 1);
  }

  TEST_CASE("mutation fixtures") {
    auto r = CheckFixture("a_mutated_upper.html");
    CHECK(r.case_id == 3);
    CHECK(r.changed_side == ChangedSide::kUpper);
    CHECK(r.new_signature == Signature::FromSigmas(4, 5));
    r = CheckFixture("a_mutated_lower.html");
    CHECK(r.case_id == 3);
    CHECK(r.changed_side == ChangedSide::kLower);
    r = CheckFixture("a_mutated_both_equal.html");
    CHECK(r.case_id == 2);
    r = CheckFixture("a_mutated_both_diff.html");
    CHECK(r.case_id == 4);
  }

  TEST_CASE("auto replace converges") {
    testing::TempDir dir;
    const TemplateStore store(dir.path());
    const Template original = TemplateA();
    store.Save(original);
    const auto mutated = PageBundle::Build("m", ReadFixture("a_mutated_upper.html"));
    RecheckOptions opts;
    opts.auto_replace = true;
    opts.store = &store;
    opts.now = FixedTime(3600);
    const auto r = Recheck(original, mutated, TagClassConfig::Defaults(), opts);
    CHECK(r.case_id == 3);
    CHECK(r.replaced);

    const Template next = store.Load(original.id);
    CHECK(next.signature == Signature::FromSigmas(4, 5));
    CHECK(next.created_at == original.created_at);
    CHECK(next.updated_at == FixedTime(3600));
    REQUIRE(next.history.size() == 1);
    CHECK(next.history[0].signature == original.signature);
    CHECK(next.history[0].updated_at == original.updated_at);
    CHECK(next.source_ref == original.source_ref);

    const auto again = Recheck(next, mutated, TagClassConfig::Defaults(), opts);
    CHECK(again.case_id == 1);
    CHECK_FALSE(again.replaced);
  }

  TEST_CASE("falls back to the stored paths when the RoI text is gone") {
    // Fixture-B has other text under the same skeleton.
    const auto r = CheckFixture("b.html");
    CHECK(r.case_id == 1);

    // Same record text replaced and the upper part mutated.
    std::string src = ReadFixture("a_mutated_lower.html");
    src.replace(src.find("Tidal"), 5, "Tiny");
    const auto page = PageBundle::Build("m", src);
    const auto report = Recheck(TemplateA(), page, TagClassConfig::Defaults());
    CHECK(report.case_id == 3);
    CHECK(report.changed_side == ChangedSide::kLower);

    testing::TempDir dir;
    const TemplateStore store(dir.path());
    RecheckOptions opts;
    opts.auto_replace = true;
    opts.store = &store;
    try {
      Recheck(TemplateA(), page, TagClassConfig::Defaults(), opts);
      FAIL("replaced");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kRoiLost);
    }
  }

  TEST_CASE("nothing to anchor on") {
    const auto page = PageBundle::Build("x", "<html><body><ul><li>other</li></ul></body></html>");
    try {
      Recheck(TemplateA(), page, TagClassConfig::Defaults());
      FAIL("checked");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kRegionNotFound);
    }
  }
}
