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
#include "revwrap/error.h"
#include "revwrap/segmenter.h"
#include "test_support.h"

using namespace revwrap;
using revwrap::testing::FixturePath;
using revwrap::testing::MakeRoi;
using revwrap::testing::ReadFixture;

namespace {

ErrorCode CodeOf(const std::function<void()>& fn, std::string* label = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (label) *label = e.label();
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kUsage;
}

// Displayed text of source[span], via the same tokenizer but rendered only
// over the slice.
std::string RenderSpan(const std::string& src, const Span& span) {
  const std::string slice = src.substr(span.begin, span.size());
  return RenderText(slice, StripTextFormatTags(Tokenize(slice))).text;
}

}  // namespace

TEST_SUITE("segmenter") {
  TEST_CASE("RoiSpec JSON") {
    const auto spec = RoiSpec::LoadFile(FixturePath("a.roi.json"));
    REQUIRE(spec.attributes.size() == 4);
    CHECK(spec.attributes[0].label == "Title");
    CHECK(spec.attributes[3].label == "Publication");
    CHECK(RoiSpec::FromJson(nlohmann::json::parse(spec.ToJson().dump())) == spec);

    const auto messy = RoiSpec::FromJson(nlohmann::json::parse(
        R"({"roi_text": "  a\n b &amp; c ", "attributes": [{"label": "X", "text": "b  &amp;"}]})"));
    CHECK(messy.roi_text == "a b & c");
    CHECK(messy.attributes[0].text == "b &");

    for (const char* bad : {R"({"attributes": []})", R"({"roi_text": " ", "attributes": []})",
                            R"({"roi_text": "a", "attributes": [{"label": "", "text": "a"}]})",
                            R"({"roi_text": "a a", "attributes": [{"label": "L", "text": "a"},
                                                                  {"label": "L", "text": "a"}]})",
                            R"([1, 2])"}) {
      CAPTURE(bad);
      CHECK(CodeOf([&] { RoiSpec::FromJson(nlohmann::json::parse(bad)); }) ==
            ErrorCode::kInvalidRoiSpec);
    }
  }

  TEST_CASE("Fixture-A spans agree with a substring search oracle") {
    const std::string src = ReadFixture("a.html");
    const auto page = PageBundle::Build("a.html", src);
    const auto roi = RoiSpec::LoadFile(FixturePath("a.roi.json"));
    const auto loc = LocateRoi(page, roi);

    // Oracle: hand-picked first and last displayed characters of each field.
    const auto at = [&](const std::string& s) { return src.find(s); };
    const Span title{at("Tidal Patterns"), at("Estuaries<br>") + 9};
    const Span author{at("Mara Quill"), at("Oden Fisk") + 9};
    const Span abstract{at("We trace"), at("inflow.") + 7};
    const Span publication{at("Coastal Records"), at("2019") + 4};
    CHECK(loc.roi_span == Span{title.begin, publication.end});
    REQUIRE(loc.attribute_spans.size() == 4);
    CHECK(loc.attribute_spans[0].label == "Title");
    CHECK(loc.attribute_spans[0].span == title);
    CHECK(loc.attribute_spans[1].span == author);
    CHECK(loc.attribute_spans[2].span == abstract);
    CHECK(loc.attribute_spans[3].span == publication);

    // Normalized windows line up with plain substring search too.
    const std::string& text = page.rendered.text;
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& a = loc.attribute_spans[k];
      CHECK(a.normalized.begin == text.find(roi.attributes[k].text));
      CHECK(text.substr(a.normalized.begin, a.normalized.size()) == roi.attributes[k].text);
      CHECK(RenderSpan(src, a.span) == roi.attributes[k].text);
      CHECK(loc.roi_span.Contains(a.span));
    }
    CHECK(RenderSpan(src, loc.roi_span) == roi.roi_text);
  }

  TEST_CASE("unknown and ambiguous RoI") {
    const auto page = PageBundle::Build("a.html", ReadFixture("a.html"));
    CHECK(CodeOf([&] { LocateRoi(page, MakeRoi({}, "zzz not on page")); }) == ErrorCode::kRoiNotFound);

    const auto xyx = PageBundle::Build("x", "<p>x</p><p>y</p><p>x</p>");
    CHECK(xyx.rendered.text == "x y x");
    CHECK(CodeOf([&] { LocateRoi(xyx, MakeRoi({}, "x")); }) == ErrorCode::kAmbiguousRoi);
    const auto loc = LocateRoi(xyx, MakeRoi({}, "x"), {true});
    CHECK(loc.roi_span == Span{3, 4});
    CHECK(loc.warnings.size() == 1);
  }

  TEST_CASE("attribute errors carry the label") {
    const auto page = PageBundle::Build("a.html", ReadFixture("a.html"));
    auto roi = RoiSpec::LoadFile(FixturePath("a.roi.json"));
    std::string label;

    auto missing = roi;
    missing.attributes[2].text = "text that is not there";
    CHECK(CodeOf([&] { LocateRoi(page, missing); }, &label) == ErrorCode::kAttributeNotFound);
    CHECK(label == "Abstract");

    auto swapped = roi;
    std::swap(swapped.attributes[0], swapped.attributes[1]);
    CHECK(CodeOf([&] { LocateRoi(page, swapped); }, &label) == ErrorCode::kAttributeNotFound);

    const auto twice = PageBundle::Build("t", "<p>ab ab cd</p>");
    CHECK(CodeOf([&] { LocateRoi(twice, MakeRoi({{"A", "ab"}, {"C", "cd"}}, "ab ab cd")); }, &label) ==
          ErrorCode::kAmbiguousAttribute);
    CHECK(label == "A");
    // Order pins both occurrences down.
    const auto pinned = LocateRoi(twice, MakeRoi({{"A", "ab"}, {"B", "ab"}, {"C", "cd"}}, "ab ab cd"));
    CHECK(pinned.attribute_spans[0].span == Span{3, 5});
    CHECK(pinned.attribute_spans[1].span == Span{6, 8});
  }

  TEST_CASE("attribute placement") {
    CHECK(PlaceAttributes("a b c", {{"1", "a"}, {"2", "c"}}) == std::vector<std::size_t>{0, 4});
    CHECK(PlaceAttributes("x y x z", {{"1", "x"}, {"2", "y"}}) == std::vector<std::size_t>{0, 2});
    CHECK_THROWS_AS(PlaceAttributes("x y x z", {{"1", "x"}, {"2", "z"}}), Error);
  }

  TEST_CASE("split page") {
    auto p = SplitPage("ABCDE", {2, 3});
    CHECK(p.upper == "AB");
    CHECK(p.lower == "DE");
    p = SplitPage("ABCDE", {0, 5});
    CHECK(p.upper.empty());
    CHECK(p.lower.empty());

    const std::string src = ReadFixture("a.html");
    const auto loc = LocateRoi(PageBundle::Build("a", src), RoiSpec::LoadFile(FixturePath("a.roi.json")));
    p = SplitPage(src, loc.roi_span);
    CHECK(p.upper.ends_with("<td>\n"));
    CHECK(p.lower.starts_with("<br>\n</td>"));
    CHECK(std::string(p.upper) + src.substr(loc.roi_span.begin, loc.roi_span.size()) +
              std::string(p.lower) ==
          src);
  }

  TEST_CASE("located attributes render back to their text on random pages") {
    std::mt19937 rng(21);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
      const auto rp = testing::MakeWellFormedPage(rng);
      const auto page = PageBundle::Build("r", rp.source);
      if (rp.leaf_markers.size() < 2) continue;
      // RoI = rendered text from one leaf marker through a later one.
      const std::size_t a = rng() % (rp.leaf_markers.size() - 1);
      const std::size_t b = a + 1 + rng() % (rp.leaf_markers.size() - a - 1);
      const std::string& text = page.rendered.text;
      const std::size_t from = text.find(rp.leaf_markers[a] + " ");
      const std::size_t to_marker = text.find(rp.leaf_markers[b]);
      if (from == std::string::npos || to_marker == std::string::npos) continue;
      const std::string roi_text = text.substr(from, to_marker + rp.leaf_markers[b].size() - from);
      const auto roi = MakeRoi({{"first", rp.leaf_markers[a]}, {"last", rp.leaf_markers[b]}}, roi_text);
      const auto loc = LocateRoi(page, roi);
      CHECK(RenderSpan(rp.source, loc.roi_span) == roi.roi_text);
      for (std::size_t k = 0; k < 2; ++k) {
        CHECK(RenderSpan(rp.source, loc.attribute_spans[k].span) == roi.attributes[k].text);
      }
      CHECK(LocateRoi(page, roi).roi_span == loc.roi_span);
      ++checked;
    }
    CHECK(checked > 100);
  }
}
