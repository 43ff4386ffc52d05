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

// Helpers shared by unit and acceptance tests: fixture access, scratch
// directories, random page generators and independent oracles.

#ifndef REVWRAP_TESTS_TEST_SUPPORT_H_
#define REVWRAP_TESTS_TEST_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "revwrap/page_model.h"
#include "revwrap/segmenter.h"
#include "revwrap/util.h"

namespace revwrap::testing {

std::string FixturePath(const std::string& name);
std::string ReadFixture(const std::string& name);

// Fixed clock for reproducible templates.
Timestamp FixedTime(int offset_seconds = 0);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string Write(const std::string& name, const std::string& contents) const;

 private:
  std::filesystem::path path_;
};

// Arbitrary text mixing markup fragments, entities, quotes and UTF-8; for
// lexer totality tests.
std::string RandomSoup(std::mt19937& rng, std::size_t length);

// Random string of spaces, entities and words; for normalize properties.
std::string RandomText(std::mt19937& rng, std::size_t length);

// A random well-formed page: every open tag has its close, with text,
// inline formatting, void tags, comments and entities sprinkled in. Every
// text leaf holds a unique marker word "leafNq" so RoIs can be picked out.
struct RandomPage {
  std::string source;
  std::vector<std::string> leaf_markers;
};
RandomPage MakeWellFormedPage(std::mt19937& rng, int max_depth = 4, int max_children = 3);

// Largest number of pairs over all non-crossing open/close matchings of
// same-named tags in which no unmatched open lies inside a matched pair.
// Exhaustive search; fine for skeletons of a few dozen tags.
std::int64_t BruteForcePairCount(std::span<const TagToken> skeleton);

// Counts of (n_ot, n_ct, sigma) derived from BruteForcePairCount.
struct OracleMetrics {
  std::int64_t n_ot = 0;
  std::int64_t n_ct = 0;
  std::int64_t sigma = 0;
};
OracleMetrics BruteForceMetrics(std::span<const TagToken> skeleton);

// Builds an RoiSpec straight from labeled texts; roi_text is their join.
RoiSpec MakeRoi(const std::vector<std::pair<std::string, std::string>>& labeled,
                const std::string& roi_text = {});

}  // namespace revwrap::testing

#endif  // REVWRAP_TESTS_TEST_SUPPORT_H_
