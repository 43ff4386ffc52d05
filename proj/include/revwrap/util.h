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

#ifndef REVWRAP_UTIL_H_
#define REVWRAP_UTIL_H_

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace revwrap {

using Timestamp = std::chrono::sys_seconds;

// Current UTC time truncated to whole seconds.
Timestamp Now();

// "2026-10-15T02:26:00Z"
std::string FormatTimestamp(Timestamp t);
// Inverse of FormatTimestamp; throws Error(kStoreError) on malformed input.
Timestamp ParseTimestamp(std::string_view text);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string Fnv1a64Hex(std::string_view data);

std::string AsciiLower(std::string_view s);

std::string ReadFileOrThrow(const std::string& path);

}  // namespace revwrap

#endif  // REVWRAP_UTIL_H_
