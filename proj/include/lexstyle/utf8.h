// Copyright 2026 The lexstyle Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXSTYLE_UTF8_H_
#define LEXSTYLE_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace lexstyle::utf8 {

// Decodes UTF-8 into scalar values. Malformed sequences decode to U+FFFD,
// one replacement per offending byte.
std::u32string Decode(std::string_view text);

void Append(std::string& out, char32_t cp);
std::string Encode(std::u32string_view text);

bool IsSpace(char32_t cp);
bool IsPunct(char32_t cp);
bool IsAlnum(char32_t cp);

// Simple case folding for Latin, Latin-1, Greek and Cyrillic. Scripts
// without case (Arabic/Persian among them) pass through.
char32_t ToLower(char32_t cp);
std::string ToLower(std::string_view text);

}  // namespace lexstyle::utf8

#endif  // LEXSTYLE_UTF8_H_
