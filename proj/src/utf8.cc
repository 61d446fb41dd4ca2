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

#include "lexstyle/utf8.h"

namespace lexstyle::utf8 {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool InRange(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

}  // namespace

std::u32string Decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      extra = 1;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3;
      cp = b0 & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + extra >= text.size()) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong forms, surrogates and out-of-range values.
    static constexpr char32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (!ok || cp < kMin[extra] || cp > 0x10FFFF || InRange(cp, 0xD800, 0xDFFF)) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

void Append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string Encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) Append(out, cp);
  return out;
}

bool IsSpace(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case U'\v':
    case U'\f':
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
    case 0xFEFF:
      return true;
    default:
      // U+200C (ZWNJ) is a letter-internal joiner in Persian, not a space.
      return InRange(cp, 0x2000, 0x200B);
  }
}

bool IsPunct(char32_t cp) {
  if (cp < 0x80) {
    return InRange(cp, 0x21, 0x2F) || InRange(cp, 0x3A, 0x40) ||
           InRange(cp, 0x5B, 0x60) || InRange(cp, 0x7B, 0x7E);
  }
  const bool latin1_symbol = InRange(cp, 0xA1, 0xBF) && cp != 0xAA && cp != 0xB2 &&
                             cp != 0xB3 && cp != 0xB5 && cp != 0xB9 && cp != 0xBA &&
                             cp != 0xBC && cp != 0xBD && cp != 0xBE;
  return latin1_symbol || cp == 0xD7 || cp == 0xF7 ||
         InRange(cp, 0x2010, 0x2027) || InRange(cp, 0x2030, 0x205E) ||
         InRange(cp, 0x3001, 0x3003) || InRange(cp, 0x300C, 0x300F) ||
         cp == 0x060C || cp == 0x061B || cp == 0x061F || cp == 0x066A ||
         cp == 0x066B || cp == 0x066C || cp == 0x06D4 || cp == 0xFD3E ||
         cp == 0xFD3F;
}

bool IsAlnum(char32_t cp) {
  if (cp < 0x80) {
    return InRange(cp, U'0', U'9') || InRange(cp, U'a', U'z') || InRange(cp, U'A', U'Z');
  }
  return !IsSpace(cp) && !IsPunct(cp);
}

char32_t ToLower(char32_t cp) {
  if (InRange(cp, U'A', U'Z')) return cp + 32;
  if (InRange(cp, 0xC0, 0xDE) && cp != 0xD7) return cp + 32;
  if (InRange(cp, 0x391, 0x3A9) && cp != 0x3A2) return cp + 32;
  if (InRange(cp, 0x410, 0x42F)) return cp + 32;
  if (InRange(cp, 0x400, 0x40F)) return cp + 80;
  return cp;
}

std::string ToLower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : Decode(text)) Append(out, ToLower(cp));
  return out;
}

}  // namespace lexstyle::utf8
