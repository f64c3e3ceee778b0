/*
 * Copyright 2026 The btp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "btp/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace btp {

namespace {

template <typename Visit>
void for_each_code_point(std::string_view text, Visit visit) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) c = 0xFFFD;
    visit(c);
  }
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), n, U8_MAX_LENGTH, c, error);
  if (error) {
    n = 0;
    U8_APPEND_UNSAFE(reinterpret_cast<uint8_t*>(buf), n, 0xFFFD);
  }
  out.append(buf, static_cast<std::size_t>(n));
}

bool is_punctuation(UChar32 c) {
  return (U_GET_GC_MASK(c) & U_GC_P_MASK) != 0;
}

}  // namespace

std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for_each_code_point(text, [&](UChar32 c) { append_utf8(out, u_tolower(c)); });
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for_each_code_point(text, [&](UChar32 c) {
    if (u_isUWhiteSpace(c)) {
      flush();
    } else if (is_punctuation(c)) {
      flush();
      append_utf8(current, c);
      flush();
    } else {
      append_utf8(current, u_tolower(c));
    }
  });
  flush();
  return tokens;
}

std::vector<std::string> code_points(std::string_view text) {
  std::vector<std::string> out;
  for_each_code_point(text, [&](UChar32 c) {
    std::string cp;
    append_utf8(cp, c);
    out.push_back(std::move(cp));
  });
  return out;
}

}  // namespace btp
