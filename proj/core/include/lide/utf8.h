// Copyright 2026 The lide Authors
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

#ifndef LIDE_UTF8_H_
#define LIDE_UTF8_H_

#include <string>
#include <string_view>

namespace lide::utf8 {

// Decodes UTF-8 into Unicode scalar values. Throws lide::Error naming the
// byte offset of the first malformed sequence (overlong forms, surrogates
// and values above U+10FFFF are rejected).
std::u32string Decode(std::string_view bytes);

// Returns the byte offset of the first invalid sequence, or npos.
std::size_t FindInvalid(std::string_view bytes);

std::string Encode(std::u32string_view scalars);
void AppendScalar(char32_t c, std::string* out);

// Unicode White_Space property.
bool IsSpace(char32_t c);

}  // namespace lide::utf8

#endif  // LIDE_UTF8_H_
