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

#include "lide/log.h"

#include <atomic>
#include <iostream>

namespace lide {
namespace {
std::atomic<bool> warnings_enabled{true};
}  // namespace

void SetWarningsEnabled(bool enabled) { warnings_enabled = enabled; }

void LogWarning(std::string_view message) {
  if (warnings_enabled) std::cerr << "lide: warning: " << message << '\n';
}

}  // namespace lide
