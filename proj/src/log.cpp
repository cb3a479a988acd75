// Copyright 2026 The gram-realize Authors
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


#include "log.hpp"

#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string_view>

namespace gram_realize {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("GRAM_REALIZE_LOG");
    if (env == nullptr) return LogLevel::kOff;
    const std::string_view v(env);
    if (v == "trace") return LogLevel::kTrace;
    if (v == "info") return LogLevel::kInfo;
    return LogLevel::kOff;
  }();
  return level;
}

void log(LogLevel level, const std::string& message) {
  if (level == LogLevel::kOff || level > log_level()) return;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::fprintf(stderr, "[gram-realize %s] %s\n", level == LogLevel::kTrace ? "trace" : "info",
               message.c_str());
}

}  // namespace gram_realize
