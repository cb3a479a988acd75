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


#pragma once

#include <string>

namespace gram_realize {

enum class LogLevel { kOff = 0, kInfo = 1, kTrace = 2 };

// Level from GRAM_REALIZE_LOG (off | info | trace), read once. Defaults to off.
LogLevel log_level();
void log(LogLevel level, const std::string& message);

}  // namespace gram_realize
