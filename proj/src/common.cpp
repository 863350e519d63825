// Copyright 2026 The vibrosim Authors
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

#include "vibrosim/common.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace vibrosim {
namespace {

std::mutex g_warning_mutex;

void default_handler(std::string_view module, std::string_view message) {
    std::cerr << "warning: " << module << ": " << message << '\n';
}

WarningHandler& handler_slot() {
    static WarningHandler slot = default_handler;
    return slot;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(g_warning_mutex);
    if (!handler) handler = default_handler;
    return std::exchange(handler_slot(), std::move(handler));
}

void warn(std::string_view module, std::string_view message) {
    std::lock_guard lock(g_warning_mutex);
    handler_slot()(module, message);
}

}  // namespace vibrosim
