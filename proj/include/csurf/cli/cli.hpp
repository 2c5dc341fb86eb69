/*
 * Copyright (c) 2026 The csurf Authors
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
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace csurf::cli {

// Process exit codes.
enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_config = 2,
  exit_io = 3,
  exit_bounds = 4,
  exit_decrypt_failure = 5,
};

// Parses "2^k", "256^k" or a decimal integer. Throws Errc::invalid_params.
std::uint64_t parse_modulus(const std::string& text);

// Entry point shared by the csurf executable and the tests. Errors go to
// `err` as "error: category=<c> message=<m>".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace csurf::cli
