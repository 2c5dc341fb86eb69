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

#include <stdexcept>
#include <string>
#include <string_view>

namespace csurf {

enum class Errc {
  invalid_params,
  message_out_of_range,
  params_mismatch,
  decryption_failure,
  noise_budget_exceeded,
  denominator_overflow,
  numerator_overflow,
  out_of_bounds,
  empty_input,
  format,
  io,
  unsupported_modulus,
  invalid_argument,
  bounds_violation,
};

// Coarse grouping used by the CLI for exit codes.
enum class ErrorCategory { config, io, bounds, decrypt_failure, internal };

std::string_view to_string(Errc code) noexcept;
std::string_view to_string(ErrorCategory category) noexcept;
ErrorCategory category_of(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace csurf
