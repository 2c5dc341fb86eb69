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

#include "csurf/error.hpp"

namespace csurf {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_params: return "invalid-params";
    case Errc::message_out_of_range: return "message-out-of-range";
    case Errc::params_mismatch: return "params-mismatch";
    case Errc::decryption_failure: return "decryption-failure";
    case Errc::noise_budget_exceeded: return "noise-budget-exceeded";
    case Errc::denominator_overflow: return "denominator-overflow";
    case Errc::numerator_overflow: return "numerator-overflow";
    case Errc::out_of_bounds: return "out-of-bounds";
    case Errc::empty_input: return "empty-input";
    case Errc::format: return "format";
    case Errc::io: return "io";
    case Errc::unsupported_modulus: return "unsupported-modulus";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::bounds_violation: return "bounds-violation";
  }
  return "unknown";
}

std::string_view to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::config: return "config";
    case ErrorCategory::io: return "io";
    case ErrorCategory::bounds: return "bounds";
    case ErrorCategory::decrypt_failure: return "decrypt-failure";
    case ErrorCategory::internal: return "internal";
  }
  return "internal";
}

ErrorCategory category_of(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_params:
    case Errc::message_out_of_range:
    case Errc::params_mismatch:
    case Errc::invalid_argument:
    case Errc::empty_input:
    case Errc::out_of_bounds:
      return ErrorCategory::config;
    case Errc::format:
    case Errc::io:
      return ErrorCategory::io;
    case Errc::denominator_overflow:
    case Errc::numerator_overflow:
    case Errc::unsupported_modulus:
    case Errc::bounds_violation:
      return ErrorCategory::bounds;
    case Errc::decryption_failure:
    case Errc::noise_budget_exceeded:
      return ErrorCategory::decrypt_failure;
  }
  return ErrorCategory::internal;
}

}  // namespace csurf
