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

// Little-endian word I/O shared by the binary file formats.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace csurf::io {

void write_u64(std::ostream& out, std::uint64_t value);
void write_u8(std::ostream& out, std::uint8_t value);
void write_magic(std::ostream& out, std::string_view magic);

std::uint64_t read_u64(std::istream& in);
std::uint8_t read_u8(std::istream& in);
// Throws Errc::format naming `what` if the next bytes differ from `magic`.
void expect_magic(std::istream& in, std::string_view magic, std::string_view what);

std::ofstream open_output(const std::filesystem::path& path, bool binary = true);
std::ifstream open_input(const std::filesystem::path& path, bool binary = true);

}  // namespace csurf::io
