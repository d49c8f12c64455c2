/*
 * Copyright (c) 2026, The threeec Authors.
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

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace threeec {

/// Insertion-ordered JSON, so serialized key order is stable.
using Json = nlohmann::ordered_json;

/// 17 significant digits ("%.17g"); non-finite values as "inf", "-inf", "nan".
std::string format_double(double v);

/// Pretty-prints with 2-space indentation and 17-digit floats. Non-finite floats become strings.
std::string dump_json(const Json& doc);

/// Writes to a temporary sibling file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace threeec
