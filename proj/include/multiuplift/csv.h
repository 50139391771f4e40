/*
 * Copyright 2026 The multiuplift Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MULTIUPLIFT_CSV_H_
#define MULTIUPLIFT_CSV_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace multiuplift::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based source line of each row, for error messages.
  std::vector<std::size_t> lines;
};

// Reads a comma-separated file with a header row. Double-quoted fields
// ("" escapes a quote) and CRLF line endings are accepted. Throws IoError
// when the file cannot be opened and ValidationError on ragged rows.
Table Read(const std::filesystem::path& path);

std::vector<std::string> SplitLine(std::string_view line);

// Quotes the field only when it contains a comma, quote or newline.
std::string Escape(std::string_view field);

// Shortest-exact formatting: 17 significant digits.
std::string FormatDouble(double value);

// Strict parse of the whole field; returns false on trailing garbage.
bool ParseDouble(std::string_view text, double& out);
bool ParseInt(std::string_view text, long long& out);

// Writes `content` to a sibling temporary file and renames it over `path`,
// so readers never observe a partially written file.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view content);

std::string ReadFile(const std::filesystem::path& path);

}  // namespace multiuplift::csv

#endif  // MULTIUPLIFT_CSV_H_
