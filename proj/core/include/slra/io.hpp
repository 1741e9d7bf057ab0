// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace slra {

/// Whole-file read. DataError when the file cannot be opened.
std::string read_file(const std::string& path);

/// Writes to a temp file in the target directory, then renames into
/// place, so no failed command leaves a partial output file.
void atomic_write_file(const std::string& path, const std::string& contents);

} // namespace slra
