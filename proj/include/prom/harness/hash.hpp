// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

namespace prom {

/// SHA-1 digest as lowercase hex; used for input provenance stamps.
std::string sha1_hex(const void* data, std::size_t len);
std::string sha1_hex(const std::string& text);

/// Digest of a file's contents; throws FormatError if unreadable.
std::string sha1_file(const std::string& path);

}  // namespace prom
