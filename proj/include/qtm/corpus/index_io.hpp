#pragma once

#include <cstdint>
#include <filesystem>

#include "qtm/corpus/inverted_index.hpp"

namespace qtm::corpus {

inline constexpr std::uint32_t kIndexFormatVersion = 1;

/// Single-file layout, little-endian:
///
///   "QTMINDEX" | u32 version | u32 section count
///   { u32 tag | u64 payload bytes | payload }*      tags: STAT LEXI POST DOCS META
///   u64 FNV-1a checksum of everything before it
void persist_index(const InvertedIndex& index, const std::filesystem::path& path);

/// Throws NotFoundError for a missing file and IntegrityError for bad magic, a version
/// mismatch (naming both versions), truncation or checksum failure. Never returns a
/// partially loaded index.
InvertedIndex load_index(const std::filesystem::path& path);

}  // namespace qtm::corpus
