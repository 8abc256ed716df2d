#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dsr {

// 64 lowercase hex chars, SHA-256 of the chunk bytes.
using ChunkId = std::string;

struct ChunkRef {
  ChunkId id;
  uint64_t length = 0;
  bool operator==(const ChunkRef&) const = default;
};

struct FileEntry {
  std::string path;  // repo-relative, unset until check-in
  uint64_t size = 0;
  std::string file_hash;  // SHA-256 of the whole file
  std::vector<ChunkRef> chunks;

  bool operator==(const FileEntry&) const = default;

  // sum(chunk lengths) == size, size == 0 iff no chunks, ids well formed.
  void validate() const;
};

// Immutable snapshot of a file tree. Entries sorted by path, paths unique.
struct Manifest {
  std::vector<FileEntry> entries;

  bool operator==(const Manifest&) const = default;

  // Canonical serialization: compact JSON, fixed key order, sorted entries.
  // Equal trees produce byte-identical output.
  std::string canonical_json() const;
  std::string id() const;  // SHA-256 of canonical_json()

  static Manifest from_json(const std::string& text);

  const FileEntry* find(const std::string& path) const;
  void validate() const;
};

}  // namespace dsr
