#pragma once

#include <functional>
#include <iosfwd>
#include <set>
#include <string>

#include "dsr/chunker.hpp"
#include "dsr/fs_util.hpp"
#include "dsr/manifest.hpp"

namespace dsr {

class FileLock;

// Chunk files under objects/<first 2 hex>/<remaining 62 hex>, file content
// is the raw chunk bytes. Writes stage in tmp/ and rename into place, so a
// killed writer never leaves a partial object.
class ObjectStore {
 public:
  explicit ObjectStore(fs::path store_dir, fs::path staging_dir);

  bool has(const ChunkId& id) const;
  // Returns true if the chunk was newly written, false if already present.
  bool put(const ChunkId& id, std::string_view bytes);
  // Throws Errc::corruption naming the id when absent.
  std::string get(const ChunkId& id) const;

  void for_each(const std::function<void(const ChunkId&)>& fn) const;
  void remove(const ChunkId& id);

  fs::path object_path(const ChunkId& id) const;

 private:
  fs::path dir_;
  fs::path staging_;
};

struct PutResult {
  FileEntry entry;       // path unset
  size_t new_chunks = 0; // chunks not previously in the store
};

struct GcReport {
  size_t scanned = 0;
  size_t retained = 0;
  size_t deleted = 0;
};

// Content-addressed blob store plus manifest storage: the physical layer
// every dataset version resolves to.
class ContentStore {
 public:
  ContentStore(fs::path dsr_dir, ChunkParams params);

  PutResult put_blob(std::istream& in);
  PutResult put_blob(std::string_view bytes);
  PutResult put_file(const fs::path& file);

  // Reassembles and verifies: missing chunk -> corruption, assembled hash
  // mismatch -> integrity.
  std::string get_blob(const FileEntry& entry) const;
  void get_blob_to_file(const FileEntry& entry, const fs::path& dest) const;

  std::string write_manifest(const Manifest& m);  // returns manifest_id
  Manifest read_manifest(const std::string& manifest_id) const;
  bool has_manifest(const std::string& manifest_id) const;

  // Deletes every chunk not reachable from the live manifests. Caller must
  // hold the exclusive repository lock and pass it as proof.
  GcReport gc(const FileLock& repo_lock, const std::set<std::string>& live_manifest_ids);

  const ChunkParams& params() const { return params_; }
  ObjectStore& objects() { return objects_; }
  const ObjectStore& objects() const { return objects_; }

 private:
  fs::path dsr_dir_;
  ChunkParams params_;
  ObjectStore objects_;
};

}  // namespace dsr
