#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsr/chunker.hpp"
#include "dsr/commit.hpp"
#include "dsr/content_store.hpp"
#include "dsr/fs_util.hpp"

namespace dsr {

// Layout under <root>/.dsr:
//   config.json              repo settings (chunking parameters)
//   objects/ manifests/ tmp/ content store
//   commits/<id>.json        canonical commit objects
//   refs/datasets/<name>     one-line head commit id
//   refs/tags/<name>         one-line commit id
//   acl.json                 authorization table
//   lineage.jsonl revocations.jsonl tombstones.jsonl
//   workflows/ runs/ triggers/
//   locks/                   flock files (repo.lock, ds.<name>.lock, ...)
class Repo {
 public:
  // Walks upward from `start` looking for a `.dsr` directory.
  static Repo open(const fs::path& start);
  static Repo init(const fs::path& root, const std::string& principal,
                   const ChunkParams& params = {});
  static bool exists(const fs::path& root);

  const fs::path& root() const { return root_; }
  fs::path dsr_dir() const { return root_ / ".dsr"; }
  fs::path locks_dir() const { return dsr_dir() / "locks"; }
  fs::path commits_dir() const { return dsr_dir() / "commits"; }
  fs::path runs_dir() const { return dsr_dir() / "runs"; }
  fs::path workflows_dir() const { return dsr_dir() / "workflows"; }
  fs::path triggers_dir() const { return dsr_dir() / "triggers"; }
  fs::path staging_dir() const { return dsr_dir() / "tmp"; }

  ContentStore& store() { return *store_; }
  const ContentStore& store() const { return *store_; }

  // Exclusive repository lock (gc, ACL writes, journal appends).
  FileLock lock_repo() const { return FileLock(locks_dir() / "repo.lock"); }
  FileLock lock_dataset(const std::string& name) const {
    return FileLock(locks_dir() / ("ds." + name + ".lock"));
  }
  FileLock lock_run(const std::string& run_id) const {
    return FileLock(locks_dir() / ("run." + run_id + ".lock"));
  }

  // --- commits ---
  std::string store_commit(const Commit& c);  // content-addressed, idempotent
  Commit load_commit(const std::string& commit_id) const;
  bool has_commit(const std::string& commit_id) const;
  std::vector<Commit> list_commits() const;
  std::vector<std::string> list_commit_ids() const;
  // Unique-prefix resolution (>= 4 hex chars). Errors: not_found, ambiguous.
  std::string resolve_commit(const std::string& prefix) const;

  // --- dataset heads ---
  std::optional<std::string> head(const std::string& dataset) const;
  // Compare-and-swap under the per-dataset lock. `expected` nullopt means
  // the head must not exist yet. Mismatch -> Errc::conflict.
  void advance_head(const std::string& dataset,
                    const std::optional<std::string>& expected,
                    const std::string& new_commit_id);
  void remove_head(const std::string& dataset);
  std::vector<std::string> list_datasets() const;

  // --- tags ---
  std::optional<std::string> tag_target(const std::string& name) const;
  // Creating an existing tag with a different target is a duplicate error;
  // same target is a no-op.
  void write_tag(const std::string& name, const std::string& commit_id);
  void remove_tag(const std::string& name);
  std::vector<std::pair<std::string, std::string>> list_tags() const;
  std::vector<std::string> tags_of(const std::string& commit_id) const;

  // --- dataset tombstones ---
  void record_tombstone(const std::string& dataset, const std::string& principal,
                        const std::string& head_at_delete);
  bool has_tombstone(const std::string& dataset) const;

  // First-parent depth of the commit within its dataset, 1-based ("v3").
  int version_of(const Commit& c) const;

 private:
  explicit Repo(fs::path root);

  fs::path head_path(const std::string& dataset) const;
  fs::path tag_path(const std::string& name) const;

  fs::path root_;
  std::optional<ContentStore> store_;
};

int64_t now_utc_seconds();

}  // namespace dsr
