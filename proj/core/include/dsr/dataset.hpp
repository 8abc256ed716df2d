#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dsr/commit.hpp"
#include "dsr/fs_util.hpp"
#include "dsr/query.hpp"

namespace dsr {

class Repo;

struct CheckinOptions {
  std::string message;
  std::map<std::string, std::string> attributes;
  std::vector<std::string> tags;
  std::optional<std::string> parent_override;
  bool allow_empty = false;
  // Derivation parents appended after the dataset parent (workflow inputs).
  std::vector<std::string> extra_parents;
};

// Chunks and stores every file under `worktree`, creates the commit and
// advances the head by compare-and-swap. A tree identical to the parent is
// rejected unless allow_empty.
Commit checkin(Repo& repo, const std::string& principal,
               const std::string& dataset, const fs::path& worktree,
               const CheckinOptions& options);

struct SelectorCommit { std::string id_or_prefix; };
struct SelectorHead { std::string dataset; };
using Selector = std::variant<SelectorCommit, SelectorHead, QueryExpr>;

struct CheckoutOptions {
  bool multi_ok = false;  // query selector may materialize several commits
};

struct CheckoutResult {
  std::vector<Commit> commits;
  std::vector<fs::path> dirs;  // where each commit landed
};

// Materializes the selected commit(s) bit-exact into dest_dir (which must
// not exist or be empty). Revoked commits are refused.
CheckoutResult checkout(Repo& repo, const std::string& principal,
                        const Selector& selector, const fs::path& dest_dir,
                        const CheckoutOptions& options = {});

struct DiffReport {
  std::vector<std::string> added;
  std::vector<std::string> deleted;
  std::vector<std::string> modified;
  size_t unchanged_count = 0;
};

// Paths of b relative to a: present only in b -> added, only in a ->
// deleted, both but different content -> modified.
DiffReport diff(Repo& repo, const std::string& principal,
                const std::string& commit_a, const std::string& commit_b);

struct QueryOptions {
  bool include_revoked = false;
};

// Commits matching every filter, readable by the principal (others are
// silently excluded), newest first with commit_id as tiebreak.
std::vector<Commit> query(Repo& repo, const std::string& principal,
                          const QueryExpr& expr, const QueryOptions& options = {});

// Head-first walk of the dataset's first-parent chain.
std::vector<Commit> log(Repo& repo, const std::string& principal,
                        const std::string& dataset);

void tag_commit(Repo& repo, const std::string& principal,
                const std::string& name, const std::string& commit_id);

// Removes the head ref and the dataset's tags, records a tombstone. Objects
// stay until gc.
void delete_dataset(Repo& repo, const std::string& principal,
                    const std::string& dataset);

// Manifests of all non-revoked commits of datasets that still have a head.
std::set<std::string> default_gc_roots(const Repo& repo);

}  // namespace dsr
