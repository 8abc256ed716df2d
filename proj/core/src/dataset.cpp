#include "dsr/dataset.hpp"

#include <algorithm>

#include "dsr/acl.hpp"
#include "dsr/content_store.hpp"
#include "dsr/error.hpp"
#include "dsr/lineage.hpp"
#include "dsr/repo.hpp"

namespace dsr {

Commit checkin(Repo& repo, const std::string& principal,
               const std::string& dataset, const fs::path& worktree,
               const CheckinOptions& options) {
  require_valid_name("dataset", dataset);
  require_access(repo, principal, Action::write, dataset);

  // Tags must be free before anything is written.
  for (const auto& t : options.tags) {
    require_valid_name("tag", t);
    if (repo.tag_target(t))
      fail(Errc::duplicate, "tag '" + t + "' already exists");
  }

  std::optional<std::string> head = repo.head(dataset);
  std::optional<std::string> parent = head;
  if (options.parent_override) {
    std::string id = repo.resolve_commit(*options.parent_override);
    parent = id;
  }
  for (const auto& p : options.extra_parents)
    if (!repo.has_commit(p)) fail(Errc::not_found, "unknown parent commit " + p);

  Manifest manifest;
  for (const auto& rel : list_tree(worktree, ".dsr")) {
    validate_repo_path(rel);
    PutResult put = repo.store().put_file(worktree / rel);
    put.entry.path = rel;
    manifest.entries.push_back(std::move(put.entry));
  }
  manifest.validate();

  std::string manifest_id = manifest.id();
  if (parent) {
    Commit parent_commit = repo.load_commit(*parent);
    if (parent_commit.manifest_id == manifest_id && !options.allow_empty)
      fail(Errc::empty_commit,
           "tree is identical to parent " + parent->substr(0, 12));
  }
  repo.store().write_manifest(manifest);

  Commit commit;
  commit.dataset = dataset;
  commit.manifest_id = manifest_id;
  if (parent) commit.parents.push_back(*parent);
  for (const auto& p : options.extra_parents)
    if (std::find(commit.parents.begin(), commit.parents.end(), p) ==
        commit.parents.end())
      commit.parents.push_back(p);
  commit.author = principal;
  commit.timestamp = now_utc_seconds();
  commit.message = options.message;
  commit.attributes = options.attributes;
  commit.commit_id = repo.store_commit(commit);

  // CAS against the head observed above; a concurrent mover wins and we
  // report a retryable conflict. The stored commit object is unreachable
  // garbage in that case.
  repo.advance_head(dataset, head, commit.commit_id);

  for (const auto& t : options.tags) repo.write_tag(t, commit.commit_id);
  return commit;
}

static bool commit_is_head(const Repo& repo, const Commit& c) {
  auto h = repo.head(c.dataset);
  return h && *h == c.commit_id;
}

std::vector<Commit> query(Repo& repo, const std::string& principal,
                          const QueryExpr& expr, const QueryOptions& options) {
  expr.validate();
  AclTable acl = load_acl(repo);
  auto revoked = revoked_commits(repo);
  std::vector<Commit> out;
  for (auto& c : repo.list_commits()) {
    if (!repo.head(c.dataset)) continue;  // deleted dataset
    if (!options.include_revoked && revoked.count(c.commit_id)) continue;
    if (!acl.authorize(principal, Action::read, c.dataset).allowed) continue;
    if (!expr.matches(c, repo.tags_of(c.commit_id), commit_is_head(repo, c)))
      continue;
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Commit& a, const Commit& b) {
    if (a.timestamp != b.timestamp) return a.timestamp > b.timestamp;
    return a.commit_id < b.commit_id;
  });
  return out;
}

static void materialize(Repo& repo, const Commit& commit, const fs::path& dest) {
  std::error_code ec;
  if (fs::exists(dest, ec)) {
    if (!fs::is_directory(dest, ec))
      fail(Errc::validation, dest.string() + " exists and is not a directory");
    if (fs::directory_iterator(dest) != fs::directory_iterator())
      fail(Errc::validation, dest.string() + " is not empty");
  }
  fs::create_directories(dest, ec);
  Manifest m = repo.store().read_manifest(commit.manifest_id);
  for (const auto& entry : m.entries)
    repo.store().get_blob_to_file(entry, dest / entry.path);
}

CheckoutResult checkout(Repo& repo, const std::string& principal,
                        const Selector& selector, const fs::path& dest_dir,
                        const CheckoutOptions& options) {
  std::vector<Commit> picked;
  if (const auto* sel = std::get_if<SelectorCommit>(&selector)) {
    Commit c = repo.load_commit(repo.resolve_commit(sel->id_or_prefix));
    require_access(repo, principal, Action::read, c.dataset);
    picked.push_back(std::move(c));
  } else if (const auto* sel = std::get_if<SelectorHead>(&selector)) {
    require_access(repo, principal, Action::read, sel->dataset);
    auto h = repo.head(sel->dataset);
    if (!h) fail(Errc::not_found, "no dataset '" + sel->dataset + "'");
    picked.push_back(repo.load_commit(*h));
  } else {
    const auto& expr = std::get<QueryExpr>(selector);
    picked = query(repo, principal, expr);
    if (picked.empty()) fail(Errc::no_match, "query matched no commit");
    if (picked.size() > 1 && !options.multi_ok)
      fail(Errc::ambiguous_query, "query matched " +
                                      std::to_string(picked.size()) +
                                      " commits; narrow it or pass multi");
  }

  auto revoked = revoked_commits(repo);
  for (const auto& c : picked)
    if (revoked.count(c.commit_id))
      fail(Errc::revoked_data, "commit " + c.commit_id.substr(0, 12) +
                                   " is revoked and cannot be checked out");

  CheckoutResult result;
  if (picked.size() == 1 && !options.multi_ok) {
    materialize(repo, picked[0], dest_dir);
    result.dirs.push_back(dest_dir);
  } else {
    for (const auto& c : picked) {
      fs::path sub =
          dest_dir / (c.dataset + "@" + c.commit_id.substr(0, 12));
      materialize(repo, c, sub);
      result.dirs.push_back(sub);
    }
  }
  result.commits = std::move(picked);
  return result;
}

DiffReport diff(Repo& repo, const std::string& principal,
                const std::string& commit_a, const std::string& commit_b) {
  Commit a = repo.load_commit(repo.resolve_commit(commit_a));
  Commit b = repo.load_commit(repo.resolve_commit(commit_b));
  require_access(repo, principal, Action::read, a.dataset);
  if (b.dataset != a.dataset)
    require_access(repo, principal, Action::read, b.dataset);

  Manifest ma = repo.store().read_manifest(a.manifest_id);
  Manifest mb = repo.store().read_manifest(b.manifest_id);

  DiffReport report;
  std::map<std::string, const FileEntry*> in_a;
  for (const auto& e : ma.entries) in_a[e.path] = &e;
  for (const auto& e : mb.entries) {
    auto it = in_a.find(e.path);
    if (it == in_a.end())
      report.added.push_back(e.path);
    else if (it->second->file_hash != e.file_hash)
      report.modified.push_back(e.path);
    else
      ++report.unchanged_count;
  }
  std::set<std::string> in_b;
  for (const auto& e : mb.entries) in_b.insert(e.path);
  for (const auto& e : ma.entries)
    if (!in_b.count(e.path)) report.deleted.push_back(e.path);
  return report;
}

std::vector<Commit> log(Repo& repo, const std::string& principal,
                        const std::string& dataset) {
  require_access(repo, principal, Action::read, dataset);
  auto h = repo.head(dataset);
  if (!h) fail(Errc::not_found, "no dataset '" + dataset + "'");
  std::vector<Commit> out;
  std::string cur = *h;
  while (true) {
    Commit c = repo.load_commit(cur);
    if (c.dataset != dataset) break;  // crossed a derivation edge
    out.push_back(c);
    if (out.back().parents.empty()) break;
    cur = out.back().parents.front();
  }
  return out;
}

void tag_commit(Repo& repo, const std::string& principal,
                const std::string& name, const std::string& commit_id) {
  Commit c = repo.load_commit(repo.resolve_commit(commit_id));
  require_access(repo, principal, Action::write, c.dataset);
  repo.write_tag(name, c.commit_id);
}

void delete_dataset(Repo& repo, const std::string& principal,
                    const std::string& dataset) {
  require_access(repo, principal, Action::admin, dataset);
  auto h = repo.head(dataset);
  if (!h) fail(Errc::not_found, "no dataset '" + dataset + "'");

  for (const auto& [name, target] : repo.list_tags()) {
    if (!repo.has_commit(target)) continue;
    if (repo.load_commit(target).dataset == dataset) repo.remove_tag(name);
  }
  repo.record_tombstone(dataset, principal, *h);
  repo.remove_head(dataset);
}

std::set<std::string> default_gc_roots(const Repo& repo) {
  auto revoked = revoked_commits(repo);
  std::set<std::string> roots;
  for (const auto& c : repo.list_commits()) {
    if (!repo.head(c.dataset)) continue;
    if (revoked.count(c.commit_id)) continue;
    roots.insert(c.manifest_id);
  }
  return roots;
}

}  // namespace dsr
