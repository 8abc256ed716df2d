#include "dsr/repo.hpp"

#include <chrono>

#include <nlohmann/json.hpp>

#include "dsr/acl.hpp"
#include "dsr/error.hpp"
#include "dsr/sha256.hpp"

namespace dsr {

using ojson = nlohmann::ordered_json;

int64_t now_utc_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Repo::Repo(fs::path root) : root_(std::move(root)) {
  auto cfg = read_file_if_exists(dsr_dir() / "config.json");
  if (!cfg) fail(Errc::io, "missing config.json in " + dsr_dir().string());
  ojson doc = ojson::parse(*cfg);
  ChunkParams params;
  params.min_size = doc.at("chunking").at("min").get<size_t>();
  params.avg_size = doc.at("chunking").at("avg").get<size_t>();
  params.max_size = doc.at("chunking").at("max").get<size_t>();
  store_.emplace(dsr_dir(), params);
}

bool Repo::exists(const fs::path& root) {
  std::error_code ec;
  return fs::is_directory(root / ".dsr", ec);
}

Repo Repo::open(const fs::path& start) {
  fs::path dir = fs::absolute(start);
  while (true) {
    if (exists(dir)) return Repo(dir);
    if (dir == dir.root_path())
      fail(Errc::not_found, "no repository found: no .dsr directory from " +
                                fs::absolute(start).string() + " upward");
    dir = dir.parent_path();
  }
}

Repo Repo::init(const fs::path& root, const std::string& principal,
                const ChunkParams& params) {
  require_valid_name("principal", principal);
  params.validate();
  if (exists(root)) fail(Errc::duplicate, "repository already initialized");

  fs::path dsr = root / ".dsr";
  for (const char* sub : {"objects", "manifests", "commits", "refs/datasets",
                          "refs/tags", "locks", "tmp", "workflows", "runs",
                          "triggers/cursors", "triggers/schedule"})
    fs::create_directories(dsr / sub);

  ojson cfg;
  cfg["version"] = 1;
  cfg["chunking"] = {{"min", params.min_size},
                     {"avg", params.avg_size},
                     {"max", params.max_size}};
  atomic_write_file(dsr / "config.json", cfg.dump(), dsr / "tmp");

  Repo repo(root);
  AclTable acl;
  acl.entries.push_back({principal, "*", Role::admin});
  save_acl(repo, acl);
  return repo;
}

std::string Repo::store_commit(const Commit& c) {
  std::string body = c.canonical_json();
  std::string id = to_hex(sha256(body));
  fs::path p = commits_dir() / (id + ".json");
  std::error_code ec;
  if (!fs::exists(p, ec)) atomic_write_file(p, body, staging_dir());
  return id;
}

Commit Repo::load_commit(const std::string& commit_id) const {
  auto body = read_file_if_exists(commits_dir() / (commit_id + ".json"));
  if (!body) fail(Errc::not_found, "unknown commit " + commit_id);
  Commit c = Commit::from_json(*body);
  if (c.commit_id != commit_id)
    fail(Errc::integrity, "commit " + commit_id + " fails its hash");
  return c;
}

bool Repo::has_commit(const std::string& commit_id) const {
  std::error_code ec;
  return fs::exists(commits_dir() / (commit_id + ".json"), ec);
}

std::vector<std::string> Repo::list_commit_ids() const {
  std::vector<std::string> ids;
  std::error_code ec;
  if (!fs::exists(commits_dir(), ec)) return ids;
  for (const auto& e : fs::directory_iterator(commits_dir())) {
    std::string name = e.path().filename().string();
    if (name.size() == 69 && name.ends_with(".json"))
      ids.push_back(name.substr(0, 64));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<Commit> Repo::list_commits() const {
  std::vector<Commit> out;
  for (const auto& id : list_commit_ids()) out.push_back(load_commit(id));
  return out;
}

std::string Repo::resolve_commit(const std::string& prefix) const {
  if (prefix.size() < 4 || prefix.size() > 64)
    fail(Errc::validation, "commit id prefix must be 4..64 hex chars");
  for (char c : prefix)
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')))
      fail(Errc::validation, "commit id prefix must be lowercase hex");
  if (prefix.size() == 64) {
    if (!has_commit(prefix)) fail(Errc::not_found, "unknown commit " + prefix);
    return prefix;
  }
  std::vector<std::string> matches;
  for (const auto& id : list_commit_ids())
    if (id.starts_with(prefix)) matches.push_back(id);
  if (matches.empty()) fail(Errc::not_found, "unknown commit " + prefix);
  if (matches.size() > 1)
    fail(Errc::ambiguous_query,
         "commit prefix " + prefix + " matches " + std::to_string(matches.size()) +
             " commits");
  return matches[0];
}

fs::path Repo::head_path(const std::string& dataset) const {
  return dsr_dir() / "refs" / "datasets" / dataset;
}

fs::path Repo::tag_path(const std::string& name) const {
  return dsr_dir() / "refs" / "tags" / name;
}

static std::optional<std::string> read_ref(const fs::path& p) {
  auto body = read_file_if_exists(p);
  if (!body) return std::nullopt;
  while (!body->empty() && (body->back() == '\n' || body->back() == '\r'))
    body->pop_back();
  return body;
}

std::optional<std::string> Repo::head(const std::string& dataset) const {
  return read_ref(head_path(dataset));
}

void Repo::advance_head(const std::string& dataset,
                        const std::optional<std::string>& expected,
                        const std::string& new_commit_id) {
  FileLock lock = lock_dataset(dataset);
  auto current = head(dataset);
  if (current != expected)
    fail(Errc::conflict, "head of '" + dataset + "' moved concurrently (now " +
                             (current ? current->substr(0, 12) : "<none>") +
                             "); retry");
  atomic_write_file(head_path(dataset), new_commit_id + "\n", staging_dir());
}

void Repo::remove_head(const std::string& dataset) {
  FileLock lock = lock_dataset(dataset);
  std::error_code ec;
  fs::remove(head_path(dataset), ec);
}

std::vector<std::string> Repo::list_datasets() const {
  std::vector<std::string> out;
  std::error_code ec;
  fs::path dir = dsr_dir() / "refs" / "datasets";
  if (!fs::exists(dir, ec)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> Repo::tag_target(const std::string& name) const {
  return read_ref(tag_path(name));
}

void Repo::write_tag(const std::string& name, const std::string& commit_id) {
  require_valid_name("tag", name);
  if (!has_commit(commit_id)) fail(Errc::not_found, "unknown commit " + commit_id);
  FileLock lock(locks_dir() / "tags.lock");
  auto existing = tag_target(name);
  if (existing) {
    if (*existing == commit_id) return;
    fail(Errc::duplicate, "tag '" + name + "' already points at " +
                              existing->substr(0, 12));
  }
  atomic_write_file(tag_path(name), commit_id + "\n", staging_dir());
}

void Repo::remove_tag(const std::string& name) {
  std::error_code ec;
  fs::remove(tag_path(name), ec);
}

std::vector<std::pair<std::string, std::string>> Repo::list_tags() const {
  std::vector<std::pair<std::string, std::string>> out;
  std::error_code ec;
  fs::path dir = dsr_dir() / "refs" / "tags";
  if (!fs::exists(dir, ec)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    auto target = read_ref(e.path());
    if (target) out.emplace_back(e.path().filename().string(), *target);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> Repo::tags_of(const std::string& commit_id) const {
  std::vector<std::string> out;
  for (const auto& [name, target] : list_tags())
    if (target == commit_id) out.push_back(name);
  return out;
}

void Repo::record_tombstone(const std::string& dataset,
                            const std::string& principal,
                            const std::string& head_at_delete) {
  ojson rec;
  rec["dataset"] = dataset;
  rec["deleted_by"] = principal;
  rec["deleted_at"] = now_utc_seconds();
  rec["head"] = head_at_delete;
  append_line(dsr_dir() / "tombstones.jsonl", rec.dump());
}

bool Repo::has_tombstone(const std::string& dataset) const {
  auto body = read_file_if_exists(dsr_dir() / "tombstones.jsonl");
  if (!body) return false;
  size_t start = 0;
  while (start < body->size()) {
    size_t end = body->find('\n', start);
    if (end == std::string::npos) end = body->size();
    ojson rec = ojson::parse(body->substr(start, end - start));
    if (rec.at("dataset").get<std::string>() == dataset) return true;
    start = end + 1;
  }
  return false;
}

int Repo::version_of(const Commit& c) const {
  int depth = 1;
  Commit cur = c;
  while (!cur.parents.empty()) {
    Commit parent = load_commit(cur.parents.front());
    if (parent.dataset != cur.dataset) break;  // derivation edge, not history
    ++depth;
    cur = std::move(parent);
  }
  return depth;
}

}  // namespace dsr
