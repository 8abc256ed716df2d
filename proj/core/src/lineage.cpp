#include "dsr/lineage.hpp"

#include <deque>
#include <map>

#include <nlohmann/json.hpp>

#include "dsr/acl.hpp"
#include "dsr/error.hpp"
#include "dsr/repo.hpp"

namespace dsr {

using ojson = nlohmann::ordered_json;

static void for_each_jsonl(const Repo& repo, const char* file,
                           const std::function<void(const ojson&)>& fn) {
  auto body = read_file_if_exists(repo.dsr_dir() / file);
  if (!body) return;
  size_t start = 0;
  while (start < body->size()) {
    size_t end = body->find('\n', start);
    if (end == std::string::npos) end = body->size();
    if (end > start) fn(ojson::parse(body->substr(start, end - start)));
    start = end + 1;
  }
}

void record_provenance(Repo& repo, const ProvenanceRecord& record) {
  FileLock lock = repo.lock_repo();
  if (provenance_of_output(repo, record.output_commit))
    fail(Errc::duplicate,
         "provenance already recorded for output " + record.output_commit);
  ojson rec;
  rec["output"] = record.output_commit;
  rec["inputs"] = record.input_commits;
  rec["workflow"] = record.workflow;
  rec["def_hash"] = record.workflow_def_hash;
  rec["run_id"] = record.run_id;
  rec["terminal_step"] = record.terminal_step;
  rec["recorded_at"] = record.recorded_at;
  append_line(repo.dsr_dir() / "lineage.jsonl", rec.dump());
}

std::vector<ProvenanceRecord> load_provenance(const Repo& repo) {
  std::vector<ProvenanceRecord> out;
  for_each_jsonl(repo, "lineage.jsonl", [&](const ojson& rec) {
    ProvenanceRecord p;
    p.output_commit = rec.at("output").get<std::string>();
    p.input_commits = rec.at("inputs").get<std::vector<std::string>>();
    p.workflow = rec.at("workflow").get<std::string>();
    p.workflow_def_hash = rec.at("def_hash").get<std::string>();
    p.run_id = rec.at("run_id").get<std::string>();
    p.terminal_step = rec.at("terminal_step").get<std::string>();
    p.recorded_at = rec.at("recorded_at").get<int64_t>();
    out.push_back(std::move(p));
  });
  return out;
}

std::optional<ProvenanceRecord> provenance_of_output(const Repo& repo,
                                                     const std::string& commit_id) {
  for (auto& rec : load_provenance(repo))
    if (rec.output_commit == commit_id) return rec;
  return std::nullopt;
}

// Edge lists of the combined lineage graph. Provenance input->output edges
// are usually a subset of parent edges (the engine writes inputs as parents)
// but the journal is authoritative, so both are merged.
static std::map<std::string, std::vector<std::string>> lineage_edges(
    const Repo& repo, bool downstream) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& c : repo.list_commits()) {
    for (const auto& p : c.parents) {
      if (downstream)
        adj[p].push_back(c.commit_id);
      else
        adj[c.commit_id].push_back(p);
    }
  }
  for (const auto& rec : load_provenance(repo)) {
    for (const auto& in : rec.input_commits) {
      if (downstream)
        adj[in].push_back(rec.output_commit);
      else
        adj[rec.output_commit].push_back(in);
    }
  }
  return adj;
}

static std::set<std::string> closure(const Repo& repo,
                                     const std::string& commit_id,
                                     bool downstream) {
  if (!repo.has_commit(commit_id))
    fail(Errc::not_found, "unknown commit " + commit_id);
  auto adj = lineage_edges(repo, downstream);
  std::set<std::string> seen;
  std::deque<std::string> queue{commit_id};
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    auto it = adj.find(cur);
    if (it == adj.end()) continue;
    for (const auto& next : it->second)
      if (seen.insert(next).second) queue.push_back(next);
  }
  seen.erase(commit_id);
  return seen;
}

std::set<std::string> ancestors(const Repo& repo, const std::string& commit_id) {
  return closure(repo, commit_id, false);
}

std::set<std::string> descendants(const Repo& repo, const std::string& commit_id) {
  return closure(repo, commit_id, true);
}

std::vector<RevocationMark> load_revocations(const Repo& repo) {
  std::vector<RevocationMark> out;
  for_each_jsonl(repo, "revocations.jsonl", [&](const ojson& rec) {
    RevocationMark m;
    m.commit_id = rec.at("commit").get<std::string>();
    m.reason = rec.at("reason").get<std::string>();
    m.revoked_by = rec.at("revoked_by").get<std::string>();
    m.revoked_at = rec.at("revoked_at").get<int64_t>();
    m.closure = rec.at("closure").get<std::vector<std::string>>();
    out.push_back(std::move(m));
  });
  return out;
}

std::set<std::string> revoked_commits(const Repo& repo) {
  std::set<std::string> out;
  for (const auto& m : load_revocations(repo)) {
    out.insert(m.commit_id);
    out.insert(m.closure.begin(), m.closure.end());
  }
  return out;
}

bool is_revoked(const Repo& repo, const std::string& commit_id) {
  return revoked_commits(repo).count(commit_id) > 0;
}

RevokeResult revoke(Repo& repo, const std::string& principal,
                    const std::string& commit_id, const std::string& reason,
                    bool cascade) {
  Commit c = repo.load_commit(commit_id);
  require_access(repo, principal, Action::admin, c.dataset);

  FileLock lock = repo.lock_repo();
  auto already = revoked_commits(repo);
  for (const auto& m : load_revocations(repo))
    if (m.commit_id == commit_id)
      return {m, true};

  RevocationMark mark;
  mark.commit_id = commit_id;
  mark.reason = reason;
  mark.revoked_by = principal;
  mark.revoked_at = now_utc_seconds();
  if (cascade) {
    for (const auto& d : descendants(repo, commit_id))
      if (!already.count(d)) mark.closure.push_back(d);
  }

  ojson rec;
  rec["commit"] = mark.commit_id;
  rec["reason"] = mark.reason;
  rec["revoked_by"] = mark.revoked_by;
  rec["revoked_at"] = mark.revoked_at;
  rec["closure"] = mark.closure;
  append_line(repo.dsr_dir() / "revocations.jsonl", rec.dump());
  return {mark, false};
}

}  // namespace dsr
