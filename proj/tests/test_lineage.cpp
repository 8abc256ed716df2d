#include <doctest.h>

#include <deque>
#include <random>

#include "dsr/acl.hpp"
#include "dsr/dataset.hpp"
#include "dsr/error.hpp"
#include "dsr/lineage.hpp"
#include "dsr/repo.hpp"
#include "support/helpers.hpp"

using namespace dsr;
using testing::RepoFixture;
using testing::write_file;

namespace {

Commit commit_tree(RepoFixture& f, const std::string& dataset,
                   const std::string& content,
                   const std::vector<std::string>& extra_parents = {}) {
  testing::TempDir work;
  write_file(work.path() / "f.txt", content);
  CheckinOptions options;
  options.message = "c";
  options.allow_empty = true;
  options.extra_parents = extra_parents;
  return checkin(f.repo, "root", dataset, work.path(), options);
}

ProvenanceRecord make_record(const std::string& output,
                             const std::vector<std::string>& inputs,
                             const std::string& run_id) {
  ProvenanceRecord rec;
  rec.output_commit = output;
  rec.input_commits = inputs;
  rec.workflow = "wf";
  rec.workflow_def_hash = std::string(64, 'a');
  rec.run_id = run_id;
  rec.terminal_step = "t";
  rec.recorded_at = now_utc_seconds();
  return rec;
}

// independent BFS over an explicit edge list
std::set<std::string> bfs(const std::map<std::string, std::set<std::string>>& adj,
                          const std::string& from) {
  std::set<std::string> seen;
  std::deque<std::string> q{from};
  while (!q.empty()) {
    auto cur = q.front();
    q.pop_front();
    auto it = adj.find(cur);
    if (it == adj.end()) continue;
    for (const auto& n : it->second)
      if (seen.insert(n).second) q.push_back(n);
  }
  seen.erase(from);
  return seen;
}

}  // namespace

TEST_CASE("provenance append, query, duplicate rejection") {
  RepoFixture f;
  Commit x = commit_tree(f, "raw", "x");
  Commit s3 = commit_tree(f, "derived", "s3", {x.commit_id});

  record_provenance(f.repo, make_record(s3.commit_id, {x.commit_id}, "RUN1"));
  auto rec = provenance_of_output(f.repo, s3.commit_id);
  REQUIRE(rec);
  CHECK(rec->input_commits == std::vector<std::string>{x.commit_id});

  try {
    record_provenance(f.repo, make_record(s3.commit_id, {x.commit_id}, "RUN2"));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::duplicate);
  }

  // manual commit: no provenance, lineage is parents only
  CHECK(!provenance_of_output(f.repo, x.commit_id));

  // two runs sharing one input
  Commit s4 = commit_tree(f, "derived2", "s4", {x.commit_id});
  record_provenance(f.repo, make_record(s4.commit_id, {x.commit_id}, "RUN3"));
  int sharing = 0;
  for (const auto& r : load_provenance(f.repo))
    for (const auto& in : r.input_commits)
      if (in == x.commit_id) ++sharing;
  CHECK(sharing == 2);
}

TEST_CASE("ancestors of genesis is empty; chains are transitive") {
  RepoFixture f;
  Commit raw = commit_tree(f, "raw", "1");
  CHECK(ancestors(f.repo, raw.commit_id).empty());

  Commit derived = commit_tree(f, "derived", "2", {raw.commit_id});
  record_provenance(f.repo, make_record(derived.commit_id, {raw.commit_id}, "R1"));
  Commit report = commit_tree(f, "report", "3", {derived.commit_id});
  record_provenance(f.repo,
                    make_record(report.commit_id, {derived.commit_id}, "R2"));

  auto down = descendants(f.repo, raw.commit_id);
  CHECK(down.count(derived.commit_id));
  CHECK(down.count(report.commit_id));
  auto up = ancestors(f.repo, report.commit_id);
  CHECK(up.count(derived.commit_id));
  CHECK(up.count(raw.commit_id));
  CHECK_THROWS_AS(ancestors(f.repo, std::string(64, '0')), Error);
}

TEST_CASE("closures match brute-force BFS on random provenance graphs") {
  RepoFixture f;
  std::mt19937_64 rng(31337);

  // layered DAG of commits; some edges become provenance records
  const int n = 40;
  std::vector<Commit> commits;
  std::map<std::string, std::set<std::string>> fwd, back;
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> parents;
    int edges = i == 0 ? 0 : int(rng() % 3);
    for (int e = 0; e < edges; ++e)
      parents.push_back(commits[rng() % commits.size()].commit_id);
    std::sort(parents.begin(), parents.end());
    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());

    Commit c = commit_tree(f, "graph", "node" + std::to_string(i), parents);
    if (!parents.empty() && rng() % 2 == 0)
      record_provenance(f.repo,
                        make_record(c.commit_id, parents, "R" + std::to_string(i)));
    // head parent edge is implicit in checkin; read the stored commit
    Commit stored = f.repo.load_commit(c.commit_id);
    for (const auto& p : stored.parents) {
      fwd[p].insert(stored.commit_id);
      back[stored.commit_id].insert(p);
    }
    commits.push_back(stored);
  }

  for (int probe = 0; probe < 10; ++probe) {
    const Commit& c = commits[rng() % commits.size()];
    CHECK(descendants(f.repo, c.commit_id) == bfs(fwd, c.commit_id));
    CHECK(ancestors(f.repo, c.commit_id) == bfs(back, c.commit_id));
  }
}

TEST_CASE("revoke marks, cascades, and blocks checkout") {
  RepoFixture f;
  Commit x = commit_tree(f, "raw", "x");
  Commit s3 = commit_tree(f, "derived", "s3", {x.commit_id});
  record_provenance(f.repo, make_record(s3.commit_id, {x.commit_id}, "R1"));

  SUBCASE("cascade true revokes the downstream closure") {
    RevokeResult r = revoke(f.repo, "root", x.commit_id, "oops", true);
    CHECK(!r.already_revoked);
    CHECK(r.mark.closure == std::vector<std::string>{s3.commit_id});

    testing::TempDir out;
    for (const auto& id : {x.commit_id, s3.commit_id}) {
      try {
        checkout(f.repo, "root", SelectorCommit{id}, out.path() / "a");
        CHECK(false);
      } catch (const Error& e) {
        CHECK(e.code() == Errc::revoked_data);
      }
    }
    // revoked commits vanish from queries unless asked for
    CHECK(query(f.repo, "root", QueryExpr{}).empty());
    CHECK(query(f.repo, "root", QueryExpr{}, QueryOptions{true}).size() == 2);

    // idempotent re-revoke warns
    RevokeResult again = revoke(f.repo, "root", x.commit_id, "again", true);
    CHECK(again.already_revoked);
  }

  SUBCASE("cascade false leaves the derived commit usable") {
    revoke(f.repo, "root", x.commit_id, "oops", false);
    testing::TempDir out;
    CHECK_NOTHROW(
        checkout(f.repo, "root", SelectorCommit{s3.commit_id}, out.path() / "b"));
  }

  SUBCASE("revoke requires admin on the commit's dataset") {
    grant(f.repo, "root", "w", "raw", Role::writer);
    try {
      revoke(f.repo, "w", x.commit_id, "nope", true);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::permission_denied);
    }
  }
}

TEST_CASE("gc after revoke reclaims exactly the unique chunks") {
  RepoFixture f;
  std::string shared(30000, 's');
  testing::SeededBytes noise(8);
  std::string unique = noise.bytes(30000);

  testing::TempDir w1, w2;
  write_file(w1.path() / "shared.bin", shared);
  CheckinOptions o;
  o.message = "keep";
  Commit keep = checkin(f.repo, "root", "keep", w1.path(), o);
  write_file(w2.path() / "shared.bin", shared);
  write_file(w2.path() / "unique.bin", unique);
  o.message = "bad";
  Commit bad = checkin(f.repo, "root", "bad", w2.path(), o);

  revoke(f.repo, "root", bad.commit_id, "contaminated", true);

  // oracle: survivors = chunks reachable from non-revoked commits
  std::set<std::string> expected;
  Manifest m = f.repo.store().read_manifest(keep.manifest_id);
  for (const auto& e : m.entries)
    for (const auto& c : e.chunks) expected.insert(c.id);

  FileLock lock = f.repo.lock_repo();
  GcReport report = f.repo.store().gc(lock, default_gc_roots(f.repo));
  CHECK(report.deleted > 0);
  std::set<std::string> surviving;
  f.repo.store().objects().for_each(
      [&](const ChunkId& id) { surviving.insert(id); });
  CHECK(surviving == expected);

  // shared chunks are still readable through the still-live commit
  testing::TempDir out;
  CHECK_NOTHROW(
      checkout(f.repo, "root", SelectorCommit{keep.commit_id}, out.path() / "x"));
}

TEST_CASE("combined lineage graph stays acyclic") {
  RepoFixture f;
  std::mt19937_64 rng(99);
  std::vector<Commit> commits;
  for (int i = 0; i < 25; ++i) {
    std::vector<std::string> parents;
    if (!commits.empty())
      for (int e = 0; e < int(rng() % 2) + 1; ++e)
        parents.push_back(commits[rng() % commits.size()].commit_id);
    std::sort(parents.begin(), parents.end());
    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
    commits.push_back(commit_tree(f, "acyc", "n" + std::to_string(i), parents));
  }
  for (const auto& c : commits) {
    auto down = descendants(f.repo, c.commit_id);
    CHECK(!down.count(c.commit_id));
    auto up = ancestors(f.repo, c.commit_id);
    CHECK(!up.count(c.commit_id));
    for (const auto& d : down) CHECK(!up.count(d));
  }
}
