#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dsr {

class Repo;

// One edge set of the lineage graph: which inputs, workflow and run produced
// an output commit. Appended by the workflow engine on successful commit-back.
struct ProvenanceRecord {
  std::string output_commit;
  std::vector<std::string> input_commits;
  std::string workflow;
  std::string workflow_def_hash;
  std::string run_id;
  std::string terminal_step;
  int64_t recorded_at = 0;
};

struct RevocationMark {
  std::string commit_id;
  std::string reason;
  std::string revoked_by;
  int64_t revoked_at = 0;
  std::vector<std::string> closure;  // additionally revoked downstream
};

void record_provenance(Repo& repo, const ProvenanceRecord& record);
std::vector<ProvenanceRecord> load_provenance(const Repo& repo);
std::optional<ProvenanceRecord> provenance_of_output(const Repo& repo,
                                                     const std::string& commit_id);

// Transitive closure over commit parent edges plus provenance input->output
// edges, excluding the argument itself.
std::set<std::string> ancestors(const Repo& repo, const std::string& commit_id);
std::set<std::string> descendants(const Repo& repo, const std::string& commit_id);

std::vector<RevocationMark> load_revocations(const Repo& repo);
std::set<std::string> revoked_commits(const Repo& repo);
bool is_revoked(const Repo& repo, const std::string& commit_id);

struct RevokeResult {
  RevocationMark mark;
  bool already_revoked = false;  // idempotent no-op
};

// Requires admin on the commit's dataset. With cascade, every descendant is
// marked too; checkout of any marked commit fails with RevokedData and gc no
// longer treats their manifests as live.
RevokeResult revoke(Repo& repo, const std::string& principal,
                    const std::string& commit_id, const std::string& reason,
                    bool cascade);

}  // namespace dsr
