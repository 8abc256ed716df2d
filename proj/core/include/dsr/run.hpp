#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dsr {

class Repo;

enum class StepState { pending, running, awaiting_human, succeeded, failed, skipped };
enum class RunState { pending, running, awaiting_human, succeeded, failed };

const char* step_state_name(StepState s);
const char* run_state_name(RunState s);
std::optional<RunState> run_state_from_name(const std::string& s);

// Legal transitions; `skipped` additionally requires a failed ancestor.
bool step_transition_ok(StepState from, StepState to);

enum class CauseKind { manual, event, schedule };

struct Cause {
  CauseKind kind = CauseKind::manual;
  // event: triggering commit id; schedule: fire minute; manual: principal.
  std::string detail;

  std::string to_string() const;
};

struct StepStatus {
  StepState state = StepState::pending;
  int64_t start_us = 0;  // steady-clock micros within the executing process
  int64_t end_us = 0;
  int exit_code = 0;
  std::string stderr_tail;
  std::string error;
};

// Folded view of runs/<run_id>/journal.jsonl. The journal is append-only;
// every state change is one timestamped line, so readers can tail it and a
// restart reconstructs exactly what was durable.
struct Run {
  std::string run_id;
  std::string workflow;
  std::string def_hash;
  Cause cause;
  int chain_depth = 0;
  int64_t created_at = 0;
  std::map<std::string, std::string> pinned;  // source step -> commit id
  std::map<std::string, StepStatus> steps;
  std::optional<std::string> output_commit;
  std::optional<std::string> run_error;  // failure before any step

  RunState state() const;
  bool terminal() const;

  static Run load(const Repo& repo, const std::string& run_id);
  static bool exists(const Repo& repo, const std::string& run_id);
};

std::vector<std::string> list_run_ids(const Repo& repo);

// Journal writers. Each append fsyncs; callers serialize via the run lock.
void journal_created(Repo& repo, const Run& run);
void journal_pinned(Repo& repo, const std::string& run_id,
                    const std::string& step, const std::string& commit);
void journal_step(Repo& repo, const std::string& run_id, const std::string& step,
                  StepState state, const StepStatus& status);
void journal_output(Repo& repo, const std::string& run_id,
                    const std::string& commit);
void journal_run_error(Repo& repo, const std::string& run_id,
                       const std::string& message);

}  // namespace dsr
