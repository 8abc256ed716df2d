#include "dsr/run.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "dsr/error.hpp"
#include "dsr/repo.hpp"
#include "dsr/ulid.hpp"

namespace dsr {

using ojson = nlohmann::ordered_json;

const char* step_state_name(StepState s) {
  switch (s) {
    case StepState::pending: return "pending";
    case StepState::running: return "running";
    case StepState::awaiting_human: return "awaiting_human";
    case StepState::succeeded: return "succeeded";
    case StepState::failed: return "failed";
    case StepState::skipped: return "skipped";
  }
  return "?";
}

const char* run_state_name(RunState s) {
  switch (s) {
    case RunState::pending: return "pending";
    case RunState::running: return "running";
    case RunState::awaiting_human: return "awaiting_human";
    case RunState::succeeded: return "succeeded";
    case RunState::failed: return "failed";
  }
  return "?";
}

std::optional<RunState> run_state_from_name(const std::string& s) {
  for (RunState v : {RunState::pending, RunState::running, RunState::awaiting_human,
                     RunState::succeeded, RunState::failed})
    if (s == run_state_name(v)) return v;
  return std::nullopt;
}

static std::optional<StepState> step_state_from_name(const std::string& s) {
  for (StepState v : {StepState::pending, StepState::running,
                      StepState::awaiting_human, StepState::succeeded,
                      StepState::failed, StepState::skipped})
    if (s == step_state_name(v)) return v;
  return std::nullopt;
}

bool step_transition_ok(StepState from, StepState to) {
  switch (from) {
    case StepState::pending:
      return to == StepState::running || to == StepState::awaiting_human ||
             to == StepState::skipped;
    case StepState::running:
      return to == StepState::succeeded || to == StepState::failed;
    case StepState::awaiting_human:
      return to == StepState::succeeded || to == StepState::failed;
    default:
      return false;  // terminal states are final
  }
}

std::string Cause::to_string() const {
  switch (kind) {
    case CauseKind::manual: return "manual:" + detail;
    case CauseKind::event: return "event:" + detail;
    case CauseKind::schedule: return "schedule:" + detail;
  }
  return "?";
}

RunState Run::state() const {
  if (run_error) return RunState::failed;
  bool any_failed = false, any_running = false, any_waiting = false,
       all_terminal = true;
  for (const auto& [id, st] : steps) {
    switch (st.state) {
      case StepState::failed: any_failed = true; break;
      case StepState::running: any_running = true; all_terminal = false; break;
      case StepState::awaiting_human: any_waiting = true; all_terminal = false; break;
      case StepState::pending: all_terminal = false; break;
      default: break;
    }
  }
  if (all_terminal) return any_failed ? RunState::failed : RunState::succeeded;
  if (any_running) return RunState::running;
  if (any_waiting) return RunState::awaiting_human;
  return RunState::pending;
}

bool Run::terminal() const {
  RunState s = state();
  return s == RunState::succeeded || s == RunState::failed;
}

static fs::path journal_path(const Repo& repo, const std::string& run_id) {
  return repo.runs_dir() / run_id / "journal.jsonl";
}

bool Run::exists(const Repo& repo, const std::string& run_id) {
  std::error_code ec;
  return fs::exists(journal_path(repo, run_id), ec);
}

Run Run::load(const Repo& repo, const std::string& run_id) {
  auto body = read_file_if_exists(journal_path(repo, run_id));
  if (!body) fail(Errc::not_found, "unknown run " + run_id);

  Run run;
  size_t start = 0;
  while (start < body->size()) {
    size_t end = body->find('\n', start);
    if (end == std::string::npos) end = body->size();
    if (end == start) { start = end + 1; continue; }
    ojson rec = ojson::parse(body->substr(start, end - start));
    start = end + 1;

    std::string type = rec.at("type").get<std::string>();
    if (type == "created") {
      run.run_id = rec.at("run_id").get<std::string>();
      run.workflow = rec.at("workflow").get<std::string>();
      run.def_hash = rec.at("def_hash").get<std::string>();
      std::string cause = rec.at("cause").get<std::string>();
      size_t colon = cause.find(':');
      std::string kind = cause.substr(0, colon);
      run.cause.detail = cause.substr(colon + 1);
      run.cause.kind = kind == "event"      ? CauseKind::event
                       : kind == "schedule" ? CauseKind::schedule
                                            : CauseKind::manual;
      run.chain_depth = rec.at("chain_depth").get<int>();
      run.created_at = rec.at("created_at").get<int64_t>();
      for (const auto& s : rec.at("steps"))
        run.steps[s.get<std::string>()] = StepStatus{};
    } else if (type == "pinned") {
      run.pinned[rec.at("step").get<std::string>()] =
          rec.at("commit").get<std::string>();
    } else if (type == "step") {
      auto& st = run.steps[rec.at("step").get<std::string>()];
      auto state = step_state_from_name(rec.at("state").get<std::string>());
      if (!state) fail(Errc::validation, "bad step state in journal " + run_id);
      st.state = *state;
      if (rec.contains("start_us")) st.start_us = rec.at("start_us").get<int64_t>();
      if (rec.contains("end_us")) st.end_us = rec.at("end_us").get<int64_t>();
      if (rec.contains("exit_code")) st.exit_code = rec.at("exit_code").get<int>();
      if (rec.contains("stderr_tail"))
        st.stderr_tail = rec.at("stderr_tail").get<std::string>();
      if (rec.contains("error")) st.error = rec.at("error").get<std::string>();
    } else if (type == "output") {
      run.output_commit = rec.at("commit").get<std::string>();
    } else if (type == "run_error") {
      run.run_error = rec.at("message").get<std::string>();
    }
  }
  if (run.run_id.empty())
    fail(Errc::corruption, "run journal missing created record: " + run_id);
  return run;
}

std::vector<std::string> list_run_ids(const Repo& repo) {
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::exists(repo.runs_dir(), ec)) return out;
  for (const auto& e : fs::directory_iterator(repo.runs_dir())) {
    std::string name = e.path().filename().string();
    if (looks_like_ulid(name) && fs::exists(e.path() / "journal.jsonl", ec))
      out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

static void append(Repo& repo, const std::string& run_id, const ojson& rec) {
  fs::path p = journal_path(repo, run_id);
  fs::create_directories(p.parent_path());
  append_line(p, rec.dump());
}

void journal_created(Repo& repo, const Run& run) {
  ojson rec;
  rec["type"] = "created";
  rec["run_id"] = run.run_id;
  rec["workflow"] = run.workflow;
  rec["def_hash"] = run.def_hash;
  rec["cause"] = run.cause.to_string();
  rec["chain_depth"] = run.chain_depth;
  rec["created_at"] = run.created_at;
  ojson steps = ojson::array();
  for (const auto& [id, _] : run.steps) steps.push_back(id);
  rec["steps"] = std::move(steps);
  append(repo, run.run_id, rec);
}

void journal_pinned(Repo& repo, const std::string& run_id,
                    const std::string& step, const std::string& commit) {
  ojson rec;
  rec["type"] = "pinned";
  rec["step"] = step;
  rec["commit"] = commit;
  append(repo, run_id, rec);
}

void journal_step(Repo& repo, const std::string& run_id, const std::string& step,
                  StepState state, const StepStatus& status) {
  ojson rec;
  rec["type"] = "step";
  rec["step"] = step;
  rec["state"] = step_state_name(state);
  if (status.start_us) rec["start_us"] = status.start_us;
  if (status.end_us) rec["end_us"] = status.end_us;
  if (state == StepState::failed || status.exit_code)
    rec["exit_code"] = status.exit_code;
  if (!status.stderr_tail.empty()) rec["stderr_tail"] = status.stderr_tail;
  if (!status.error.empty()) rec["error"] = status.error;
  rec["ts"] = now_utc_seconds();
  append(repo, run_id, rec);
}

void journal_output(Repo& repo, const std::string& run_id,
                    const std::string& commit) {
  ojson rec;
  rec["type"] = "output";
  rec["commit"] = commit;
  append(repo, run_id, rec);
}

void journal_run_error(Repo& repo, const std::string& run_id,
                       const std::string& message) {
  ojson rec;
  rec["type"] = "run_error";
  rec["message"] = message;
  append(repo, run_id, rec);
}

}  // namespace dsr
