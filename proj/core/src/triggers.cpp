#include "dsr/triggers.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "dsr/cron.hpp"
#include "dsr/error.hpp"
#include "dsr/lineage.hpp"
#include "dsr/repo.hpp"

namespace dsr {

using ojson = nlohmann::ordered_json;

TriggerService::TriggerService(Repo& repo, Engine& engine)
    : repo_(repo), engine_(engine) {}

static fs::path cursor_path(const Repo& repo, const std::string& workflow) {
  return repo.triggers_dir() / "cursors" / (workflow + ".jsonl");
}

static std::set<std::string> load_cursor(const Repo& repo,
                                         const std::string& workflow) {
  std::set<std::string> out;
  auto body = read_file_if_exists(cursor_path(repo, workflow));
  if (!body) return out;
  size_t start = 0;
  while (start < body->size()) {
    size_t end = body->find('\n', start);
    if (end == std::string::npos) end = body->size();
    if (end > start) {
      ojson rec = ojson::parse(body->substr(start, end - start));
      out.insert(rec.at("commit").get<std::string>());
    }
    start = end + 1;
  }
  return out;
}

static void append_cursor(Repo& repo, const std::string& workflow,
                          const std::string& commit,
                          const std::string& run_id) {
  ojson rec;
  rec["commit"] = commit;
  if (run_id.empty())
    rec["run"] = nullptr;
  else
    rec["run"] = run_id;
  append_line(cursor_path(repo, workflow), rec.dump());
}

int TriggerService::chain_depth_for(const std::string& commit_id) {
  auto rec = provenance_of_output(repo_, commit_id);
  if (!rec) return 0;
  if (!Run::exists(repo_, rec->run_id)) return 0;
  return Run::load(repo_, rec->run_id).chain_depth + 1;
}

TickReport TriggerService::evaluate_events() {
  TickReport report;

  std::vector<Commit> commits = repo_.list_commits();
  std::sort(commits.begin(), commits.end(), [](const Commit& a, const Commit& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.commit_id < b.commit_id;
  });
  auto revoked = revoked_commits(repo_);

  for (const auto& name : list_workflows(repo_)) {
    WorkflowDef def;
    try {
      def = load_current_workflow(repo_, name);
    } catch (const Error&) {
      continue;  // registration in progress
    }
    std::vector<const QueryExpr*> exprs;
    for (const auto& t : def.triggers)
      if (t.kind == TriggerKind::event && t.event) exprs.push_back(&*t.event);
    if (exprs.empty()) continue;

    std::set<std::string> processed = load_cursor(repo_, name);
    std::optional<std::set<std::string>> fired_causes;  // lazy crash-window dedupe

    for (const auto& c : commits) {
      if (processed.count(c.commit_id)) continue;

      bool matched = false;
      if (repo_.head(c.dataset) && !revoked.count(c.commit_id)) {
        auto h = repo_.head(c.dataset);
        bool is_head = h && *h == c.commit_id;
        for (const auto* e : exprs)
          if (e->matches(c, repo_.tags_of(c.commit_id), is_head)) {
            matched = true;
            break;
          }
      }
      if (!matched) {
        append_cursor(repo_, name, c.commit_id, "");
        continue;
      }

      // The cursor append and the run journal are separate writes; if the
      // previous daemon died between them, the existing run is the truth.
      if (!fired_causes) {
        fired_causes.emplace();
        for (const auto& rid : list_run_ids(repo_)) {
          Run r = Run::load(repo_, rid);
          if (r.workflow == name && r.cause.kind == CauseKind::event)
            fired_causes->insert(r.cause.detail);
        }
      }
      if (fired_causes->count(c.commit_id)) {
        append_cursor(repo_, name, c.commit_id, "");
        continue;
      }

      int depth = chain_depth_for(c.commit_id);
      if (depth > engine_.options().chain_depth_limit) {
        report.notes.push_back("workflow '" + name + "' not triggered by " +
                               c.commit_id.substr(0, 12) + ": chain depth " +
                               std::to_string(depth) + " exceeds limit");
        append_cursor(repo_, name, c.commit_id, "");
        continue;
      }

      std::string run_id;
      try {
        Run run = engine_.start_run(name, Cause{CauseKind::event, c.commit_id},
                                    depth);
        run_id = run.run_id;
        report.started_runs.push_back(run_id);
      } catch (const Error& e) {
        report.notes.push_back("workflow '" + name + "' run failed at start: " +
                               e.what());
      }
      append_cursor(repo_, name, c.commit_id, run_id);
    }
  }
  return report;
}

static fs::path schedule_path(const Repo& repo, const std::string& workflow) {
  return repo.triggers_dir() / "schedule" / (workflow + ".json");
}

TickReport TriggerService::schedule_tick(int64_t now) {
  TickReport report;
  int64_t minute = now / 60;

  for (const auto& name : list_workflows(repo_)) {
    WorkflowDef def;
    try {
      def = load_current_workflow(repo_, name);
    } catch (const Error&) {
      continue;
    }
    ojson state = ojson::object();
    if (auto body = read_file_if_exists(schedule_path(repo_, name)))
      state = ojson::parse(*body);

    bool dirty = false;
    for (const auto& t : def.triggers) {
      if (t.kind != TriggerKind::schedule || !t.cron) continue;
      CronExpr cron = CronExpr::parse(*t.cron);
      if (!cron.matches_minute(now)) continue;
      int64_t last = state.contains(*t.cron) ? state.at(*t.cron).get<int64_t>()
                                             : -1;
      if (last == minute) continue;
      state[*t.cron] = minute;
      dirty = true;
      try {
        Run run = engine_.start_run(
            name, Cause{CauseKind::schedule, format_utc_minute(now)}, 0);
        report.started_runs.push_back(run.run_id);
      } catch (const Error& e) {
        report.notes.push_back("workflow '" + name +
                               "' scheduled run failed at start: " + e.what());
      }
    }
    if (dirty)
      atomic_write_file(schedule_path(repo_, name), state.dump(),
                        repo_.staging_dir());
  }
  return report;
}

int daemon_loop(Repo& repo, Engine& engine, const DaemonOptions& options) {
  TriggerService triggers(repo, engine);
  int64_t started_total = 0;
  int64_t deadline = options.max_seconds > 0
                         ? now_utc_seconds() + options.max_seconds
                         : 0;

  while (true) {
    bool progressed = false;

    TickReport events = triggers.evaluate_events();
    TickReport scheduled = triggers.schedule_tick(now_utc_seconds());
    for (const auto* rep : {&events, &scheduled}) {
      for (const auto& id : rep->started_runs) {
        fprintf(stderr, "daemon: started run %s\n", id.c_str());
        ++started_total;
        progressed = true;
      }
      for (const auto& note : rep->notes)
        fprintf(stderr, "daemon: %s\n", note.c_str());
    }

    for (const auto& run_id : list_run_ids(repo)) {
      Run before = Run::load(repo, run_id);
      if (before.terminal()) continue;
      try {
        Run after = engine.resume(run_id);
        if (after.state() != before.state()) progressed = true;
        if (after.terminal())
          fprintf(stderr, "daemon: run %s %s\n", run_id.c_str(),
                  run_state_name(after.state()));
      } catch (const Error& e) {
        // logged, not treated as progress: a run that errors on every
        // resume must not keep a --once pass spinning
        fprintf(stderr, "daemon: run %s error: %s\n", run_id.c_str(), e.what());
      }
    }

    if (options.once) {
      if (!progressed) break;
      continue;  // drain cascading triggers without sleeping
    }
    if (deadline && now_utc_seconds() >= deadline) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(options.interval_ms));
  }
  return int(started_total);
}

}  // namespace dsr
