#include <doctest.h>

#include "dsr/dataset.hpp"
#include "dsr/engine.hpp"
#include "dsr/lineage.hpp"
#include "dsr/query.hpp"
#include "dsr/repo.hpp"
#include "dsr/triggers.hpp"
#include "support/helpers.hpp"

using namespace dsr;
using testing::RepoFixture;
using testing::write_file;

namespace {

Commit commit_tree(RepoFixture& f, const std::string& dataset,
                   const std::string& content) {
  testing::TempDir work;
  write_file(work.path() / "f.txt", content);
  CheckinOptions options;
  options.message = "c";
  options.allow_empty = true;
  return checkin(f.repo, "root", dataset, work.path(), options);
}

const char* kEventWorkflow = R"({
  "name": "on-raw",
  "steps": [{"id": "copy", "kind": "program",
             "input": {"dataset": "raw", "head": true},
             "argv": ["sh", "-c", "cp -r $DSR_INPUTS/. $DSR_OUTPUTS/"]}],
  "triggers": [{"kind": "event", "expr": {"dataset": "raw"}}],
  "output": {"dataset": "derived"}
})";

}  // namespace

TEST_CASE("event trigger fires exactly once per commit") {
  RepoFixture f;
  commit_tree(f, "raw", "pre-existing");  // before registration: must not fire
  register_workflow(f.repo, "root", kEventWorkflow);

  Engine engine(f.repo, EngineOptions{2});
  TriggerService triggers(f.repo, engine);

  CHECK(triggers.evaluate_events().started_runs.empty());  // baseline holds

  Commit c = commit_tree(f, "raw", "new data");
  TickReport first = triggers.evaluate_events();
  REQUIRE(first.started_runs.size() == 1);
  Run run = Run::load(f.repo, first.started_runs[0]);
  CHECK(run.cause.kind == CauseKind::event);
  CHECK(run.cause.detail == c.commit_id);

  // the same commit never fires again, in this or a fresh service
  CHECK(triggers.evaluate_events().started_runs.empty());
  TriggerService restarted(f.repo, engine);
  CHECK(restarted.evaluate_events().started_runs.empty());
}

TEST_CASE("non-matching commits do not fire") {
  RepoFixture f;
  register_workflow(f.repo, "root", kEventWorkflow);
  Engine engine(f.repo, EngineOptions{2});
  TriggerService triggers(f.repo, engine);
  commit_tree(f, "unrelated", "data");
  CHECK(triggers.evaluate_events().started_runs.empty());
}

TEST_CASE("crash window between run start and cursor append stays exactly-once") {
  RepoFixture f;
  register_workflow(f.repo, "root", kEventWorkflow);
  Engine engine(f.repo, EngineOptions{2});
  Commit c = commit_tree(f, "raw", "data");

  // simulate the torn state: the run exists but the cursor line is missing
  engine.start_run("on-raw", Cause{CauseKind::event, c.commit_id});
  TriggerService triggers(f.repo, engine);
  TickReport report = triggers.evaluate_events();
  CHECK(report.started_runs.empty());
  CHECK(list_run_ids(f.repo).size() == 1);
}

TEST_CASE("schedule fires once per matching minute") {
  RepoFixture f;
  register_workflow(f.repo, "root", R"({
    "name": "cronjob",
    "steps": [{"id": "a", "kind": "program", "argv": ["true"]}],
    "triggers": [{"kind": "schedule", "cron": "*/5 * * * *"}]
  })");
  Engine engine(f.repo, EngineOptions{1});
  TriggerService triggers(f.repo, engine);

  int64_t t0 = parse_utc_time("2026-08-11T12:05:30");
  TickReport fire = triggers.schedule_tick(t0);
  REQUIRE(fire.started_runs.size() == 1);
  Run run = Run::load(f.repo, fire.started_runs[0]);
  CHECK(run.cause.kind == CauseKind::schedule);
  CHECK(run.cause.detail == "2026-08-11T12:05");

  // same minute, later second: no refire; durable across a new service
  CHECK(triggers.schedule_tick(t0 + 20).started_runs.empty());
  TriggerService restarted(f.repo, engine);
  CHECK(restarted.schedule_tick(t0 + 25).started_runs.empty());

  // non-matching minute
  CHECK(triggers.schedule_tick(t0 + 60).started_runs.empty());
  // next matching minute fires
  CHECK(triggers.schedule_tick(t0 + 300).started_runs.size() == 1);
}

TEST_CASE("workflow outputs chain downstream workflows up to the depth limit") {
  RepoFixture f;
  // ping commits to "derived"; pong listens on "derived" and commits back to
  // "raw" which ping listens on: an infinite loop without the depth limit
  register_workflow(f.repo, "root", kEventWorkflow);  // raw -> derived
  register_workflow(f.repo, "root", R"({
    "name": "bounce",
    "steps": [{"id": "copy", "kind": "program",
               "input": {"dataset": "derived", "head": true},
               "argv": ["sh", "-c", "cp -r $DSR_INPUTS/. $DSR_OUTPUTS/; date +%s%N > $DSR_OUTPUTS/stamp"]}],
    "triggers": [{"kind": "event", "expr": {"dataset": "derived"}}],
    "output": {"dataset": "raw"}
  })");

  EngineOptions options;
  options.pool_slots = 2;
  options.chain_depth_limit = 4;
  Engine engine(f.repo, options);
  commit_tree(f, "raw", "seed");

  DaemonOptions daemon_options;
  daemon_options.once = true;
  daemon_loop(f.repo, engine, daemon_options);

  // depth: run at depth 0..4 allowed; the commit produced at depth 4 would
  // start depth 5 and is stopped
  int max_depth = 0;
  for (const auto& id : list_run_ids(f.repo)) {
    Run r = Run::load(f.repo, id);
    max_depth = std::max(max_depth, r.chain_depth);
  }
  CHECK(max_depth == options.chain_depth_limit);
  CHECK(list_run_ids(f.repo).size() == size_t(options.chain_depth_limit) + 1);
}

TEST_CASE("daemon --once drives an event-triggered run to completion") {
  RepoFixture f;
  register_workflow(f.repo, "root", kEventWorkflow);
  Engine engine(f.repo, EngineOptions{2});
  Commit c = commit_tree(f, "raw", "payload");

  DaemonOptions once;
  once.once = true;
  int started = daemon_loop(f.repo, engine, once);
  CHECK(started == 1);

  auto ids = list_run_ids(f.repo);
  REQUIRE(ids.size() == 1);
  Run run = Run::load(f.repo, ids[0]);
  CHECK(run.state() == RunState::succeeded);
  REQUIRE(run.output_commit);
  CHECK(f.repo.load_commit(*run.output_commit).manifest_id ==
        f.repo.load_commit(c.commit_id).manifest_id);
}
