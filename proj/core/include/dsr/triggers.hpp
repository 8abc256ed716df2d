#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsr/engine.hpp"

namespace dsr {

struct TickReport {
  std::vector<std::string> started_runs;
  std::vector<std::string> notes;  // warnings, chain-limit stops
};

// Durable trigger bookkeeping. Event triggers keep a per-workflow cursor of
// processed commit ids (exactly-once across restarts); schedule triggers
// keep the last fired minute per cron expression.
class TriggerService {
 public:
  TriggerService(Repo& repo, Engine& engine);

  // Matches every not-yet-processed commit against every workflow's event
  // triggers, oldest commit first. One run per (workflow, commit).
  TickReport evaluate_events();

  // Fires schedule triggers whose cron matches the current UTC minute and
  // which have not fired for that minute yet.
  TickReport schedule_tick(int64_t now_epoch_seconds);

 private:
  Repo& repo_;
  Engine& engine_;

  int chain_depth_for(const std::string& commit_id);
};

struct DaemonOptions {
  int interval_ms = 500;
  bool once = false;         // process until quiescent, then exit
  int64_t max_seconds = 0;   // 0 = run forever
};

// Trigger evaluation plus resumption of every non-terminal run.
// Returns the number of runs started.
int daemon_loop(Repo& repo, Engine& engine, const DaemonOptions& options);

}  // namespace dsr
