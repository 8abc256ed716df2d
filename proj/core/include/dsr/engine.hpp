#pragma once

#include <optional>
#include <string>

#include "dsr/fs_util.hpp"
#include "dsr/run.hpp"
#include "dsr/workflow.hpp"

namespace dsr {

class Repo;

struct EngineOptions {
  int pool_slots = 0;  // 0 = hardware concurrency
  int64_t step_timeout_seconds = 3600;
  int chain_depth_limit = 10;
};

// Single-host worker pool. Slot counts above capacity are clamped so an
// oversized hint degrades to exclusive use instead of deadlocking.
class WorkerPool {
 public:
  explicit WorkerPool(int capacity);
  bool try_acquire(int slots);
  void release(int slots);
  int capacity() const { return capacity_; }

 private:
  std::mutex mu_;
  int capacity_;
  int in_use_ = 0;
};

class Engine {
 public:
  explicit Engine(Repo& repo, EngineOptions options = {});

  // Creates the run, pins every source-step query to one commit and
  // journals it. Resolution failures journal a run_error and rethrow.
  Run start_run(const std::string& workflow_name, const Cause& cause,
                int chain_depth = 0);

  // Drives the run until it is terminal or blocked on a human step.
  // Safe to call repeatedly from any process; the per-run lock serializes.
  Run resume(const std::string& run_id);

  Run approve_step(const std::string& principal, const std::string& run_id,
                   const std::string& step_id, bool approve,
                   const std::optional<fs::path>& attached_dir);

  const EngineOptions& options() const { return options_; }

  fs::path step_dir(const std::string& run_id, const std::string& step_id) const;

 private:
  Repo& repo_;
  EngineOptions options_;
  WorkerPool pool_;

  void pin_inputs(Run& run, const WorkflowDef& def);
  void prepare_inputs(const Run& run, const WorkflowDef& def, const Step& step);
  StepStatus execute_program(const Run& run, const Step& step);
  void finalize(Run& run, const WorkflowDef& def);
};

}  // namespace dsr
