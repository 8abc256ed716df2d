#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsr/cron.hpp"
#include "dsr/query.hpp"

namespace dsr {

class Repo;

enum class StepKind { program, human };

struct Step {
  std::string id;
  StepKind kind = StepKind::program;
  std::vector<std::string> needs;
  std::optional<QueryExpr> input;  // source steps only: checkout at run start
  std::vector<std::string> argv;   // program steps
  int cpu_slots = 1;               // program steps
  std::string instructions;        // human steps
  bool terminal = false;
};

enum class TriggerKind { manual, event, schedule };

struct Trigger {
  TriggerKind kind = TriggerKind::manual;
  std::optional<QueryExpr> event;    // matched against new commits
  std::optional<std::string> cron;   // validated at registration
};

struct OutputClause {
  std::string dataset;
  std::vector<std::string> tags;
  // Placeholders {workflow}, {run_id} and {cause} are substituted.
  std::string message_template = "workflow {workflow} run {run_id}";
};

struct WorkflowDef {
  std::string name;
  std::string owner;  // captured at registration; runs act as this principal
  std::vector<Step> steps;
  std::vector<Trigger> triggers;
  std::optional<OutputClause> output;

  const Step* find_step(const std::string& id) const;
  // Kahn order, ties broken by declaration order. Cycle errors name the
  // steps involved.
  std::vector<std::string> topo_order() const;
  // Step whose outputs get committed when an output clause is present:
  // the explicitly marked one, else the unique sink.
  std::string terminal_step() const;

  void validate() const;

  std::string canonical_json() const;
  std::string def_hash() const;

  static WorkflowDef from_json(const nlohmann::ordered_json& doc);
  static WorkflowDef parse(const std::string& text);
};

// Validates, checks write access on the output dataset, stores the def under
// its content hash and snapshots the event-trigger cursor baseline so only
// future commits fire. Re-registration with the same name creates a new
// version; old runs keep their def snapshot.
WorkflowDef register_workflow(Repo& repo, const std::string& principal,
                              const std::string& def_text);

std::optional<std::string> current_def_hash(const Repo& repo,
                                            const std::string& name);
WorkflowDef load_workflow(const Repo& repo, const std::string& name,
                          const std::string& def_hash);
WorkflowDef load_current_workflow(const Repo& repo, const std::string& name);
std::vector<std::string> list_workflows(const Repo& repo);

}  // namespace dsr
