#include "dsr/workflow.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "dsr/acl.hpp"
#include "dsr/error.hpp"
#include "dsr/repo.hpp"
#include "dsr/sha256.hpp"

namespace dsr {

using ojson = nlohmann::ordered_json;

const Step* WorkflowDef::find_step(const std::string& id) const {
  for (const auto& s : steps)
    if (s.id == id) return &s;
  return nullptr;
}

std::vector<std::string> WorkflowDef::topo_order() const {
  std::map<std::string, int> indegree;
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& s : steps) indegree[s.id] = int(s.needs.size());
  for (const auto& s : steps)
    for (const auto& n : s.needs) children[n].push_back(s.id);

  std::vector<std::string> order;
  std::deque<std::string> ready;
  for (const auto& s : steps)  // declaration order
    if (indegree[s.id] == 0) ready.push_back(s.id);
  while (!ready.empty()) {
    std::string cur = ready.front();
    ready.pop_front();
    order.push_back(cur);
    for (const auto& child : children[cur])
      if (--indegree[child] == 0) ready.push_back(child);
  }
  if (order.size() != steps.size()) {
    std::string cycle;
    for (const auto& s : steps)
      if (indegree[s.id] > 0) cycle += (cycle.empty() ? "" : ", ") + s.id;
    fail(Errc::validation, "workflow has a dependency cycle involving: " + cycle);
  }
  return order;
}

std::string WorkflowDef::terminal_step() const {
  for (const auto& s : steps)
    if (s.terminal) return s.id;
  // unique sink
  std::set<std::string> needed;
  for (const auto& s : steps)
    for (const auto& n : s.needs) needed.insert(n);
  std::vector<std::string> sinks;
  for (const auto& s : steps)
    if (!needed.count(s.id)) sinks.push_back(s.id);
  if (sinks.size() == 1) return sinks[0];
  fail(Errc::validation,
       "output clause needs exactly one terminal step; mark one with "
       "\"terminal\": true (" +
           std::to_string(sinks.size()) + " sinks)");
}

void WorkflowDef::validate() const {
  require_valid_name("workflow", name);
  require_valid_name("principal", owner);
  if (steps.empty()) fail(Errc::validation, "workflow has no steps");

  std::set<std::string> ids;
  for (const auto& s : steps) {
    require_valid_name("step", s.id);
    if (!ids.insert(s.id).second)
      fail(Errc::validation, "duplicate step id '" + s.id + "'");
  }
  int terminals = 0;
  for (const auto& s : steps) {
    for (const auto& n : s.needs) {
      if (!ids.count(n))
        fail(Errc::validation,
             "step '" + s.id + "' needs unknown step '" + n + "'");
      if (n == s.id) fail(Errc::validation, "step '" + s.id + "' needs itself");
    }
    if (s.kind == StepKind::program && s.argv.empty())
      fail(Errc::validation, "program step '" + s.id + "' has empty argv");
    if (s.kind == StepKind::human && !s.argv.empty())
      fail(Errc::validation, "human step '" + s.id + "' must not have argv");
    if (s.input && !s.needs.empty())
      fail(Errc::validation, "step '" + s.id +
                                 "' has both an input query and needs; input "
                                 "queries are for source steps only");
    if (s.input) s.input->validate();
    if (s.cpu_slots <= 0)
      fail(Errc::validation, "step '" + s.id + "' cpu_slots must be positive");
    if (s.terminal) ++terminals;
  }
  if (terminals > 1) fail(Errc::validation, "more than one step marked terminal");

  topo_order();  // throws on cycles

  for (const auto& t : triggers) {
    if (t.kind == TriggerKind::event) {
      if (!t.event) fail(Errc::validation, "event trigger needs an expr");
      t.event->validate();
    }
    if (t.kind == TriggerKind::schedule) {
      if (!t.cron) fail(Errc::validation, "schedule trigger needs a cron field");
      CronExpr::parse(*t.cron);
    }
  }

  if (output) {
    require_valid_name("dataset", output->dataset);
    for (const auto& t : output->tags) require_valid_name("tag", t);
    terminal_step();  // throws unless resolvable
  }
}

std::string WorkflowDef::canonical_json() const {
  ojson doc;
  doc["name"] = name;
  doc["owner"] = owner;
  ojson steps_json = ojson::array();
  for (const auto& s : steps) {
    ojson sj;
    sj["id"] = s.id;
    sj["kind"] = s.kind == StepKind::program ? "program" : "human";
    sj["needs"] = s.needs;
    if (s.input) sj["input"] = s.input->to_json();
    if (s.kind == StepKind::program) {
      sj["argv"] = s.argv;
      sj["cpu_slots"] = s.cpu_slots;
    } else {
      sj["instructions"] = s.instructions;
    }
    if (s.terminal) sj["terminal"] = true;
    steps_json.push_back(std::move(sj));
  }
  doc["steps"] = std::move(steps_json);
  ojson triggers_json = ojson::array();
  for (const auto& t : triggers) {
    ojson tj;
    switch (t.kind) {
      case TriggerKind::manual: tj["kind"] = "manual"; break;
      case TriggerKind::event:
        tj["kind"] = "event";
        tj["expr"] = t.event->to_json();
        break;
      case TriggerKind::schedule:
        tj["kind"] = "schedule";
        tj["cron"] = *t.cron;
        break;
    }
    triggers_json.push_back(std::move(tj));
  }
  doc["triggers"] = std::move(triggers_json);
  if (output) {
    ojson oj;
    oj["dataset"] = output->dataset;
    oj["tags"] = output->tags;
    oj["message"] = output->message_template;
    doc["output"] = std::move(oj);
  }
  return doc.dump();
}

std::string WorkflowDef::def_hash() const { return to_hex(sha256(canonical_json())); }

WorkflowDef WorkflowDef::from_json(const ojson& doc) {
  WorkflowDef def;
  def.name = doc.at("name").get<std::string>();
  if (doc.contains("owner")) def.owner = doc.at("owner").get<std::string>();
  for (const auto& sj : doc.at("steps")) {
    Step s;
    s.id = sj.at("id").get<std::string>();
    std::string kind = sj.value("kind", std::string("program"));
    if (kind == "program")
      s.kind = StepKind::program;
    else if (kind == "human")
      s.kind = StepKind::human;
    else
      fail(Errc::validation, "step '" + s.id + "': unknown kind '" + kind + "'");
    if (sj.contains("needs"))
      s.needs = sj.at("needs").get<std::vector<std::string>>();
    if (sj.contains("input")) s.input = QueryExpr::from_json(sj.at("input"));
    if (sj.contains("argv"))
      s.argv = sj.at("argv").get<std::vector<std::string>>();
    s.cpu_slots = sj.value("cpu_slots", 1);
    s.instructions = sj.value("instructions", std::string());
    s.terminal = sj.value("terminal", false);
    def.steps.push_back(std::move(s));
  }
  if (doc.contains("triggers")) {
    for (const auto& tj : doc.at("triggers")) {
      Trigger t;
      std::string kind = tj.at("kind").get<std::string>();
      if (kind == "manual") {
        t.kind = TriggerKind::manual;
      } else if (kind == "event") {
        t.kind = TriggerKind::event;
        t.event = QueryExpr::from_json(tj.at("expr"));
      } else if (kind == "schedule") {
        t.kind = TriggerKind::schedule;
        t.cron = tj.at("cron").get<std::string>();
      } else {
        fail(Errc::validation, "unknown trigger kind '" + kind + "'");
      }
      def.triggers.push_back(std::move(t));
    }
  }
  if (doc.contains("output")) {
    const auto& oj = doc.at("output");
    OutputClause out;
    out.dataset = oj.at("dataset").get<std::string>();
    if (oj.contains("tags"))
      out.tags = oj.at("tags").get<std::vector<std::string>>();
    if (oj.contains("message"))
      out.message_template = oj.at("message").get<std::string>();
    def.output = std::move(out);
  }
  return def;
}

WorkflowDef WorkflowDef::parse(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const std::exception& e) {
    fail(Errc::validation, std::string("bad workflow json: ") + e.what());
  }
  return from_json(doc);
}

static fs::path def_path(const Repo& repo, const std::string& name,
                         const std::string& hash) {
  return repo.workflows_dir() / name / (hash + ".json");
}

static fs::path current_path(const Repo& repo, const std::string& name) {
  return repo.workflows_dir() / name / "current";
}

WorkflowDef register_workflow(Repo& repo, const std::string& principal,
                              const std::string& def_text) {
  WorkflowDef def = WorkflowDef::parse(def_text);
  def.owner = principal;
  def.validate();
  if (def.output)
    require_access(repo, principal, Action::write, def.output->dataset);

  FileLock lock = repo.lock_repo();
  std::string hash = def.def_hash();
  atomic_write_file(def_path(repo, def.name, hash), def.canonical_json(),
                    repo.staging_dir());
  atomic_write_file(current_path(repo, def.name), hash + "\n",
                    repo.staging_dir());

  // Baseline the event cursor the first time this workflow gains an event
  // trigger: commits that already exist never fire. The cursor is durable
  // across re-registrations, so pending commits are not swallowed by a
  // definition update.
  bool has_event = std::any_of(def.triggers.begin(), def.triggers.end(),
                               [](const Trigger& t) {
                                 return t.kind == TriggerKind::event;
                               });
  fs::path cursor = repo.triggers_dir() / "cursors" / (def.name + ".jsonl");
  if (has_event && !fs::exists(cursor)) {
    std::string lines;
    for (const auto& id : repo.list_commit_ids()) {
      ojson rec;
      rec["commit"] = id;
      rec["run"] = nullptr;
      lines += rec.dump();
      lines += '\n';
    }
    atomic_write_file(cursor, lines, repo.staging_dir());
  }
  return def;
}

std::optional<std::string> current_def_hash(const Repo& repo,
                                            const std::string& name) {
  auto body = read_file_if_exists(current_path(repo, name));
  if (!body) return std::nullopt;
  while (!body->empty() && body->back() == '\n') body->pop_back();
  return body;
}

WorkflowDef load_workflow(const Repo& repo, const std::string& name,
                          const std::string& def_hash) {
  auto body = read_file_if_exists(def_path(repo, name, def_hash));
  if (!body)
    fail(Errc::not_found, "unknown workflow '" + name + "' at " + def_hash);
  return WorkflowDef::parse(*body);
}

WorkflowDef load_current_workflow(const Repo& repo, const std::string& name) {
  auto hash = current_def_hash(repo, name);
  if (!hash) fail(Errc::not_found, "unknown workflow '" + name + "'");
  return load_workflow(repo, name, *hash);
}

std::vector<std::string> list_workflows(const Repo& repo) {
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::exists(repo.workflows_dir(), ec)) return out;
  for (const auto& e : fs::directory_iterator(repo.workflows_dir()))
    if (e.is_directory()) out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dsr
