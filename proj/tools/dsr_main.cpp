// dsr: dataset repository CLI. One subcommand per platform operation;
// exit 0 on success, 1 on domain errors, 2 on usage errors. Errors print a
// single line `error: <CODE>: <message>` on stderr.

#include <time.h>

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dsr/acl.hpp"
#include "dsr/content_store.hpp"
#include "dsr/dataset.hpp"
#include "dsr/engine.hpp"
#include "dsr/error.hpp"
#include "dsr/lineage.hpp"
#include "dsr/repo.hpp"
#include "dsr/triggers.hpp"
#include "dsr/workflow.hpp"

using namespace dsr;
using ojson = nlohmann::ordered_json;

namespace {

struct Ctx {
  std::string principal;
  bool json = false;
};

std::string short_id(const std::string& id) { return id.substr(0, 12); }

std::string iso_utc(int64_t epoch) {
  time_t t = time_t(epoch);
  struct tm tm;
  gmtime_r(&t, &tm);
  char buf[32];
  strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const std::string& require_principal(const Ctx& ctx) {
  if (ctx.principal.empty())
    fail(Errc::usage, "principal required (use --principal or DSR_PRINCIPAL)");
  return ctx.principal;
}

Repo open_repo() { return Repo::open(fs::current_path()); }

std::vector<std::string> split_expr(const std::vector<std::string>& raw) {
  std::vector<std::string> tokens;
  for (const auto& piece : raw) {
    std::istringstream in(piece);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
  }
  return tokens;
}

ojson commit_json(Repo& repo, const Commit& c) {
  ojson doc;
  doc["commit"] = c.commit_id;
  doc["dataset"] = c.dataset;
  doc["version"] = repo.version_of(c);
  doc["manifest"] = c.manifest_id;
  doc["parents"] = c.parents;
  doc["author"] = c.author;
  doc["timestamp"] = c.timestamp;
  doc["message"] = c.message;
  ojson attrs = ojson::object();
  for (const auto& [k, v] : c.attributes) attrs[k] = v;
  doc["attributes"] = std::move(attrs);
  doc["tags"] = repo.tags_of(c.commit_id);
  return doc;
}

void print_commit_line(Repo& repo, const Commit& c) {
  std::string tags;
  for (const auto& t : repo.tags_of(c.commit_id))
    tags += (tags.empty() ? " [" : ",") + t;
  if (!tags.empty()) tags += "]";
  printf("%s %s v%d %s %s %s%s\n", short_id(c.commit_id).c_str(),
         c.dataset.c_str(), repo.version_of(c), iso_utc(c.timestamp).c_str(),
         c.author.c_str(), c.message.c_str(), tags.c_str());
}

ojson run_json(const Run& run) {
  ojson doc;
  doc["run"] = run.run_id;
  doc["workflow"] = run.workflow;
  doc["def_hash"] = run.def_hash;
  doc["cause"] = run.cause.to_string();
  doc["state"] = run_state_name(run.state());
  ojson steps = ojson::array();
  for (const auto& [id, st] : run.steps) {
    ojson sj;
    sj["id"] = id;
    sj["state"] = step_state_name(st.state);
    if (st.state == StepState::failed) {
      sj["exit_code"] = st.exit_code;
      if (!st.error.empty()) sj["error"] = st.error;
    }
    steps.push_back(std::move(sj));
  }
  doc["steps"] = std::move(steps);
  if (run.output_commit) doc["output"] = *run.output_commit;
  if (run.run_error) doc["error"] = *run.run_error;
  return doc;
}

void print_run_report(const Ctx& ctx, const Run& run) {
  if (ctx.json) {
    printf("%s\n", run_json(run).dump().c_str());
    return;
  }
  printf("run %s\n", run.run_id.c_str());
  printf("workflow: %s (%s)\n", run.workflow.c_str(),
         short_id(run.def_hash).c_str());
  printf("cause: %s\n", run.cause.to_string().c_str());
  printf("state: %s\n", run_state_name(run.state()));
  for (const auto& [step, commit] : run.pinned)
    printf("pinned: %s -> %s\n", step.c_str(), short_id(commit).c_str());
  for (const auto& [id, st] : run.steps) {
    printf("  %-20s %s", id.c_str(), step_state_name(st.state));
    if (st.state == StepState::failed && !st.error.empty())
      printf(" (%s)", st.error.c_str());
    printf("\n");
  }
  if (run.output_commit)
    printf("output: %s\n", short_id(*run.output_commit).c_str());
  if (run.run_error) printf("error: %s\n", run.run_error->c_str());
}

// Indented tree over parent + provenance edges, each node printed once at
// its shallowest depth. Derivation edges carry the producing workflow.
void print_lineage_tree(Repo& repo, const Ctx& ctx, const std::string& root,
                        bool down) {
  auto provenance = load_provenance(repo);
  std::map<std::string, const ProvenanceRecord*> by_output;
  for (const auto& rec : provenance) by_output[rec.output_commit] = &rec;

  auto neighbors = [&](const std::string& id) {
    std::vector<std::pair<std::string, std::string>> out;  // (commit, via)
    if (down) {
      for (const auto& c : repo.list_commits())
        for (const auto& p : c.parents)
          if (p == id) {
            auto it = by_output.find(c.commit_id);
            bool derived = false;
            if (it != by_output.end())
              for (const auto& in : it->second->input_commits)
                if (in == id) derived = true;
            out.emplace_back(c.commit_id,
                             derived ? "workflow " + it->second->workflow : "");
          }
      for (const auto& rec : provenance)
        for (const auto& in : rec.input_commits)
          if (in == id) {
            bool seen = false;
            for (const auto& [cid, via] : out) seen |= cid == rec.output_commit;
            if (!seen)
              out.emplace_back(rec.output_commit, "workflow " + rec.workflow);
          }
    } else {
      Commit c = repo.load_commit(id);
      auto it = by_output.find(id);
      std::set<std::string> inputs;
      if (it != by_output.end())
        inputs.insert(it->second->input_commits.begin(),
                      it->second->input_commits.end());
      for (const auto& p : c.parents)
        out.emplace_back(p, inputs.count(p) && it != by_output.end()
                                ? "workflow " + it->second->workflow
                                : "");
      for (const auto& in : inputs) {
        bool seen = false;
        for (const auto& [cid, via] : out) seen |= cid == in;
        if (!seen && it != by_output.end())
          out.emplace_back(in, "workflow " + it->second->workflow);
      }
    }
    return out;
  };

  std::set<std::string> visited{root};
  ojson json_nodes = ojson::array();

  std::function<void(const std::string&, int, const std::string&)> emit =
      [&](const std::string& id, int depth, const std::string& via) {
        Commit c = repo.load_commit(id);
        if (ctx.json) {
          ojson node;
          node["commit"] = id;
          node["dataset"] = c.dataset;
          node["depth"] = depth;
          if (!via.empty()) node["via"] = via;
          json_nodes.push_back(std::move(node));
        } else {
          std::string pad(size_t(depth) * 2, ' ');
          std::string suffix = via.empty() ? "" : " (via " + via + ")";
          printf("%s%s %s v%d%s\n", pad.c_str(), short_id(id).c_str(),
                 c.dataset.c_str(), repo.version_of(c), suffix.c_str());
        }
        for (const auto& [next, next_via] : neighbors(id))
          if (visited.insert(next).second) emit(next, depth + 1, next_via);
      };
  emit(root, 0, "");

  if (ctx.json) {
    ojson doc;
    doc["commit"] = root;
    doc["direction"] = down ? "down" : "up";
    doc["nodes"] = std::move(json_nodes);
    printf("%s\n", doc.dump().c_str());
  }
}

int dispatch(int argc, char** argv) {
  CLI::App app{"dsr: dataset version control and workflow platform"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Ctx ctx;
  if (const char* env = std::getenv("DSR_PRINCIPAL")) ctx.principal = env;
  app.add_option("--principal", ctx.principal,
                 "acting principal (default: DSR_PRINCIPAL env var)");
  app.add_flag("--json", ctx.json, "machine-readable line-delimited JSON");

  // --- init ---
  auto* init = app.add_subcommand("init", "initialize a repository here");
  size_t chunk_min = ChunkParams{}.min_size, chunk_avg = ChunkParams{}.avg_size,
         chunk_max = ChunkParams{}.max_size;
  init->add_option("--chunk-min", chunk_min, "minimum chunk size (bytes)");
  init->add_option("--chunk-avg", chunk_avg, "target chunk size (power of two)");
  init->add_option("--chunk-max", chunk_max, "maximum chunk size (bytes)");
  init->callback([&] {
    const std::string& principal = require_principal(ctx);
    ChunkParams params{chunk_min, chunk_avg, chunk_max};
    Repo::init(fs::current_path(), principal, params);
    if (ctx.json) {
      ojson doc;
      doc["initialized"] = true;
      doc["admin"] = ctx.principal;
      printf("%s\n", doc.dump().c_str());
    } else {
      printf("initialized repository in .dsr (admin: %s)\n",
             ctx.principal.c_str());
    }
  });

  // --- checkin ---
  auto* checkin_cmd = app.add_subcommand("checkin", "store a directory as a new version");
  std::string ci_dir, ci_dataset, ci_message, ci_parent;
  std::vector<std::string> ci_tags, ci_attrs;
  bool ci_allow_empty = false;
  checkin_cmd->add_option("dir", ci_dir, "worktree directory")->required();
  checkin_cmd->add_option("-d,--dataset", ci_dataset, "dataset name")->required();
  checkin_cmd->add_option("-m,--message", ci_message, "commit message")->required();
  checkin_cmd->add_option("--tag", ci_tags, "tag to apply (repeatable)");
  checkin_cmd->add_option("--attr", ci_attrs, "k=v attribute (repeatable)");
  checkin_cmd->add_option("--parent", ci_parent, "parent commit override");
  checkin_cmd->add_flag("--allow-empty", ci_allow_empty,
                        "allow a tree identical to the parent");
  checkin_cmd->callback([&] {
    const std::string& principal = require_principal(ctx);
    Repo repo = open_repo();
    CheckinOptions options;
    options.message = ci_message;
    options.tags = ci_tags;
    options.allow_empty = ci_allow_empty;
    if (!ci_parent.empty()) options.parent_override = ci_parent;
    for (const auto& kv : ci_attrs) {
      size_t eq = kv.find('=');
      if (eq == std::string::npos)
        fail(Errc::usage, "--attr wants k=v, got '" + kv + "'");
      options.attributes[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    Commit c = checkin(repo, principal, ci_dataset, ci_dir, options);
    if (ctx.json)
      printf("%s\n", commit_json(repo, c).dump().c_str());
    else
      printf("committed %s to %s (v%d)\n", short_id(c.commit_id).c_str(),
             c.dataset.c_str(), repo.version_of(c));
  });

  // --- checkout ---
  auto* checkout_cmd = app.add_subcommand("checkout", "materialize a version");
  std::string co_commit, co_dataset, co_query, co_dest;
  bool co_multi = false;
  checkout_cmd->add_option("dest", co_dest, "destination directory")->required();
  checkout_cmd->add_option("--commit", co_commit, "commit id (or prefix)");
  checkout_cmd->add_option("--dataset", co_dataset, "dataset head");
  checkout_cmd->add_option("--query", co_query,
                           "space-joined key=value filters");
  checkout_cmd->add_flag("--multi", co_multi, "allow multiple matches");
  checkout_cmd->callback([&] {
    int selectors = int(!co_commit.empty()) + int(!co_dataset.empty()) +
                    int(!co_query.empty());
    if (selectors != 1)
      fail(Errc::usage, "checkout wants exactly one of --commit, --dataset, --query");
    Repo repo = open_repo();
    Selector sel;
    if (!co_commit.empty())
      sel = SelectorCommit{co_commit};
    else if (!co_dataset.empty())
      sel = SelectorHead{co_dataset};
    else
      sel = QueryExpr::parse_tokens(split_expr({co_query}));
    CheckoutResult result =
        checkout(repo, ctx.principal, sel, co_dest, CheckoutOptions{co_multi});
    for (size_t i = 0; i < result.commits.size(); ++i) {
      const Commit& c = result.commits[i];
      if (ctx.json) {
        ojson doc = commit_json(repo, c);
        doc["dest"] = result.dirs[i].string();
        printf("%s\n", doc.dump().c_str());
      } else {
        printf("checked out %s@%s -> %s\n", c.dataset.c_str(),
               short_id(c.commit_id).c_str(), result.dirs[i].string().c_str());
      }
    }
  });

  // --- log ---
  auto* log_cmd = app.add_subcommand("log", "dataset history, newest first");
  std::string log_dataset;
  log_cmd->add_option("-d,--dataset", log_dataset, "dataset name")->required();
  log_cmd->callback([&] {
    Repo repo = open_repo();
    for (const auto& c : log(repo, ctx.principal, log_dataset)) {
      if (ctx.json)
        printf("%s\n", commit_json(repo, c).dump().c_str());
      else
        print_commit_line(repo, c);
    }
  });

  // --- diff ---
  auto* diff_cmd = app.add_subcommand("diff", "paths changed between two commits");
  std::string diff_a, diff_b;
  diff_cmd->add_option("a", diff_a, "base commit")->required();
  diff_cmd->add_option("b", diff_b, "other commit")->required();
  diff_cmd->callback([&] {
    Repo repo = open_repo();
    DiffReport report = diff(repo, ctx.principal, diff_a, diff_b);
    if (ctx.json) {
      ojson doc;
      doc["added"] = report.added;
      doc["deleted"] = report.deleted;
      doc["modified"] = report.modified;
      doc["unchanged"] = report.unchanged_count;
      printf("%s\n", doc.dump().c_str());
      return;
    }
    for (const auto& p : report.added) printf("A %s\n", p.c_str());
    for (const auto& p : report.deleted) printf("D %s\n", p.c_str());
    for (const auto& p : report.modified) printf("M %s\n", p.c_str());
    printf("unchanged: %zu\n", report.unchanged_count);
  });

  // --- tag ---
  auto* tag_cmd = app.add_subcommand("tag", "name a commit");
  std::string tag_name, tag_target_arg;
  tag_cmd->add_option("name", tag_name, "tag name")->required();
  tag_cmd->add_option("commit", tag_target_arg, "commit id (or prefix)")->required();
  tag_cmd->callback([&] {
    const std::string& principal = require_principal(ctx);
    Repo repo = open_repo();
    std::string id = repo.resolve_commit(tag_target_arg);
    tag_commit(repo, principal, tag_name, id);
    if (ctx.json) {
      ojson doc;
      doc["tag"] = tag_name;
      doc["commit"] = id;
      printf("%s\n", doc.dump().c_str());
    } else {
      printf("tagged %s -> %s\n", tag_name.c_str(), short_id(id).c_str());
    }
  });

  // --- query ---
  auto* query_cmd = app.add_subcommand("query", "find commits by filters");
  std::vector<std::string> q_tokens;
  bool q_include_revoked = false;
  query_cmd->add_option("expr", q_tokens, "key=value filters");
  query_cmd->add_flag("--include-revoked", q_include_revoked,
                      "include revoked commits");
  query_cmd->callback([&] {
    Repo repo = open_repo();
    QueryExpr expr = QueryExpr::parse_tokens(split_expr(q_tokens));
    for (const auto& c :
         query(repo, ctx.principal, expr, QueryOptions{q_include_revoked})) {
      if (ctx.json)
        printf("%s\n", commit_json(repo, c).dump().c_str());
      else
        print_commit_line(repo, c);
    }
  });

  // --- delete-dataset ---
  auto* del_cmd = app.add_subcommand("delete-dataset", "drop a dataset's refs");
  std::string del_name;
  del_cmd->add_option("name", del_name, "dataset name")->required();
  del_cmd->callback([&] {
    const std::string& principal = require_principal(ctx);
    Repo repo = open_repo();
    auto head = repo.head(del_name);
    delete_dataset(repo, principal, del_name);
    if (ctx.json) {
      ojson doc;
      doc["deleted"] = del_name;
      doc["head_was"] = head ? *head : "";
      printf("%s\n", doc.dump().c_str());
    } else {
      printf("deleted dataset %s (head was %s)\n", del_name.c_str(),
             head ? short_id(*head).c_str() : "<none>");
    }
  });

  // --- grant / revoke-grant ---
  auto* grant_cmd = app.add_subcommand("grant", "give a principal a role");
  std::string g_principal, g_dataset, g_role;
  grant_cmd->add_option("principal", g_principal)->required();
  grant_cmd->add_option("dataset", g_dataset, "dataset name or *")->required();
  grant_cmd->add_option("role", g_role, "reader|writer|admin")->required();
  grant_cmd->callback([&] {
    const std::string& principal = require_principal(ctx);
    auto role = role_from_name(g_role);
    if (!role) fail(Errc::usage, "role must be reader, writer or admin");
    Repo repo = open_repo();
    grant(repo, principal, g_principal, g_dataset, *role);
    if (ctx.json) {
      ojson doc;
      doc["principal"] = g_principal;
      doc["dataset"] = g_dataset;
      doc["role"] = g_role;
      printf("%s\n", doc.dump().c_str());
    } else {
      printf("granted %s on %s to %s\n", g_role.c_str(), g_dataset.c_str(),
             g_principal.c_str());
    }
  });

  auto* rg_cmd = app.add_subcommand("revoke-grant", "remove a principal's role");
  std::string rg_principal, rg_dataset;
  rg_cmd->add_option("principal", rg_principal)->required();
  rg_cmd->add_option("dataset", rg_dataset, "dataset name or *")->required();
  rg_cmd->callback([&] {
    const std::string& principal = require_principal(ctx);
    Repo repo = open_repo();
    auto removed = revoke_grant(repo, principal, rg_principal, rg_dataset);
    if (ctx.json) {
      ojson doc;
      doc["principal"] = rg_principal;
      doc["dataset"] = rg_dataset;
      doc["removed"] = removed ? role_name(removed->role) : "";
      printf("%s\n", doc.dump().c_str());
    } else if (removed) {
      printf("removed %s grant on %s for %s\n", role_name(removed->role),
             rg_dataset.c_str(), rg_principal.c_str());
    } else {
      printf("no grant existed on %s for %s\n", rg_dataset.c_str(),
             rg_principal.c_str());
    }
  });

  // --- workflow ---
  auto* wf = app.add_subcommand("workflow", "register and run pipelines");
  wf->require_subcommand(1);

  auto* wf_register = wf->add_subcommand("register", "register a definition");
  std::string wfr_file;
  wf_register->add_option("file", wfr_file, "definition JSON file")->required();
  wf_register->callback([&] {
    const std::string& principal = require_principal(ctx);
    Repo repo = open_repo();
    WorkflowDef def = register_workflow(repo, principal, read_file(wfr_file));
    if (ctx.json) {
      ojson doc;
      doc["workflow"] = def.name;
      doc["def_hash"] = def.def_hash();
      printf("%s\n", doc.dump().c_str());
    } else {
      printf("registered workflow %s (%s)\n", def.name.c_str(),
             short_id(def.def_hash()).c_str());
    }
  });

  auto* wf_run = wf->add_subcommand("run", "start a run and drive it");
  std::string wfr_name;
  int wf_pool = 0;
  wf_run->add_option("name", wfr_name, "workflow name")->required();
  wf_run->add_option("--pool", wf_pool, "worker slots (default: cpu count)");
  wf_run->callback([&] {
    const std::string& principal = require_principal(ctx);
    Repo repo = open_repo();
    WorkflowDef def = load_current_workflow(repo, wfr_name);
    if (def.output)
      require_access(repo, principal, Action::write, def.output->dataset);
    else if (principal != def.owner)
      fail(Errc::permission_denied,
           "only the owner may run workflow '" + wfr_name + "'");
    EngineOptions options;
    options.pool_slots = wf_pool;
    Engine engine(repo, options);
    Run run = engine.start_run(wfr_name, Cause{CauseKind::manual, principal});
    run = engine.resume(run.run_id);
    print_run_report(ctx, run);
    if (run.state() == RunState::failed) fail(Errc::wrong_state, "run failed");
  });

  auto* wf_report = wf->add_subcommand("report", "per-step states of a run");
  std::string wrep_id;
  wf_report->add_option("run_id", wrep_id)->required();
  wf_report->callback([&] {
    Repo repo = open_repo();
    print_run_report(ctx, Run::load(repo, wrep_id));
  });

  auto* wf_runs = wf->add_subcommand("runs", "list runs");
  std::string wruns_state;
  wf_runs->add_option("--state", wruns_state,
                      "filter: pending|running|awaiting_human|succeeded|failed");
  wf_runs->callback([&] {
    Repo repo = open_repo();
    std::optional<RunState> want;
    if (!wruns_state.empty()) {
      want = run_state_from_name(wruns_state);
      if (!want) fail(Errc::usage, "unknown state '" + wruns_state + "'");
    }
    for (const auto& id : list_run_ids(repo)) {
      Run run = Run::load(repo, id);
      if (want && run.state() != *want) continue;
      if (ctx.json) {
        printf("%s\n", run_json(run).dump().c_str());
      } else {
        printf("%s %s %s %s\n", run.run_id.c_str(), run.workflow.c_str(),
               run_state_name(run.state()), run.cause.to_string().c_str());
      }
    }
  });

  auto* wf_approve = wf->add_subcommand("approve", "resolve a human step");
  std::string ap_run, ap_step, ap_attach;
  bool ap_reject = false;
  wf_approve->add_option("run_id", ap_run)->required();
  wf_approve->add_option("step_id", ap_step)->required();
  wf_approve->add_flag("--reject", ap_reject, "fail the step");
  wf_approve->add_option("--attach", ap_attach, "directory to use as the step output");
  wf_approve->callback([&] {
    const std::string& principal = require_principal(ctx);
    Repo repo = open_repo();
    Engine engine(repo);
    std::optional<fs::path> attach;
    if (!ap_attach.empty()) attach = ap_attach;
    Run run = engine.approve_step(principal, ap_run, ap_step, !ap_reject, attach);
    print_run_report(ctx, run);
  });

  // --- daemon ---
  auto* daemon_cmd = app.add_subcommand("daemon", "evaluate triggers and drive runs");
  int d_pool = 0, d_interval = 500;
  bool d_once = false;
  int64_t d_max_seconds = 0;
  daemon_cmd->add_option("--pool", d_pool, "worker slots (default: cpu count)");
  daemon_cmd->add_option("--interval-ms", d_interval, "poll interval");
  daemon_cmd->add_flag("--once", d_once, "process until quiescent, then exit");
  daemon_cmd->add_option("--max-seconds", d_max_seconds, "exit after this long");
  daemon_cmd->callback([&] {
    Repo repo = open_repo();
    EngineOptions options;
    options.pool_slots = d_pool;
    Engine engine(repo, options);
    DaemonOptions daemon_options;
    daemon_options.interval_ms = d_interval;
    daemon_options.once = d_once;
    daemon_options.max_seconds = d_max_seconds;
    int started = daemon_loop(repo, engine, daemon_options);
    if (!ctx.json) printf("daemon: exited after starting %d runs\n", started);
  });

  // --- lineage ---
  auto* lineage_cmd = app.add_subcommand("lineage", "provenance tree of a commit");
  std::string lin_commit;
  bool lin_up = false, lin_down = false;
  lineage_cmd->add_option("commit", lin_commit)->required();
  lineage_cmd->add_flag("--up", lin_up, "ancestors (default)");
  lineage_cmd->add_flag("--down", lin_down, "descendants");
  lineage_cmd->callback([&] {
    Repo repo = open_repo();
    if (lin_up && lin_down) fail(Errc::usage, "pick one of --up/--down");
    bool down = lin_down;
    std::string root = repo.resolve_commit(lin_commit);
    Commit root_commit = repo.load_commit(root);
    require_access(repo, ctx.principal, Action::read, root_commit.dataset);
    print_lineage_tree(repo, ctx, root, down);
  });

  // --- revoke ---
  auto* revoke_cmd = app.add_subcommand("revoke", "mark a commit unusable");
  std::string rv_commit, rv_reason;
  bool rv_no_cascade = false;
  revoke_cmd->add_option("commit", rv_commit)->required();
  revoke_cmd->add_option("-m,--reason", rv_reason, "why")->required();
  revoke_cmd->add_flag("--no-cascade", rv_no_cascade,
                       "do not revoke derived commits");
  revoke_cmd->callback([&] {
    const std::string& principal = require_principal(ctx);
    Repo repo = open_repo();
    std::string id = repo.resolve_commit(rv_commit);
    RevokeResult result = revoke(repo, principal, id, rv_reason, !rv_no_cascade);
    if (ctx.json) {
      ojson doc;
      doc["commit"] = result.mark.commit_id;
      doc["closure"] = result.mark.closure;
      doc["already_revoked"] = result.already_revoked;
      printf("%s\n", doc.dump().c_str());
    } else if (result.already_revoked) {
      printf("warning: %s was already revoked; no-op\n", short_id(id).c_str());
    } else {
      printf("revoked %s (closure: %zu commits)\n", short_id(id).c_str(),
             result.mark.closure.size());
    }
  });

  // --- gc ---
  auto* gc_cmd = app.add_subcommand("gc", "delete unreachable chunks");
  gc_cmd->callback([&] {
    const std::string& principal = require_principal(ctx);
    Repo repo = open_repo();
    require_access(repo, principal, Action::admin, "*");
    FileLock lock = repo.lock_repo();
    GcReport report = repo.store().gc(lock, default_gc_roots(repo));
    if (ctx.json) {
      ojson doc;
      doc["scanned"] = report.scanned;
      doc["retained"] = report.retained;
      doc["deleted"] = report.deleted;
      printf("%s\n", doc.dump().c_str());
    } else {
      printf("gc: scanned %zu retained %zu deleted %zu\n", report.scanned,
             report.retained, report.deleted);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fprintf(stderr, "error: USAGE: %s\n", e.what());
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const Error& e) {
    fprintf(stderr, "error: %s: %s\n", e.code_name(), e.what());
    return e.code() == Errc::usage ? 2 : 1;
  } catch (const std::exception& e) {
    fprintf(stderr, "error: INTERNAL: %s\n", e.what());
    return 1;
  }
}
