#include "dsr/engine.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

#include "dsr/acl.hpp"
#include "dsr/content_store.hpp"
#include "dsr/dataset.hpp"
#include "dsr/error.hpp"
#include "dsr/lineage.hpp"
#include "dsr/repo.hpp"
#include "dsr/ulid.hpp"

extern char** environ;

namespace dsr {

static int64_t steady_us() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

WorkerPool::WorkerPool(int capacity) : capacity_(capacity > 0 ? capacity : 1) {}

bool WorkerPool::try_acquire(int slots) {
  slots = std::min(slots, capacity_);
  std::lock_guard<std::mutex> lock(mu_);
  if (in_use_ + slots > capacity_) return false;
  in_use_ += slots;
  return true;
}

void WorkerPool::release(int slots) {
  slots = std::min(slots, capacity_);
  std::lock_guard<std::mutex> lock(mu_);
  in_use_ -= slots;
}

Engine::Engine(Repo& repo, EngineOptions options)
    : repo_(repo),
      options_(options),
      pool_(options.pool_slots > 0 ? options.pool_slots
                                   : int(std::thread::hardware_concurrency())) {}

fs::path Engine::step_dir(const std::string& run_id,
                          const std::string& step_id) const {
  return repo_.runs_dir() / run_id / "steps" / step_id;
}

// Query resolution for run inputs. Unlike `query`, an unauthorized dataset
// is a hard permission error here, not a silent exclusion: a run must not
// silently proceed on a narrower view than its author expects.
static Commit resolve_pinned_input(Repo& repo, const std::string& owner,
                                   const QueryExpr& expr,
                                   const std::string& step_id) {
  expr.validate();
  auto revoked = revoked_commits(repo);
  std::vector<Commit> matches;
  for (auto& c : repo.list_commits()) {
    if (!repo.head(c.dataset)) continue;
    if (revoked.count(c.commit_id)) continue;
    auto h = repo.head(c.dataset);
    if (!expr.matches(c, repo.tags_of(c.commit_id), h && *h == c.commit_id))
      continue;
    matches.push_back(std::move(c));
  }
  if (matches.empty())
    fail(Errc::no_match, "step '" + step_id + "' input query matched no commit");
  if (matches.size() > 1)
    fail(Errc::ambiguous_query, "step '" + step_id + "' input query matched " +
                                    std::to_string(matches.size()) + " commits");
  require_access(repo, owner, Action::read, matches[0].dataset);
  return matches[0];
}

Run Engine::start_run(const std::string& workflow_name, const Cause& cause,
                      int chain_depth) {
  auto hash = current_def_hash(repo_, workflow_name);
  if (!hash) fail(Errc::not_found, "unknown workflow '" + workflow_name + "'");
  WorkflowDef def = load_workflow(repo_, workflow_name, *hash);

  Run run;
  run.run_id = new_ulid();
  run.workflow = workflow_name;
  run.def_hash = *hash;
  run.cause = cause;
  run.chain_depth = chain_depth;
  run.created_at = now_utc_seconds();
  for (const auto& s : def.steps) run.steps[s.id] = StepStatus{};

  FileLock lock = repo_.lock_run(run.run_id);
  journal_created(repo_, run);
  try {
    pin_inputs(run, def);
  } catch (const Error& e) {
    journal_run_error(repo_, run.run_id,
                      std::string(e.code_name()) + ": " + e.what());
    throw;
  }
  return run;
}

void Engine::pin_inputs(Run& run, const WorkflowDef& def) {
  for (const auto& s : def.steps) {
    if (!s.input) continue;
    Commit c = resolve_pinned_input(repo_, def.owner, *s.input, s.id);
    run.pinned[s.id] = c.commit_id;
    journal_pinned(repo_, run.run_id, s.id, c.commit_id);
  }
}

static void make_tree_read_only(const fs::path& root) {
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(root, ec);
       it != fs::recursive_directory_iterator(); ++it)
    if (it->is_regular_file())
      ::chmod(it->path().c_str(), 0444);
}

static void copy_tree_into(const fs::path& from, const fs::path& to) {
  for (const auto& rel : list_tree(from)) {
    fs::path src = from / rel;
    fs::path dst = to / rel;
    std::error_code ec;
    if (fs::exists(dst, ec)) {
      // Same path from two upstream steps: identical bytes are fine,
      // conflicting bytes fail the step.
      if (read_file(src) != read_file(dst))
        fail(Errc::validation, "conflicting upstream outputs for path " + rel);
      continue;
    }
    fs::create_directories(dst.parent_path(), ec);
    fs::copy_file(src, dst, fs::copy_options::none, ec);
    if (ec) fail(Errc::io, "copy failed for " + rel + ": " + ec.message());
  }
}

static void materialize_commit(Repo& repo, const std::string& commit_id,
                               const fs::path& dest) {
  Commit c = repo.load_commit(commit_id);
  Manifest m = repo.store().read_manifest(c.manifest_id);
  fs::create_directories(dest);
  for (const auto& entry : m.entries)
    repo.store().get_blob_to_file(entry, dest / entry.path);
}

void Engine::prepare_inputs(const Run& run, const WorkflowDef& def,
                            const Step& step) {
  fs::path dir = step_dir(run.run_id, step.id);
  std::error_code ec;
  fs::remove_all(dir, ec);  // leftovers from an interrupted attempt
  fs::create_directories(dir / "inputs");
  fs::create_directories(dir / "outputs");

  if (step.input) {
    auto it = run.pinned.find(step.id);
    if (it == run.pinned.end())
      fail(Errc::wrong_state, "step '" + step.id + "' has no pinned input");
    materialize_commit(repo_, it->second, dir / "inputs");
  }
  for (const auto& need : step.needs) {
    fs::path upstream = step_dir(run.run_id, need) / "outputs";
    if (!fs::exists(upstream, ec))
      fail(Errc::wrong_state, "upstream outputs missing for '" + need + "'");
    copy_tree_into(upstream, dir / "inputs");
  }
  make_tree_read_only(dir / "inputs");
  (void)def;
}

static std::string tail_of_file(const fs::path& p, size_t max_bytes) {
  auto body = read_file_if_exists(p);
  if (!body) return "";
  if (body->size() <= max_bytes) return *body;
  return body->substr(body->size() - max_bytes);
}

StepStatus Engine::execute_program(const Run& run, const Step& step) {
  StepStatus status;
  status.start_us = steady_us();

  fs::path dir = step_dir(run.run_id, step.id);
  fs::path stdout_log = dir / "stdout.log";
  fs::path stderr_log = dir / "stderr.log";

  std::vector<std::string> env_strings;
  for (char** e = environ; *e; ++e) env_strings.push_back(*e);
  env_strings.push_back("DSR_RUN_ID=" + run.run_id);
  env_strings.push_back("DSR_STEP_ID=" + step.id);
  env_strings.push_back("DSR_INPUTS=" + fs::absolute(dir / "inputs").string());
  env_strings.push_back("DSR_OUTPUTS=" + fs::absolute(dir / "outputs").string());

  std::vector<char*> argv;
  for (const auto& a : step.argv) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  std::vector<char*> envp;
  for (auto& e : env_strings) envp.push_back(e.data());
  envp.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) {
    status.end_us = steady_us();
    status.state = StepState::failed;
    status.error = "fork failed";
    return status;
  }
  if (pid == 0) {
    if (::chdir(dir.c_str()) != 0) _exit(126);
    int out = ::open(stdout_log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    int err = ::open(stderr_log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (out >= 0) ::dup2(out, 1);
    if (err >= 0) ::dup2(err, 2);
    ::execvpe(argv[0], argv.data(), envp.data());
    fprintf(stderr, "exec failed for '%s': %s\n", argv[0], strerror(errno));
    _exit(127);
  }

  int64_t deadline =
      steady_us() + options_.step_timeout_seconds * 1'000'000;
  int wstatus = 0;
  bool timed_out = false;
  while (true) {
    pid_t r = ::waitpid(pid, &wstatus, WNOHANG);
    if (r == pid) break;
    if (r < 0) break;
    if (steady_us() > deadline) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &wstatus, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }

  status.end_us = steady_us();
  if (timed_out) {
    status.state = StepState::failed;
    status.error = "timeout after " + std::to_string(options_.step_timeout_seconds) + "s";
    status.exit_code = -1;
  } else if (WIFEXITED(wstatus) && WEXITSTATUS(wstatus) == 0) {
    status.state = StepState::succeeded;
  } else {
    status.state = StepState::failed;
    status.exit_code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : -WTERMSIG(wstatus);
    status.error = "exit code " + std::to_string(status.exit_code);
  }
  status.stderr_tail = tail_of_file(stderr_log, 64 * 1024);
  return status;
}

namespace {

struct Completion {
  std::string step_id;
  StepStatus status;
};

}  // namespace

Run Engine::resume(const std::string& run_id) {
  FileLock run_lock = repo_.lock_run(run_id);
  Run run = Run::load(repo_, run_id);
  WorkflowDef def = load_workflow(repo_, run.workflow, run.def_hash);
  if (run.terminal()) {
    // an approval may have completed the last step; commit-back still runs
    finalize(run, def);
    return Run::load(repo_, run_id);
  }

  // A `running` step with no executor alive means a previous process died
  // mid-flight; its outcome is unknowable, so it fails.
  for (auto& [id, st] : run.steps) {
    if (st.state == StepState::running) {
      st.state = StepState::failed;
      st.error = "executor lost";
      journal_step(repo_, run_id, id, StepState::failed, st);
    }
  }

  std::vector<std::string> topo = def.topo_order();

  std::mutex mu;
  std::condition_variable cv;
  std::deque<Completion> done;
  int inflight = 0;
  std::vector<std::thread> threads;

  auto all_needs_succeeded = [&](const Step& s) {
    for (const auto& n : s.needs)
      if (run.steps[n].state != StepState::succeeded) return false;
    return true;
  };
  auto any_need_dead = [&](const Step& s) {
    for (const auto& n : s.needs) {
      StepState st = run.steps[n].state;
      if (st == StepState::failed || st == StepState::skipped) return true;
    }
    return false;
  };

  while (true) {
    // Skip propagation closes over failed ancestors.
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& s : def.steps) {
        if (run.steps[s.id].state == StepState::pending && any_need_dead(s)) {
          run.steps[s.id].state = StepState::skipped;
          journal_step(repo_, run_id, s.id, StepState::skipped, run.steps[s.id]);
          changed = true;
        }
      }
    }

    // Launch eligible steps in topological order, greedily as slots allow.
    bool launched = false;
    for (const auto& id : topo) {
      const Step* s = def.find_step(id);
      StepStatus& st = run.steps[id];
      if (st.state != StepState::pending || !all_needs_succeeded(*s)) continue;
      if (s->kind == StepKind::human) {
        st.state = StepState::awaiting_human;
        journal_step(repo_, run_id, id, StepState::awaiting_human, st);
        continue;
      }
      if (!pool_.try_acquire(s->cpu_slots)) continue;
      try {
        prepare_inputs(run, def, *s);
      } catch (const Error& e) {
        pool_.release(s->cpu_slots);
        st.state = StepState::failed;
        st.error = std::string(e.code_name()) + ": " + e.what();
        journal_step(repo_, run_id, id, StepState::failed, st);
        continue;
      }
      st.state = StepState::running;
      journal_step(repo_, run_id, id, StepState::running, st);
      ++inflight;
      launched = true;
      threads.emplace_back([this, &mu, &cv, &done, &run, s] {
        StepStatus result = execute_program(run, *s);
        pool_.release(s->cpu_slots);
        std::lock_guard<std::mutex> lock(mu);
        done.push_back({s->id, std::move(result)});
        cv.notify_all();
      });
    }

    if (inflight == 0 && !launched) break;  // blocked or finished

    // Collect at least one completion before the next scheduling pass.
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [&] { return !done.empty(); });
    while (!done.empty()) {
      Completion c = std::move(done.front());
      done.pop_front();
      --inflight;
      lock.unlock();
      run.steps[c.step_id] = c.status;
      journal_step(repo_, run_id, c.step_id, c.status.state, c.status);
      lock.lock();
    }
  }

  for (auto& t : threads) t.join();

  if (run.terminal()) finalize(run, def);
  return Run::load(repo_, run_id);
}

static std::string expand_template(std::string text, const Run& run) {
  auto replace_all = [&](const std::string& key, const std::string& value) {
    size_t pos = 0;
    while ((pos = text.find(key, pos)) != std::string::npos) {
      text.replace(pos, key.size(), value);
      pos += value.size();
    }
  };
  replace_all("{workflow}", run.workflow);
  replace_all("{run_id}", run.run_id);
  replace_all("{cause}", run.cause.to_string());
  return text;
}

void Engine::finalize(Run& run, const WorkflowDef& def) {
  if (run.state() != RunState::succeeded || !def.output) return;
  if (run.output_commit) return;

  std::string terminal = def.terminal_step();
  fs::path outputs = step_dir(run.run_id, terminal) / "outputs";

  CheckinOptions options;
  options.message = expand_template(def.output->message_template, run);
  options.allow_empty = true;  // a re-run may legitimately reproduce the tree
  for (const auto& [step, commit] : run.pinned)
    options.extra_parents.push_back(commit);

  // Workflow tags float: they move to the newest output commit.
  Commit commit;
  for (int attempt = 0;; ++attempt) {
    try {
      commit = checkin(repo_, def.owner, def.output->dataset, outputs, options);
      break;
    } catch (const Error& e) {
      if (e.code() == Errc::conflict && attempt < 5) continue;
      journal_run_error(repo_, run.run_id,
                        std::string("output commit failed: ") + e.what());
      throw;
    }
  }
  for (const auto& t : def.output->tags) {
    repo_.remove_tag(t);
    repo_.write_tag(t, commit.commit_id);
  }

  journal_output(repo_, run.run_id, commit.commit_id);
  run.output_commit = commit.commit_id;

  ProvenanceRecord record;
  record.output_commit = commit.commit_id;
  for (const auto& [step, pinned] : run.pinned)
    record.input_commits.push_back(pinned);
  record.workflow = run.workflow;
  record.workflow_def_hash = run.def_hash;
  record.run_id = run.run_id;
  record.terminal_step = terminal;
  record.recorded_at = now_utc_seconds();
  record_provenance(repo_, record);
}

Run Engine::approve_step(const std::string& principal, const std::string& run_id,
                         const std::string& step_id, bool approve,
                         const std::optional<fs::path>& attached_dir) {
  {
    FileLock run_lock = repo_.lock_run(run_id);
    Run run = Run::load(repo_, run_id);
    WorkflowDef def = load_workflow(repo_, run.workflow, run.def_hash);
    const Step* step = def.find_step(step_id);
    if (!step) fail(Errc::not_found, "no step '" + step_id + "' in run " + run_id);
    if (step->kind != StepKind::human)
      fail(Errc::wrong_state, "step '" + step_id + "' is not a human step");
    if (run.steps[step_id].state != StepState::awaiting_human)
      fail(Errc::wrong_state, "step '" + step_id + "' is " +
                                  step_state_name(run.steps[step_id].state) +
                                  ", not awaiting_human");

    bool allowed = principal == def.owner;
    if (!allowed && def.output)
      allowed = load_acl(repo_)
                    .authorize(principal, Action::write, def.output->dataset)
                    .allowed;
    if (!allowed)
      fail(Errc::permission_denied,
           "principal '" + principal + "' may not resolve steps of workflow '" +
               def.name + "'");

    StepStatus st = run.steps[step_id];
    st.start_us = st.start_us ? st.start_us : steady_us();
    if (approve) {
      prepare_inputs(run, def, *step);
      fs::path outputs = step_dir(run_id, step_id) / "outputs";
      if (attached_dir) {
        copy_tree_into(*attached_dir, outputs);
      } else {
        copy_tree_into(step_dir(run_id, step_id) / "inputs", outputs);
      }
      st.state = StepState::succeeded;
      st.error = "approved by " + principal;
    } else {
      st.state = StepState::failed;
      st.error = "rejected by " + principal;
    }
    st.end_us = steady_us();
    journal_step(repo_, run_id, step_id, st.state, st);
  }
  return resume(run_id);
}

}  // namespace dsr
