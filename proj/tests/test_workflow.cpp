#include <doctest.h>

#include "dsr/acl.hpp"
#include "dsr/error.hpp"
#include "dsr/repo.hpp"
#include "dsr/workflow.hpp"
#include "support/helpers.hpp"

using namespace dsr;
using testing::RepoFixture;

namespace {

std::string chain_def = R"({
  "name": "chain",
  "steps": [
    {"id": "A", "kind": "program", "argv": ["true"]},
    {"id": "B", "kind": "program", "needs": ["A"], "argv": ["true"]},
    {"id": "C", "kind": "program", "needs": ["B"], "argv": ["true"]}
  ],
  "triggers": [{"kind": "manual"}]
})";

WorkflowDef parse_with_owner(const std::string& text) {
  WorkflowDef def = WorkflowDef::parse(text);
  def.owner = "root";
  return def;
}

}  // namespace

TEST_CASE("chain parses with topological order A,B,C") {
  WorkflowDef def = parse_with_owner(chain_def);
  def.validate();
  CHECK(def.topo_order() == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("cycle is rejected naming its members") {
  WorkflowDef def = parse_with_owner(R"({
    "name": "bad",
    "steps": [
      {"id": "A", "kind": "program", "needs": ["B"], "argv": ["true"]},
      {"id": "B", "kind": "program", "needs": ["A"], "argv": ["true"]}
    ]
  })");
  try {
    def.validate();
    CHECK(false);
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("A") != std::string::npos);
    CHECK(msg.find("B") != std::string::npos);
  }
}

TEST_CASE("diamond validates; B and C are both immediately eligible") {
  WorkflowDef def = parse_with_owner(R"({
    "name": "diamond",
    "steps": [
      {"id": "A", "kind": "program", "argv": ["true"]},
      {"id": "B", "kind": "program", "needs": ["A"], "argv": ["true"]},
      {"id": "C", "kind": "program", "needs": ["A"], "argv": ["true"]},
      {"id": "D", "kind": "program", "needs": ["B", "C"], "argv": ["true"]}
    ]
  })");
  def.validate();
  auto order = def.topo_order();
  CHECK(order.front() == "A");
  CHECK(order.back() == "D");
}

TEST_CASE("validation failures") {
  auto reject = [](const std::string& body, const std::string& needle) {
    try {
      WorkflowDef def = parse_with_owner(body);
      def.validate();
      FAIL("expected rejection: " << needle);
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  reject(R"({"name":"x","steps":[
    {"id":"A","kind":"program","needs":["missing"],"argv":["true"]}]})",
         "unknown step");
  reject(R"({"name":"x","steps":[{"id":"A","kind":"program","argv":[]}]})",
         "empty argv");
  reject(R"({"name":"x","steps":[
    {"id":"A","kind":"human","argv":["true"],"instructions":"look"}]})",
         "must not have argv");
  reject(R"({"name":"x","steps":[
    {"id":"A","kind":"program","argv":["true"]},
    {"id":"B","kind":"program","needs":["A"],
     "input":{"dataset":"d"},"argv":["true"]}]})",
         "source steps only");
  reject(R"({"name":"x","steps":[
    {"id":"A","kind":"program","argv":["true"],"terminal":true},
    {"id":"B","kind":"program","argv":["true"],"terminal":true}]})",
         "more than one");
  reject(R"({"name":"x","steps":[{"id":"A","kind":"program","argv":["true"]}],
    "triggers":[{"kind":"schedule","cron":"61 * * * *"}]})",
         "cron");
  reject(R"({"name":"x","steps":[
    {"id":"A","kind":"program","argv":["true"]},
    {"id":"B","kind":"program","argv":["true"]}],
    "output":{"dataset":"d"}})",
         "terminal");
  reject(R"({"name":"x","steps":[
    {"id":"A","kind":"program","argv":["true"],"cpu_slots":0}]})",
         "cpu_slots");
  reject(R"({"name":"x","steps":[{"id":"A","kind":"alien","argv":["x"]}]})",
         "unknown kind");
}

TEST_CASE("registration stores immutable versions") {
  RepoFixture f;
  WorkflowDef v1 = register_workflow(f.repo, "root", chain_def);
  std::string h1 = v1.def_hash();
  CHECK(current_def_hash(f.repo, "chain") == h1);

  WorkflowDef v2_def = WorkflowDef::parse(chain_def);
  v2_def.steps[0].argv = {"echo", "hi"};
  WorkflowDef v2 = register_workflow(f.repo, "root", v2_def.canonical_json());
  std::string h2 = v2.def_hash();
  CHECK(h1 != h2);
  CHECK(current_def_hash(f.repo, "chain") == h2);
  // the old version remains loadable for runs pinned to it
  CHECK(load_workflow(f.repo, "chain", h1).steps[0].argv ==
        std::vector<std::string>{"true"});
  CHECK(load_workflow(f.repo, "chain", h2).steps[0].argv ==
        std::vector<std::string>{"echo", "hi"});
}

TEST_CASE("registration with output requires writer on the output dataset") {
  RepoFixture f;
  std::string def = R"({
    "name": "writer-gate",
    "steps": [{"id": "A", "kind": "program", "argv": ["true"]}],
    "output": {"dataset": "derived"}
  })";
  grant(f.repo, "root", "nobody-w", "elsewhere", Role::writer);
  try {
    register_workflow(f.repo, "nobody-w", def);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::permission_denied);
  }
  grant(f.repo, "root", "maker", "derived", Role::writer);
  CHECK_NOTHROW(register_workflow(f.repo, "maker", def));
}
