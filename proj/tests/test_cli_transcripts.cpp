// Golden-transcript corpus: each tests/cli_corpus/*.txt file is a scripted
// CLI session. `$ dsr ...` lines run the real binary in a fresh temp repo;
// following lines are expected stdout (stderr lines prefixed `! `) after id
// and timestamp normalization; `? N` asserts the exit code.

#include <doctest.h>

#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dsr/fs_util.hpp"
#include "support/helpers.hpp"

using testing::CmdResult;
using testing::run_cmd;
using testing::TempDir;

namespace {

std::string normalize(std::string text, const std::string& cwd) {
  static const std::regex id64("[0-9a-f]{64}");
  static const std::regex ulid("\\b[0-9ABCDEFGHJKMNPQRSTVWXYZ]{26}\\b");
  static const std::regex iso_ts("\\d{4}-\\d{2}-\\d{2}T\\d{2}:\\d{2}(:\\d{2}Z?)?");
  static const std::regex epoch("\"timestamp\":\\d+");
  static const std::regex id12("\\b[0-9a-f]{12}\\b");

  size_t pos;
  while ((pos = text.find(cwd)) != std::string::npos)
    text.replace(pos, cwd.size(), "<CWD>");
  text = std::regex_replace(text, id64, "<ID64>");
  text = std::regex_replace(text, ulid, "<RUN>");
  text = std::regex_replace(text, iso_ts, "<TS>");
  text = std::regex_replace(text, epoch, "\"timestamp\":<TS>");
  text = std::regex_replace(text, id12, "<ID12>");
  return text;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

void run_transcript(const std::filesystem::path& script) {
  TempDir repo_dir;
  // `dsr` resolves through PATH so $(dsr ...) substitutions work too
  std::string bin_dir = std::filesystem::path(DSR_BIN_PATH).parent_path();
  std::vector<std::string> env = {"PATH=" + bin_dir + ":$PATH",
                                  "DSR_PRINCIPAL="};
  auto script_lines = lines_of(dsr::read_file(script));

  size_t i = 0;
  while (i < script_lines.size()) {
    const std::string& line = script_lines[i];
    if (line.empty() || line[0] == '#') {
      ++i;
      continue;
    }
    if (line.starts_with("@env ")) {
      env.push_back(line.substr(5));
      ++i;
      continue;
    }
    REQUIRE_MESSAGE(line.starts_with("$ "),
                    script.filename().string() << ":" << i + 1
                                               << ": expected a command");
    std::string command = line.substr(2);
    ++i;

    std::vector<std::string> want_out, want_err;
    int want_exit = 0;
    while (i < script_lines.size() && !script_lines[i].starts_with("$ ")) {
      const std::string& exp = script_lines[i];
      ++i;
      if (exp.starts_with("? ")) {
        want_exit = std::stoi(exp.substr(2));
        break;
      }
      if (exp.starts_with("! "))
        want_err.push_back(exp.substr(2));
      else
        want_out.push_back(exp);
    }

    CmdResult result = run_cmd(command, repo_dir.path(), env);
    INFO(script.filename().string(), ": $ ", command);
    INFO("stdout:\n", result.out, "stderr:\n", result.err);
    CHECK(result.exit_code == want_exit);
    CHECK(lines_of(normalize(result.out, repo_dir.path().string())) == want_out);
    CHECK(lines_of(normalize(result.err, repo_dir.path().string())) == want_err);
  }
}

}  // namespace

// Every --json line must parse and carry its documented required keys.
TEST_CASE("--json outputs parse against the documented schemas") {
  TempDir dir;
  std::string bin_dir = std::filesystem::path(DSR_BIN_PATH).parent_path();
  std::vector<std::string> env = {"PATH=" + bin_dir + ":$PATH",
                                  "DSR_PRINCIPAL=op"};
  auto sh = [&](const std::string& cmd) { return run_cmd(cmd, dir.path(), env); };

  sh("dsr init");
  sh("mkdir d; echo hi > d/f.txt");
  sh("dsr checkin ./d -d ds -m m --tag t1");
  sh("printf '%s' '{\"name\":\"w\",\"steps\":[{\"id\":\"s\",\"kind\":\"program\","
     "\"input\":{\"dataset\":\"ds\"},\"argv\":[\"sh\",\"-c\",\"cp -r "
     "$DSR_INPUTS/. $DSR_OUTPUTS/\"]}],\"output\":{\"dataset\":\"out\"}}' > w.json");
  sh("dsr workflow register w.json");
  sh("dsr workflow run w");

  auto expect_keys = [&](const std::string& cmd,
                         const std::vector<std::string>& keys) {
    CmdResult result = sh(cmd);
    INFO(cmd, " -> ", result.out, result.err);
    REQUIRE(result.exit_code == 0);
    size_t json_lines = 0;
    for (const auto& line : lines_of(result.out)) {
      if (line.empty()) continue;
      nlohmann::json doc = nlohmann::json::parse(line);  // throws on failure
      for (const auto& k : keys) CHECK_MESSAGE(doc.contains(k), cmd, " key ", k);
      ++json_lines;
    }
    CHECK(json_lines > 0);
  };

  expect_keys("dsr query --json",
              {"commit", "dataset", "version", "manifest", "parents", "author",
               "timestamp", "message", "attributes", "tags"});
  expect_keys("dsr log -d ds --json", {"commit", "dataset", "version"});
  expect_keys("dsr workflow runs --json",
              {"run", "workflow", "def_hash", "cause", "state", "steps"});
  expect_keys("dsr checkout --dataset ds ./co --json", {"commit", "dest"});
  const char* first_id = "sed 's/.*\"commit\":\"\\([0-9a-f]*\\)\".*/\\1/'";
  expect_keys("dsr diff $(dsr query dataset=ds --json | " + std::string(first_id) +
                  ") $(dsr query dataset=out --json | " + first_id + ") --json",
              {"added", "deleted", "modified", "unchanged"});
  expect_keys("dsr gc --json", {"scanned", "retained", "deleted"});
}

TEST_CASE("cli transcript corpus") {
  std::vector<std::filesystem::path> scripts;
  for (const auto& e : std::filesystem::directory_iterator(DSR_CORPUS_DIR))
    if (e.path().extension() == ".txt") scripts.push_back(e.path());
  std::sort(scripts.begin(), scripts.end());
  REQUIRE(!scripts.empty());
  for (const auto& script : scripts) {
    CAPTURE(script.filename().string());
    run_transcript(script);
  }
}
