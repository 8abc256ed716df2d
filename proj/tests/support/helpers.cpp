#include "support/helpers.hpp"

#include <stdlib.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fstream>
#include <random>

#include "dsr/error.hpp"
#include "dsr/fs_util.hpp"

namespace testing {

static fs::path scratch_base() {
  // prefer tmpfs: test repos are fsync-heavy and /tmp may be on a slow
  // network filesystem in CI sandboxes
  std::error_code ec;
  if (!std::getenv("TMPDIR") && fs::is_directory("/dev/shm", ec)) {
    auto status = fs::status("/dev/shm", ec);
    if (!ec && (status.permissions() & fs::perms::owner_write) != fs::perms::none)
      return "/dev/shm";
  }
  return fs::temp_directory_path();
}

TempDir::TempDir() {
  std::string tmpl = (scratch_base() / "dsr_test_XXXXXX").string();
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
  path_ = buf.data();
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);  // read-only files unlink fine; dirs stay 0755
}

RepoFixture::RepoFixture(dsr::ChunkParams params)
    : dir(), repo(dsr::Repo::init(dir.path(), "root", params)) {}

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(content.data(), std::streamsize(content.size()));
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

std::map<std::string, std::string> read_tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& rel : dsr::list_tree(root))
    out[rel] = dsr::read_file(root / rel);
  return out;
}

std::map<std::string, std::string> make_random_tree(const fs::path& root,
                                                    uint64_t seed,
                                                    size_t max_files,
                                                    size_t max_file_size) {
  std::mt19937_64 rng(seed);
  std::map<std::string, std::string> tree;
  size_t files = rng() % (max_files + 1);
  for (size_t i = 0; i < files; ++i) {
    std::string path;
    size_t depth = rng() % 4;
    for (size_t d = 0; d < depth; ++d)
      path += "d" + std::to_string(rng() % 5) + "/";
    path += "f" + std::to_string(i) + (rng() % 2 ? ".bin" : ".txt");

    // skew sizes small so big corpora stay fast, but keep some large files
    size_t size;
    switch (rng() % 4) {
      case 0: size = rng() % 64; break;
      case 1: size = rng() % 1024; break;
      case 2: size = rng() % 8192; break;
      default: size = rng() % (max_file_size + 1); break;
    }
    std::string content(size, '\0');
    size_t pos = 0;
    while (pos < size) {
      uint64_t v = rng();
      for (int b = 0; b < 8 && pos < size; ++b, ++pos) content[pos] = char(v >> (8 * b));
    }
    write_file(root / path, content);
    tree[path] = std::move(content);
  }
  return tree;
}

CmdResult run_cmd(const std::string& command, const fs::path& cwd,
                  const std::vector<std::string>& env) {
  fs::path out_file = cwd / ".cmd_stdout";
  fs::path err_file = cwd / ".cmd_stderr";

  std::string full;
  for (const auto& kv : env) full += "export " + kv + "; ";
  full += "cd " + cwd.string() + " && { " + command + "; }";
  full += " >" + out_file.string() + " 2>" + err_file.string();

  int status = ::system(full.c_str());
  CmdResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (auto s = dsr::read_file_if_exists(out_file)) result.out = *s;
  if (auto s = dsr::read_file_if_exists(err_file)) result.err = *s;
  std::error_code ec;
  fs::remove(out_file, ec);
  fs::remove(err_file, ec);
  return result;
}

}  // namespace testing
