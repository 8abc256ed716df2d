#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dsr/repo.hpp"

namespace testing {

namespace fs = std::filesystem;

// Deterministic byte source used for fixtures: xorshift64* seeded with a
// fixed constant, one byte from the top of each output word. Documented in
// docs/chunking.md so fixtures can be regenerated outside this tree.
class SeededBytes {
 public:
  explicit SeededBytes(uint64_t seed = 0x9E3779B97F4A7C15ull) : state_(seed) {}

  uint8_t next_byte() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return uint8_t((state_ * 2685821657736338717ull) >> 56);
  }
  uint64_t next_u64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | next_byte();
    return v;
  }
  std::string bytes(size_t n) {
    std::string out(n, '\0');
    for (size_t i = 0; i < n; ++i) out[i] = char(next_byte());
    return out;
  }

 private:
  uint64_t state_;
};

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Fresh repo under a temp dir, initialized by "root" who holds (*, admin).
struct RepoFixture {
  TempDir dir;
  dsr::Repo repo;

  explicit RepoFixture(dsr::ChunkParams params = small_params());
  static dsr::ChunkParams small_params() { return {1024, 4096, 16384}; }
};

void write_file(const fs::path& p, const std::string& content);
std::map<std::string, std::string> read_tree_bytes(const fs::path& root);

// Random file tree: nested dirs, file sizes skewed small. Returns the tree
// as path -> bytes and writes it under root.
std::map<std::string, std::string> make_random_tree(const fs::path& root,
                                                    uint64_t seed,
                                                    size_t max_files,
                                                    size_t max_file_size);

struct CmdResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

// Runs `command` through /bin/sh -c in `cwd` with optional extra
// environment assignments ("K=V").
CmdResult run_cmd(const std::string& command, const fs::path& cwd,
                  const std::vector<std::string>& env = {});

}  // namespace testing
