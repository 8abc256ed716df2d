#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dsr {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p);
std::optional<std::string> read_file_if_exists(const fs::path& p);

// Writes content to a temp file under `staging`, then renames into place.
// A killed writer never leaves a partially written file at `dest`; stale
// temp files can only accumulate under `staging`. `durable` adds an fsync
// before the rename; content-addressed chunk files skip it (their integrity
// is checked by name on read), refs and journals keep it.
void atomic_write_file(const fs::path& dest, std::string_view content,
                       const fs::path& staging, bool durable = true);

void append_line(const fs::path& p, std::string_view line);

// Relative forward-slash paths of all regular files under root, sorted
// bytewise. A symlink anywhere in the tree is a validation error; an entry
// that is neither file, directory, nor symlink likewise. A top-level entry
// named `exclude_top` is skipped entirely (check-in passes ".dsr").
std::vector<std::string> list_tree(const fs::path& root,
                                   const std::string& exclude_top = "");

// Rejects absolute paths, backslashes, empty/`.`/`..` segments.
void validate_repo_path(const std::string& path);

// Advisory exclusive lock (flock) on `path`, created if absent. Blocks until
// acquired. Released on destruction.
class FileLock {
 public:
  explicit FileLock(const fs::path& path);
  ~FileLock();
  FileLock(FileLock&& other) noexcept;
  FileLock& operator=(FileLock&&) = delete;
  FileLock(const FileLock&) = delete;

  bool held() const { return fd_ >= 0; }

 private:
  int fd_ = -1;
};

}  // namespace dsr
