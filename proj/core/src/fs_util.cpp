#include "dsr/fs_util.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <random>

#include "dsr/error.hpp"

namespace dsr {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + p.string());
  in.seekg(0, std::ios::end);
  std::streamoff size = in.tellg();
  if (size < 0) fail(Errc::io, "cannot size " + p.string());
  in.seekg(0);
  std::string data(size_t(size), '\0');
  in.read(data.data(), size);
  if (!in || in.gcount() != size) fail(Errc::io, "read failed: " + p.string());
  return data;
}

std::optional<std::string> read_file_if_exists(const fs::path& p) {
  std::error_code ec;
  if (!fs::exists(p, ec)) return std::nullopt;
  return read_file(p);
}

static std::string temp_name() {
  static thread_local std::mt19937_64 rng(
      std::random_device{}() ^ (uint64_t(::getpid()) << 32));
  char buf[32];
  snprintf(buf, sizeof buf, "tmp.%d.%016llx", ::getpid(),
           (unsigned long long)rng());
  return buf;
}

void atomic_write_file(const fs::path& dest, std::string_view content,
                       const fs::path& staging, bool durable) {
  std::error_code ec;
  fs::create_directories(staging, ec);
  fs::path tmp = staging / temp_name();

  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL, 0644);
  if (fd < 0) fail(Errc::io, "cannot create temp file " + tmp.string());
  size_t off = 0;
  while (off < content.size()) {
    ssize_t n = ::write(fd, content.data() + off, content.size() - off);
    if (n < 0) {
      int e = errno;
      ::close(fd);
      ::unlink(tmp.c_str());
      fail(Errc::io, std::string("write failed: ") + std::strerror(e));
    }
    off += size_t(n);
  }
  if (durable && ::fsync(fd) != 0) {
    ::close(fd);
    ::unlink(tmp.c_str());
    fail(Errc::io, "fsync failed for " + tmp.string());
  }
  ::close(fd);

  fs::create_directories(dest.parent_path(), ec);
  if (::rename(tmp.c_str(), dest.c_str()) != 0) {
    int e = errno;
    ::unlink(tmp.c_str());
    fail(Errc::io, "rename to " + dest.string() + " failed: " + std::strerror(e));
  }
}

void append_line(const fs::path& p, std::string_view line) {
  int fd = ::open(p.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) fail(Errc::io, "cannot open " + p.string());
  std::string buf(line);
  buf.push_back('\n');
  ssize_t n = ::write(fd, buf.data(), buf.size());
  bool ok = n == ssize_t(buf.size()) && ::fsync(fd) == 0;
  ::close(fd);
  if (!ok) fail(Errc::io, "append failed: " + p.string());
}

static void walk(const fs::path& dir, const std::string& prefix,
                 const std::string& exclude_top, std::vector<std::string>& out) {
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (prefix.empty() && !exclude_top.empty() && name == exclude_top) continue;
    std::string rel = prefix.empty() ? name : prefix + "/" + name;
    if (entry.is_symlink())
      fail(Errc::validation, "symlink not allowed in worktree: " + rel);
    if (entry.is_directory()) {
      walk(entry.path(), rel, exclude_top, out);
    } else if (entry.is_regular_file()) {
      out.push_back(rel);
    } else {
      fail(Errc::validation, "unsupported file type: " + rel);
    }
  }
}

std::vector<std::string> list_tree(const fs::path& root,
                                   const std::string& exclude_top) {
  if (!fs::exists(root) || !fs::is_directory(root))
    fail(Errc::validation, "not a directory: " + root.string());
  std::vector<std::string> out;
  walk(root, "", exclude_top, out);
  std::sort(out.begin(), out.end());
  return out;
}

void validate_repo_path(const std::string& path) {
  if (path.empty()) fail(Errc::validation, "empty path");
  if (path.front() == '/') fail(Errc::validation, "absolute path: " + path);
  if (path.find('\\') != std::string::npos)
    fail(Errc::validation, "backslash in path: " + path);
  size_t start = 0;
  while (start <= path.size()) {
    size_t end = path.find('/', start);
    std::string seg = path.substr(start, end == std::string::npos
                                             ? std::string::npos
                                             : end - start);
    if (seg.empty() || seg == "." || seg == "..")
      fail(Errc::validation, "invalid path segment in: " + path);
    if (end == std::string::npos) break;
    start = end + 1;
  }
}

FileLock::FileLock(const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
  if (fd_ < 0) fail(Errc::io, "cannot open lock file " + path.string());
  if (::flock(fd_, LOCK_EX) != 0) {
    ::close(fd_);
    fd_ = -1;
    fail(Errc::io, "flock failed on " + path.string());
  }
}

FileLock::~FileLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

FileLock::FileLock(FileLock&& other) noexcept : fd_(other.fd_) {
  other.fd_ = -1;
}

}  // namespace dsr
