#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dsr {

// Immutable dataset version. commit_id is the SHA-256 of canonical_json(),
// so any mutation (revocation, tags) lives in side tables, never here.
struct Commit {
  std::string commit_id;  // derived, not serialized
  std::string dataset;
  std::string manifest_id;
  std::vector<std::string> parents;  // first parent = previous dataset head
  std::string author;
  int64_t timestamp = 0;  // UTC seconds since epoch
  std::string message;
  std::map<std::string, std::string> attributes;

  std::string canonical_json() const;
  std::string compute_id() const;

  static Commit from_json(const std::string& text);
};

// Nonempty, chars from [A-Za-z0-9._-]. Used for datasets, principals, tags,
// workflow names and step ids.
bool valid_name(const std::string& s);
void require_valid_name(const std::string& kind, const std::string& s);

}  // namespace dsr
