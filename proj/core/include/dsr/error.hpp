#pragma once

#include <stdexcept>
#include <string>

namespace dsr {

// Domain error codes. The CLI maps every code except `usage` to exit 1
// and prints `error: <CODE>: <message>` on stderr.
enum class Errc {
  usage,             // bad invocation (exit 2)
  validation,        // malformed input: paths, globs, names, defs
  permission_denied, // ACL denied
  not_found,         // unknown commit/dataset/tag/workflow/run id
  no_match,          // query matched nothing
  ambiguous_query,   // query matched more than one commit
  empty_commit,      // tree identical to parent
  revoked_data,      // commit is revoked
  conflict,          // head moved concurrently (retryable) / lock not held
  corruption,        // referenced chunk missing from the object store
  integrity,         // content does not hash to its declared id
  wrong_state,       // operation illegal in current state (runs, steps)
  duplicate,         // record already exists (provenance, workflow run)
  io,                // filesystem failure
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace dsr
