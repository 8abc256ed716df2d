#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsr/commit.hpp"

namespace dsr {

// Conjunction of filters; the empty expression matches every commit.
struct QueryExpr {
  std::optional<std::string> dataset_glob;
  std::vector<std::string> tags;               // commit must carry all
  std::map<std::string, std::string> attrs;    // every pair must match
  std::optional<int64_t> committed_after;      // strictly newer
  std::optional<int64_t> committed_before;     // strictly older
  bool head_only = false;

  bool empty() const {
    return !dataset_glob && tags.empty() && attrs.empty() && !committed_after &&
           !committed_before && !head_only;
  }

  bool matches(const Commit& c, const std::vector<std::string>& commit_tags,
               bool is_head) const;

  // CLI form: `key=value` tokens, keys in {dataset, tag, attr.K, after,
  // before, head}. `tag` and `attr.K` may repeat.
  static QueryExpr parse_tokens(const std::vector<std::string>& tokens);
  static QueryExpr from_json(const nlohmann::ordered_json& doc);
  nlohmann::ordered_json to_json() const;

  // Throws Errc::validation on malformed globs (unterminated class).
  void validate() const;
};

bool glob_match(const std::string& pattern, const std::string& value);

// Accepts epoch seconds, YYYY-MM-DD, or YYYY-MM-DDTHH:MM:SS (UTC).
int64_t parse_utc_time(const std::string& text);

}  // namespace dsr
