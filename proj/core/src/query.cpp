#include "dsr/query.hpp"

#include <fnmatch.h>
#include <time.h>

#include <algorithm>
#include <cstdio>

#include "dsr/error.hpp"

namespace dsr {

using ojson = nlohmann::ordered_json;

bool glob_match(const std::string& pattern, const std::string& value) {
  return ::fnmatch(pattern.c_str(), value.c_str(), 0) == 0;
}

static void validate_glob(const std::string& pattern) {
  int depth = 0;
  for (size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '[') ++depth;
    if (pattern[i] == ']' && depth > 0) --depth;
  }
  if (depth != 0)
    fail(Errc::validation, "malformed glob (unterminated '['): " + pattern);
}

void QueryExpr::validate() const {
  if (dataset_glob) validate_glob(*dataset_glob);
  if (committed_after && committed_before && *committed_after >= *committed_before)
    fail(Errc::validation, "after/before window is empty");
}

bool QueryExpr::matches(const Commit& c,
                        const std::vector<std::string>& commit_tags,
                        bool is_head) const {
  if (dataset_glob && !glob_match(*dataset_glob, c.dataset)) return false;
  for (const auto& t : tags)
    if (std::find(commit_tags.begin(), commit_tags.end(), t) == commit_tags.end())
      return false;
  for (const auto& [k, v] : attrs) {
    auto it = c.attributes.find(k);
    if (it == c.attributes.end() || it->second != v) return false;
  }
  if (committed_after && c.timestamp <= *committed_after) return false;
  if (committed_before && c.timestamp >= *committed_before) return false;
  if (head_only && !is_head) return false;
  return true;
}

int64_t parse_utc_time(const std::string& text) {
  if (!text.empty() &&
      text.find_first_not_of("0123456789") == std::string::npos)
    return std::stoll(text);
  struct tm tm = {};
  int y, mo, d, h = 0, mi = 0, s = 0;
  int fields = sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &s);
  if (fields != 3 && fields != 6)
    fail(Errc::validation, "bad timestamp '" + text +
                               "' (want epoch seconds, YYYY-MM-DD, or "
                               "YYYY-MM-DDTHH:MM:SS)");
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = s;
  time_t t = timegm(&tm);
  if (t == -1) fail(Errc::validation, "bad timestamp '" + text + "'");
  return int64_t(t);
}

QueryExpr QueryExpr::parse_tokens(const std::vector<std::string>& tokens) {
  QueryExpr expr;
  for (const auto& tok : tokens) {
    size_t eq = tok.find('=');
    if (eq == std::string::npos)
      fail(Errc::validation, "query token must be key=value: '" + tok + "'");
    std::string key = tok.substr(0, eq);
    std::string value = tok.substr(eq + 1);
    if (key == "dataset") {
      expr.dataset_glob = value;
    } else if (key == "tag") {
      expr.tags.push_back(value);
    } else if (key.starts_with("attr.") && key.size() > 5) {
      expr.attrs[key.substr(5)] = value;
    } else if (key == "after") {
      expr.committed_after = parse_utc_time(value);
    } else if (key == "before") {
      expr.committed_before = parse_utc_time(value);
    } else if (key == "head") {
      expr.head_only = (value == "true" || value == "1");
    } else {
      fail(Errc::validation, "unknown query key '" + key + "'");
    }
  }
  expr.validate();
  return expr;
}

QueryExpr QueryExpr::from_json(const ojson& doc) {
  QueryExpr expr;
  for (const auto& [key, value] : doc.items()) {
    if (key == "dataset") {
      expr.dataset_glob = value.get<std::string>();
    } else if (key == "tag") {
      if (value.is_array())
        for (const auto& t : value) expr.tags.push_back(t.get<std::string>());
      else
        expr.tags.push_back(value.get<std::string>());
    } else if (key == "attrs") {
      for (const auto& [k, v] : value.items()) expr.attrs[k] = v.get<std::string>();
    } else if (key == "after") {
      expr.committed_after = value.is_number()
                                 ? value.get<int64_t>()
                                 : parse_utc_time(value.get<std::string>());
    } else if (key == "before") {
      expr.committed_before = value.is_number()
                                  ? value.get<int64_t>()
                                  : parse_utc_time(value.get<std::string>());
    } else if (key == "head") {
      expr.head_only = value.get<bool>();
    } else {
      fail(Errc::validation, "unknown query key '" + key + "'");
    }
  }
  expr.validate();
  return expr;
}

ojson QueryExpr::to_json() const {
  ojson doc = ojson::object();
  if (dataset_glob) doc["dataset"] = *dataset_glob;
  if (!tags.empty()) doc["tag"] = tags;
  if (!attrs.empty()) {
    ojson a = ojson::object();
    for (const auto& [k, v] : attrs) a[k] = v;
    doc["attrs"] = std::move(a);
  }
  if (committed_after) doc["after"] = *committed_after;
  if (committed_before) doc["before"] = *committed_before;
  if (head_only) doc["head"] = true;
  return doc;
}

}  // namespace dsr
