#include "dsr/commit.hpp"

#include <nlohmann/json.hpp>

#include "dsr/error.hpp"
#include "dsr/sha256.hpp"

namespace dsr {

using ojson = nlohmann::ordered_json;

std::string Commit::canonical_json() const {
  ojson doc;
  doc["dataset"] = dataset;
  doc["manifest"] = manifest_id;
  doc["parents"] = parents;
  doc["author"] = author;
  doc["timestamp"] = timestamp;
  doc["message"] = message;
  ojson attrs = ojson::object();
  for (const auto& [k, v] : attributes) attrs[k] = v;  // map is key-sorted
  doc["attributes"] = std::move(attrs);
  return doc.dump();
}

std::string Commit::compute_id() const { return to_hex(sha256(canonical_json())); }

Commit Commit::from_json(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const std::exception& e) {
    fail(Errc::validation, std::string("bad commit json: ") + e.what());
  }
  Commit c;
  c.dataset = doc.at("dataset").get<std::string>();
  c.manifest_id = doc.at("manifest").get<std::string>();
  c.parents = doc.at("parents").get<std::vector<std::string>>();
  c.author = doc.at("author").get<std::string>();
  c.timestamp = doc.at("timestamp").get<int64_t>();
  c.message = doc.at("message").get<std::string>();
  for (const auto& [k, v] : doc.at("attributes").items())
    c.attributes[k] = v.get<std::string>();
  c.commit_id = c.compute_id();
  return c;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
              (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void require_valid_name(const std::string& kind, const std::string& s) {
  if (!valid_name(s))
    fail(Errc::validation, "invalid " + kind + " name: '" + s + "'");
}

}  // namespace dsr
