#include "dsr/manifest.hpp"

#include <nlohmann/json.hpp>

#include "dsr/error.hpp"
#include "dsr/fs_util.hpp"
#include "dsr/sha256.hpp"

namespace dsr {

using ojson = nlohmann::ordered_json;

void FileEntry::validate() const {
  validate_repo_path(path);
  if (!is_hex_id(file_hash))
    fail(Errc::validation, "bad file hash for " + path);
  uint64_t total = 0;
  for (const auto& c : chunks) {
    if (!is_hex_id(c.id)) fail(Errc::validation, "bad chunk id in " + path);
    total += c.length;
  }
  if (total != size)
    fail(Errc::validation, "chunk lengths do not sum to size for " + path);
  if ((size == 0) != chunks.empty())
    fail(Errc::validation, "zero size must mean zero chunks: " + path);
}

std::string Manifest::canonical_json() const {
  ojson entries_json = ojson::array();
  for (const auto& e : entries) {
    ojson chunks = ojson::array();
    for (const auto& c : e.chunks) chunks.push_back({c.id, c.length});
    ojson entry;
    entry["path"] = e.path;
    entry["size"] = e.size;
    entry["file_hash"] = e.file_hash;
    entry["chunks"] = std::move(chunks);
    entries_json.push_back(std::move(entry));
  }
  ojson doc;
  doc["entries"] = std::move(entries_json);
  return doc.dump();
}

std::string Manifest::id() const { return to_hex(sha256(canonical_json())); }

Manifest Manifest::from_json(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const std::exception& e) {
    fail(Errc::validation, std::string("bad manifest json: ") + e.what());
  }
  Manifest m;
  for (const auto& entry : doc.at("entries")) {
    FileEntry fe;
    fe.path = entry.at("path").get<std::string>();
    fe.size = entry.at("size").get<uint64_t>();
    fe.file_hash = entry.at("file_hash").get<std::string>();
    for (const auto& c : entry.at("chunks"))
      fe.chunks.push_back({c.at(0).get<std::string>(), c.at(1).get<uint64_t>()});
    m.entries.push_back(std::move(fe));
  }
  return m;
}

const FileEntry* Manifest::find(const std::string& path) const {
  for (const auto& e : entries)
    if (e.path == path) return &e;
  return nullptr;
}

void Manifest::validate() const {
  const std::string* prev = nullptr;
  for (const auto& e : entries) {
    e.validate();
    if (prev && !(*prev < e.path))
      fail(Errc::validation, "manifest entries not sorted/unique at " + e.path);
    prev = &e.path;
  }
}

}  // namespace dsr
