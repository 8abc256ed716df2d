#include "dsr/content_store.hpp"

#include <fstream>
#include <istream>

#include "dsr/error.hpp"
#include "dsr/sha256.hpp"

namespace dsr {

ObjectStore::ObjectStore(fs::path store_dir, fs::path staging_dir)
    : dir_(std::move(store_dir)), staging_(std::move(staging_dir)) {}

fs::path ObjectStore::object_path(const ChunkId& id) const {
  return dir_ / id.substr(0, 2) / id.substr(2);
}

bool ObjectStore::has(const ChunkId& id) const {
  std::error_code ec;
  return fs::exists(object_path(id), ec);
}

bool ObjectStore::put(const ChunkId& id, std::string_view bytes) {
  if (has(id)) return false;
  // no fsync: like git loose objects, a chunk is verified by name on read
  // and a killed writer leaves only staging temps, never a partial object
  atomic_write_file(object_path(id), bytes, staging_, /*durable=*/false);
  return true;
}

std::string ObjectStore::get(const ChunkId& id) const {
  auto data = read_file_if_exists(object_path(id));
  if (!data) fail(Errc::corruption, "missing chunk " + id);
  return std::move(*data);
}

void ObjectStore::for_each(const std::function<void(const ChunkId&)>& fn) const {
  std::error_code ec;
  if (!fs::exists(dir_, ec)) return;
  for (const auto& fan : fs::directory_iterator(dir_)) {
    if (!fan.is_directory()) continue;
    for (const auto& obj : fs::directory_iterator(fan.path()))
      fn(fan.path().filename().string() + obj.path().filename().string());
  }
}

void ObjectStore::remove(const ChunkId& id) {
  std::error_code ec;
  fs::remove(object_path(id), ec);
  if (ec) fail(Errc::io, "cannot remove chunk " + id);
}

ContentStore::ContentStore(fs::path dsr_dir, ChunkParams params)
    : dsr_dir_(std::move(dsr_dir)),
      params_(params),
      objects_(dsr_dir_ / "objects", dsr_dir_ / "tmp") {
  params_.validate();
}

PutResult ContentStore::put_blob(std::istream& in) {
  PutResult result;
  Sha256 file_hash;
  std::string buf;
  size_t cursor = 0;  // consumed prefix; compacted when it grows large
  bool eof = false;

  // Keep at least max_size bytes buffered past the cursor (unless at EOF)
  // so next_chunk_len always sees the whole candidate range.
  auto refill = [&] {
    if (cursor > params_.max_size) {
      buf.erase(0, cursor);
      cursor = 0;
    }
    while (!eof && buf.size() - cursor < params_.max_size + 1) {
      char block[64 * 1024];
      in.read(block, sizeof block);
      std::streamsize n = in.gcount();
      if (n > 0) buf.append(block, size_t(n));
      if (!in.good()) {
        if (in.bad()) fail(Errc::io, "stream read failed");
        eof = true;
      }
    }
  };

  refill();
  while (cursor < buf.size()) {
    size_t n = next_chunk_len(reinterpret_cast<const uint8_t*>(buf.data()) + cursor,
                              buf.size() - cursor, params_);
    std::string_view chunk(buf.data() + cursor, n);
    ChunkId id = to_hex(sha256(chunk.data(), chunk.size()));
    if (objects_.put(id, chunk)) ++result.new_chunks;
    file_hash.update(chunk.data(), chunk.size());
    result.entry.chunks.push_back({std::move(id), n});
    result.entry.size += n;
    cursor += n;
    refill();
  }

  result.entry.file_hash = to_hex(file_hash.finish());
  return result;
}

PutResult ContentStore::put_blob(std::string_view bytes) {
  PutResult result;
  auto spans = chunk_boundaries(reinterpret_cast<const uint8_t*>(bytes.data()),
                                bytes.size(), params_);
  for (const auto& s : spans) {
    std::string_view chunk = bytes.substr(s.offset, s.length);
    ChunkId id = to_hex(sha256(chunk.data(), chunk.size()));
    if (objects_.put(id, chunk)) ++result.new_chunks;
    result.entry.chunks.push_back({std::move(id), s.length});
  }
  result.entry.size = bytes.size();
  result.entry.file_hash = to_hex(sha256(bytes));
  return result;
}

PutResult ContentStore::put_file(const fs::path& file) {
  std::error_code ec;
  uint64_t size = fs::file_size(file, ec);
  // whole-read under 2*max (what the streaming path would buffer anyway)
  if (!ec && size <= 2 * params_.max_size) return put_blob(read_file(file));
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + file.string());
  return put_blob(in);
}

std::string ContentStore::get_blob(const FileEntry& entry) const {
  std::string out;
  out.reserve(entry.size);
  for (const auto& c : entry.chunks) out += objects_.get(c.id);
  if (out.size() != entry.size || to_hex(sha256(out)) != entry.file_hash)
    fail(Errc::integrity,
         "assembled content does not match file hash " + entry.file_hash);
  return out;
}

void ContentStore::get_blob_to_file(const FileEntry& entry,
                                    const fs::path& dest) const {
  std::error_code ec;
  fs::create_directories(dest.parent_path(), ec);
  Sha256 hash;
  uint64_t total = 0;
  std::ofstream out(dest, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io, "cannot create " + dest.string());
  for (const auto& c : entry.chunks) {
    std::string chunk = objects_.get(c.id);
    hash.update(chunk.data(), chunk.size());
    total += chunk.size();
    out.write(chunk.data(), std::streamsize(chunk.size()));
  }
  out.close();
  if (!out || total != entry.size || to_hex(hash.finish()) != entry.file_hash) {
    fs::remove(dest, ec);
    fail(Errc::integrity,
         "assembled content does not match file hash " + entry.file_hash);
  }
}

std::string ContentStore::write_manifest(const Manifest& m) {
  std::string body = m.canonical_json();
  std::string id = to_hex(sha256(body));
  fs::path p = dsr_dir_ / "manifests" / (id + ".json");
  std::error_code ec;
  if (!fs::exists(p, ec)) atomic_write_file(p, body, dsr_dir_ / "tmp");
  return id;
}

Manifest ContentStore::read_manifest(const std::string& manifest_id) const {
  auto body = read_file_if_exists(dsr_dir_ / "manifests" / (manifest_id + ".json"));
  if (!body) fail(Errc::not_found, "unknown manifest " + manifest_id);
  if (to_hex(sha256(*body)) != manifest_id)
    fail(Errc::integrity, "manifest " + manifest_id + " fails its hash");
  return Manifest::from_json(*body);
}

bool ContentStore::has_manifest(const std::string& manifest_id) const {
  std::error_code ec;
  return fs::exists(dsr_dir_ / "manifests" / (manifest_id + ".json"), ec);
}

GcReport ContentStore::gc(const FileLock& repo_lock,
                          const std::set<std::string>& live_manifest_ids) {
  if (!repo_lock.held())
    fail(Errc::conflict, "gc requires the exclusive repository lock");

  std::set<ChunkId> live;
  for (const auto& mid : live_manifest_ids) {
    Manifest m = read_manifest(mid);
    for (const auto& e : m.entries)
      for (const auto& c : e.chunks) live.insert(c.id);
  }

  GcReport report;
  std::vector<ChunkId> dead;
  objects_.for_each([&](const ChunkId& id) {
    ++report.scanned;
    if (live.count(id))
      ++report.retained;
    else
      dead.push_back(id);
  });
  for (const auto& id : dead) {
    objects_.remove(id);
    ++report.deleted;
  }
  return report;
}

}  // namespace dsr
