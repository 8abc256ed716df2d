#include <doctest.h>

#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "dsr/content_store.hpp"
#include "dsr/error.hpp"
#include "dsr/sha256.hpp"
#include "support/helpers.hpp"

using namespace dsr;
using testing::SeededBytes;
using testing::TempDir;

namespace {

struct StoreFixture {
  TempDir dir;
  ContentStore store;
  StoreFixture() : store(dir.path(), ChunkParams{1024, 4096, 16384}) {}
};

size_t store_bytes(const fs::path& dsr_dir) {
  size_t total = 0;
  for (const auto& e : fs::recursive_directory_iterator(dsr_dir / "objects"))
    if (e.is_regular_file()) total += e.file_size();
  return total;
}

}  // namespace

TEST_CASE("put_blob of empty and single-byte streams") {
  StoreFixture f;
  PutResult empty = f.store.put_blob(std::string_view{});
  CHECK(empty.entry.size == 0);
  CHECK(empty.entry.chunks.empty());
  CHECK(empty.entry.file_hash ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

  PutResult a = f.store.put_blob(std::string_view{"a"});
  CHECK(a.entry.size == 1);
  REQUIRE(a.entry.chunks.size() == 1);
  CHECK(a.entry.chunks[0].id ==
        "ca978112ca1bbdcafac231b39a23dc4da786eff8147c4e72b9807785afee48bb");
  CHECK(a.new_chunks == 1);
}

TEST_CASE("re-putting identical bytes stores zero new chunks") {
  StoreFixture f;
  std::string data = SeededBytes(3).bytes(200'000);
  PutResult first = f.store.put_blob(data);
  CHECK(first.new_chunks > 0);
  size_t before = store_bytes(f.dir.path());
  PutResult second = f.store.put_blob(data);
  CHECK(second.new_chunks == 0);
  CHECK(store_bytes(f.dir.path()) == before);
  CHECK(second.entry == first.entry);
}

TEST_CASE("stream and span paths agree") {
  StoreFixture f;
  std::string data = SeededBytes(11).bytes(150'000);
  std::istringstream in(data);
  PutResult streamed = f.store.put_blob(in);
  PutResult spanned = f.store.put_blob(std::string_view(data));
  CHECK(streamed.entry == spanned.entry);
}

TEST_CASE("roundtrip over random sizes up to 8 MiB") {
  StoreFixture f;
  SeededBytes src(99);
  std::mt19937_64 sizes(1212);
  std::vector<size_t> cases = {0, 1, 1023, 1024, 50'000, 500'000};
  for (int i = 0; i < 6; ++i) cases.push_back(sizes() % (8 * 1024 * 1024 + 1));
  for (size_t size : cases) {
    std::string data = src.bytes(size);
    PutResult put = f.store.put_blob(data);
    CHECK(f.store.get_blob(put.entry) == data);
  }
}

TEST_CASE("10 MiB seeded roundtrip with idempotent re-put") {
  StoreFixture f;
  std::string data = SeededBytes(0xB16).bytes(10 * 1024 * 1024);
  PutResult first = f.store.put_blob(data);
  CHECK(f.store.get_blob(first.entry) == data);
  PutResult second = f.store.put_blob(data);
  CHECK(second.new_chunks == 0);
}

TEST_CASE("concurrent put_blob from several threads is safe") {
  StoreFixture f;
  std::string shared = SeededBytes(77).bytes(120'000);
  std::vector<std::thread> threads;
  std::vector<PutResult> results(4);
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&, t] {
      // everyone races the same content plus one private blob
      results[size_t(t)] = f.store.put_blob(shared);
      f.store.put_blob(SeededBytes(100 + uint64_t(t)).bytes(20'000));
    });
  for (auto& th : threads) th.join();
  for (const auto& r : results) CHECK(f.store.get_blob(r.entry) == shared);
  // every stored object hashes to its name
  f.store.objects().for_each([&](const ChunkId& id) {
    CHECK(to_hex(sha256(f.store.objects().get(id))) == id);
  });
}

TEST_CASE("missing chunk is corruption, tampered list is integrity") {
  StoreFixture f;
  std::string data = SeededBytes(5).bytes(60'000);
  PutResult put = f.store.put_blob(data);
  REQUIRE(put.entry.chunks.size() >= 2);

  FileEntry missing = put.entry;
  missing.chunks[0].id = to_hex(sha256("not stored"));
  CHECK_THROWS_WITH_AS(f.store.get_blob(missing),
                       doctest::Contains("missing chunk"), Error);
  try {
    f.store.get_blob(missing);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::corruption);
    CHECK(std::string(e.what()).find(missing.chunks[0].id) != std::string::npos);
  }

  // swap one id for another chunk that IS stored: content assembles but the
  // file hash no longer matches
  FileEntry tampered = put.entry;
  tampered.chunks[0].id = put.entry.chunks[1].id;
  tampered.chunks[0].length = put.entry.chunks[1].length;
  try {
    f.store.get_blob(tampered);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::integrity);
  }
}

TEST_CASE("manifest io verifies hashes") {
  StoreFixture f;
  Manifest m;
  PutResult put = f.store.put_blob(std::string_view{"content"});
  put.entry.path = "x.txt";
  m.entries.push_back(put.entry);
  std::string id = f.store.write_manifest(m);
  CHECK(f.store.read_manifest(id) == m);
  CHECK_THROWS_AS(f.store.read_manifest(to_hex(sha256("nope"))), Error);
}

TEST_CASE("gc retains reachable, deletes unreachable, is idempotent") {
  StoreFixture f;
  std::string shared = SeededBytes(21).bytes(40'000);
  std::string unique = SeededBytes(22).bytes(40'000);

  Manifest keep;
  PutResult a = f.store.put_blob(shared);
  a.entry.path = "a";
  keep.entries.push_back(a.entry);
  std::string keep_id = f.store.write_manifest(keep);

  Manifest drop;
  PutResult a2 = f.store.put_blob(shared);
  a2.entry.path = "a";
  PutResult b = f.store.put_blob(unique);
  b.entry.path = "b";
  drop.entries = {a2.entry, b.entry};
  f.store.write_manifest(drop);

  // brute-force reachability oracle over the live manifest
  std::set<std::string> live;
  for (const auto& e : keep.entries)
    for (const auto& c : e.chunks) live.insert(c.id);

  FileLock lock(f.dir.path() / "locks" / "repo.lock");
  GcReport r1 = f.store.gc(lock, {keep_id});
  CHECK(r1.deleted > 0);

  std::set<std::string> surviving;
  f.store.objects().for_each([&](const ChunkId& id) { surviving.insert(id); });
  CHECK(surviving == live);
  CHECK(f.store.get_blob(a.entry) == shared);

  GcReport r2 = f.store.gc(lock, {keep_id});
  CHECK(r2.deleted == 0);

  GcReport r3 = f.store.gc(lock, {});
  CHECK(r3.deleted == live.size());
  size_t remaining = 0;
  f.store.objects().for_each([&](const ChunkId&) { ++remaining; });
  CHECK(remaining == 0);
}

TEST_CASE("gc without the repository lock is refused") {
  StoreFixture f;
  FileLock lock(f.dir.path() / "locks" / "repo.lock");
  FileLock taken(std::move(lock));  // `lock` no longer holds the flock
  try {
    f.store.gc(lock, {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::conflict);
  }
}

TEST_CASE("dedup bound: N copies cost about one copy") {
  StoreFixture f;
  std::string data = SeededBytes(31).bytes(300'000);
  f.store.put_blob(data);
  size_t one = store_bytes(f.dir.path());
  for (int i = 0; i < 9; ++i) f.store.put_blob(data);
  CHECK(store_bytes(f.dir.path()) == one);
}
