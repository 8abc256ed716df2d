#include <doctest.h>

#include "dsr/sha256.hpp"

using namespace dsr;

TEST_CASE("sha256 known vectors") {
  // Values cross-checked with `printf ... | sha256sum`.
  CHECK(to_hex(sha256("")) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(to_hex(sha256("a")) ==
        "ca978112ca1bbdcafac231b39a23dc4da786eff8147c4e72b9807785afee48bb");
  CHECK(to_hex(sha256("abc")) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("sha256 incremental equals one-shot") {
  std::string data(100000, 'x');
  for (size_t i = 0; i < data.size(); ++i) data[i] = char(i * 31 + 7);
  Sha256 h;
  h.update(data.data(), 1000);
  h.update(data.data() + 1000, data.size() - 1000);
  CHECK(to_hex(h.finish()) == to_hex(sha256(data)));
}

TEST_CASE("hex rendering is 64 lowercase chars") {
  std::string hex = to_hex(sha256("anything"));
  CHECK(hex.size() == 64);
  CHECK(is_hex_id(hex));
  CHECK(!is_hex_id("ABCD"));
  CHECK(!is_hex_id(std::string(64, 'G')));
  CHECK(!is_hex_id(hex.substr(1)));
}
