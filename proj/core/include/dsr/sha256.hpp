#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace dsr {

using Digest = std::array<uint8_t, 32>;

// Incremental SHA-256 over OpenSSL's EVP interface.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, size_t len);
  Digest finish();

 private:
  void* ctx_;
};

Digest sha256(const void* data, size_t len);
Digest sha256(std::string_view data);

std::string to_hex(const Digest& d);

// Accepts exactly 64 lowercase hex chars.
bool is_hex_id(std::string_view s);

}  // namespace dsr
