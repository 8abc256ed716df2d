#include "dsr/ulid.hpp"

#include <chrono>
#include <cstdint>
#include <random>

namespace dsr {

static const char* kAlphabet = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";

std::string new_ulid() {
  uint64_t ms = uint64_t(std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::system_clock::now().time_since_epoch())
                             .count());
  static thread_local std::mt19937_64 rng(std::random_device{}());
  uint64_t r1 = rng(), r2 = rng();

  // 128-bit value: ms in the top 48 bits, randomness below.
  uint8_t bytes[16];
  for (int i = 0; i < 6; ++i) bytes[i] = uint8_t(ms >> (8 * (5 - i)));
  for (int i = 0; i < 8; ++i) bytes[6 + i] = uint8_t(r1 >> (8 * i));
  bytes[14] = uint8_t(r2);
  bytes[15] = uint8_t(r2 >> 8);

  // 26 base32 chars cover 130 bits; the leading char carries only 2.
  std::string out(26, '0');
  int bitpos = -2;  // start 2 bits "early" so 26*5 == 130 maps onto 128
  for (int i = 0; i < 26; ++i) {
    int value = 0;
    for (int b = 0; b < 5; ++b) {
      int bit = bitpos + i * 5 + b;
      int byte = bit >> 3;
      value <<= 1;
      if (bit >= 0 && byte < 16) value |= (bytes[byte] >> (7 - (bit & 7))) & 1;
    }
    out[size_t(i)] = kAlphabet[value];
  }
  return out;
}

bool looks_like_ulid(const std::string& s) {
  if (s.size() != 26) return false;
  for (char c : s)
    if (!((c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z' && c != 'I' &&
                                     c != 'L' && c != 'O' && c != 'U')))
      return false;
  return true;
}

}  // namespace dsr
