#include "dsr/chunker.hpp"

#include <algorithm>

#include "dsr/error.hpp"

namespace dsr {

static bool is_pow2(size_t v) { return v != 0 && (v & (v - 1)) == 0; }

void ChunkParams::validate() const {
  if (min_size == 0 || min_size > avg_size || avg_size > max_size)
    fail(Errc::validation, "chunk params must satisfy 0 < min <= avg <= max");
  if (!is_pow2(avg_size))
    fail(Errc::validation, "avg chunk size must be a power of two");
}

uint64_t ChunkParams::mask() const {
  int bits = 0;
  for (size_t v = avg_size; v > 1; v >>= 1) ++bits;
  bits -= 1;
  if (bits <= 0) return 0;
  return ~uint64_t{0} << (64 - bits);
}

size_t next_chunk_len(const uint8_t* data, size_t len, const ChunkParams& params) {
  const size_t min = params.min_size;
  const size_t max = params.max_size;
  if (len <= min) return len;

  const uint64_t mask = params.mask();
  uint64_t fp = 0;

  // Prime the fingerprint over the window preceding the first candidate
  // cut, so the decision at any position depends only on the previous
  // kGearWindow bytes. That is what makes boundaries resynchronize after
  // an insertion.
  size_t prime_from = min > kGearWindow ? min - kGearWindow : 0;
  for (size_t i = prime_from; i < min; ++i)
    fp = (fp << 1) + kGearTable[data[i]];

  const size_t limit = std::min(len, max);
  for (size_t pos = min; pos < limit; ++pos) {
    if ((fp & mask) == 0) return pos;
    fp = (fp << 1) + kGearTable[data[pos]];
  }
  return limit;
}

std::vector<ChunkSpan> chunk_boundaries(const uint8_t* data, size_t len,
                                        const ChunkParams& params) {
  params.validate();
  std::vector<ChunkSpan> out;
  size_t pos = 0;
  while (pos < len) {
    size_t n = next_chunk_len(data + pos, len - pos, params);
    out.push_back({pos, n});
    pos += n;
  }
  return out;
}

}  // namespace dsr
