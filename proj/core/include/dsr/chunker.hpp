#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dsr {

// Gear rolling hash lookup table. Entry i is the first 8 bytes, big-endian,
// of SHA-256 of the single byte i. See docs/chunking.md for the full table;
// it is fixed so that boundaries are reproducible across implementations.
extern const uint64_t kGearTable[256];

// Number of preceding bytes that can influence a cut decision. A gear value
// shifts left once per byte, so after 64 updates it has no residue.
inline constexpr size_t kGearWindow = 64;

struct ChunkParams {
  size_t min_size = 256 * 1024;
  size_t avg_size = 1024 * 1024;        // must be a power of two
  size_t max_size = 4 * 1024 * 1024;

  // Throws Errc::validation unless 0 < min <= avg <= max and avg is a
  // power of two.
  void validate() const;

  // Cut test succeeds when the masked fingerprint bits are all zero.
  // The mask keeps the top log2(avg)-1 bits: those see the full 64-byte
  // window, and the resulting mean chunk length lands near min + avg/2.
  uint64_t mask() const;
};

struct ChunkSpan {
  size_t offset;
  size_t length;
  bool operator==(const ChunkSpan&) const = default;
};

// Length of the first chunk of a region. `len` must cover the region up to
// EOF or at least `max_size` bytes. Pure function of (bytes, params).
size_t next_chunk_len(const uint8_t* data, size_t len, const ChunkParams& params);

// Exact partition of `data`. Every non-final chunk length is in [min, max];
// the final chunk may be shorter than min. Empty input yields no chunks.
std::vector<ChunkSpan> chunk_boundaries(const uint8_t* data, size_t len,
                                        const ChunkParams& params);

}  // namespace dsr
