#pragma once

#include <string>

namespace dsr {

// 26-char Crockford base32 id: 48-bit millisecond timestamp then 80 random
// bits. Lexicographic order follows creation time.
std::string new_ulid();

bool looks_like_ulid(const std::string& s);

}  // namespace dsr
