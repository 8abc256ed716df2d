#include "dsr/sha256.hpp"

#include <openssl/evp.h>

#include "dsr/error.hpp"

namespace dsr {

// fetched once: per-init implicit fetches are a known OpenSSL 3 hot spot
static const EVP_MD* sha256_md() {
  static const EVP_MD* md = EVP_MD_fetch(nullptr, "SHA2-256", nullptr);
  return md;
}

Sha256::Sha256() {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, sha256_md(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    fail(Errc::io, "sha256 init failed");
  }
  ctx_ = ctx;
}

Sha256::~Sha256() {
  if (ctx_) EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_));
}

void Sha256::update(const void* data, size_t len) {
  if (EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data, len) != 1)
    fail(Errc::io, "sha256 update failed");
}

Digest Sha256::finish() {
  Digest out{};
  unsigned int n = 0;
  if (EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), out.data(), &n) != 1 ||
      n != out.size())
    fail(Errc::io, "sha256 final failed");
  return out;
}

Digest sha256(const void* data, size_t len) {
  Sha256 h;
  h.update(data, len);
  return h.finish();
}

Digest sha256(std::string_view data) { return sha256(data.data(), data.size()); }

std::string to_hex(const Digest& d) {
  static const char* digits = "0123456789abcdef";
  std::string s(64, '0');
  for (size_t i = 0; i < d.size(); ++i) {
    s[2 * i] = digits[d[i] >> 4];
    s[2 * i + 1] = digits[d[i] & 0xf];
  }
  return s;
}

bool is_hex_id(std::string_view s) {
  if (s.size() != 64) return false;
  for (char c : s)
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  return true;
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::usage: return "USAGE";
    case Errc::validation: return "VALIDATION";
    case Errc::permission_denied: return "PERMISSION_DENIED";
    case Errc::not_found: return "NOT_FOUND";
    case Errc::no_match: return "NO_MATCH";
    case Errc::ambiguous_query: return "AMBIGUOUS_QUERY";
    case Errc::empty_commit: return "EMPTY_COMMIT";
    case Errc::revoked_data: return "REVOKED_DATA";
    case Errc::conflict: return "CONFLICT";
    case Errc::corruption: return "CORRUPTION";
    case Errc::integrity: return "INTEGRITY";
    case Errc::wrong_state: return "WRONG_STATE";
    case Errc::duplicate: return "DUPLICATE";
    case Errc::io: return "IO";
  }
  return "UNKNOWN";
}

}  // namespace dsr
