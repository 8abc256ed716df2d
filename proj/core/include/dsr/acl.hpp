#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dsr {

class Repo;

// Roles are totally ordered: writer implies reader, admin implies both.
enum class Role { reader = 1, writer = 2, admin = 3 };

enum class Action { read, write, admin };

const char* role_name(Role r);
std::optional<Role> role_from_name(const std::string& s);

struct AclEntry {
  std::string principal;
  std::string dataset;  // a dataset name or "*" for repository-wide
  Role role;
  bool operator==(const AclEntry&) const = default;
};

struct Decision {
  bool allowed = false;
  std::string reason;
};

// Default-deny table; at most one entry per (principal, dataset) pair.
struct AclTable {
  std::vector<AclEntry> entries;

  // Effective role = max(dataset entry, "*" entry); no entry means deny.
  Decision authorize(const std::string& principal, Action action,
                     const std::string& dataset) const;
  std::optional<Role> effective_role(const std::string& principal,
                                     const std::string& dataset) const;

  // Overwrites any existing entry for the pair.
  void put(const AclEntry& entry);
  // Returns the removed entry, or nullopt if none existed (idempotent).
  std::optional<AclEntry> remove(const std::string& principal,
                                 const std::string& dataset);
};

AclTable load_acl(const Repo& repo);
void save_acl(const Repo& repo, const AclTable& table);

// Throws Errc::permission_denied unless allowed.
void require_access(const Repo& repo, const std::string& principal,
                    Action action, const std::string& dataset);

// grant/revoke_grant require `admin_principal` to hold admin on the dataset
// (or on "*"). Grants may precede dataset creation.
AclEntry grant(Repo& repo, const std::string& admin_principal,
               const std::string& target_principal, const std::string& dataset,
               Role role);
std::optional<AclEntry> revoke_grant(Repo& repo,
                                     const std::string& admin_principal,
                                     const std::string& target_principal,
                                     const std::string& dataset);

}  // namespace dsr
