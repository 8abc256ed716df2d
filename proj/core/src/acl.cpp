#include "dsr/acl.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "dsr/commit.hpp"
#include "dsr/error.hpp"
#include "dsr/repo.hpp"

namespace dsr {

using ojson = nlohmann::ordered_json;

const char* role_name(Role r) {
  switch (r) {
    case Role::reader: return "reader";
    case Role::writer: return "writer";
    case Role::admin: return "admin";
  }
  return "?";
}

std::optional<Role> role_from_name(const std::string& s) {
  if (s == "reader") return Role::reader;
  if (s == "writer") return Role::writer;
  if (s == "admin") return Role::admin;
  return std::nullopt;
}

static Role required_role(Action a) {
  switch (a) {
    case Action::read: return Role::reader;
    case Action::write: return Role::writer;
    case Action::admin: return Role::admin;
  }
  return Role::admin;
}

static const char* action_name(Action a) {
  switch (a) {
    case Action::read: return "read";
    case Action::write: return "write";
    case Action::admin: return "admin";
  }
  return "?";
}

std::optional<Role> AclTable::effective_role(const std::string& principal,
                                             const std::string& dataset) const {
  std::optional<Role> best;
  for (const auto& e : entries) {
    if (e.principal != principal) continue;
    if (e.dataset != dataset && e.dataset != "*") continue;
    if (!best || e.role > *best) best = e.role;
  }
  return best;
}

Decision AclTable::authorize(const std::string& principal, Action action,
                             const std::string& dataset) const {
  auto role = effective_role(principal, dataset);
  if (!role)
    return {false, "principal '" + principal + "' has no role on dataset '" +
                       dataset + "'"};
  if (*role < required_role(action))
    return {false, "principal '" + principal + "' holds role " +
                       role_name(*role) + " on '" + dataset + "' but " +
                       action_name(action) + " requires " +
                       role_name(required_role(action))};
  return {true, ""};
}

void AclTable::put(const AclEntry& entry) {
  for (auto& e : entries) {
    if (e.principal == entry.principal && e.dataset == entry.dataset) {
      e.role = entry.role;
      return;
    }
  }
  entries.push_back(entry);
}

std::optional<AclEntry> AclTable::remove(const std::string& principal,
                                         const std::string& dataset) {
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    if (it->principal == principal && it->dataset == dataset) {
      AclEntry removed = *it;
      entries.erase(it);
      return removed;
    }
  }
  return std::nullopt;
}

AclTable load_acl(const Repo& repo) {
  auto body = read_file_if_exists(repo.dsr_dir() / "acl.json");
  AclTable table;
  if (!body) return table;
  ojson doc = ojson::parse(*body);
  for (const auto& e : doc.at("entries")) {
    auto role = role_from_name(e.at("role").get<std::string>());
    if (!role) fail(Errc::validation, "bad role in acl.json");
    table.entries.push_back({e.at("principal").get<std::string>(),
                             e.at("dataset").get<std::string>(), *role});
  }
  return table;
}

void save_acl(const Repo& repo, const AclTable& table) {
  AclTable sorted = table;
  std::sort(sorted.entries.begin(), sorted.entries.end(),
            [](const AclEntry& a, const AclEntry& b) {
              return std::tie(a.principal, a.dataset) <
                     std::tie(b.principal, b.dataset);
            });
  ojson arr = ojson::array();
  for (const auto& e : sorted.entries) {
    ojson entry;
    entry["principal"] = e.principal;
    entry["dataset"] = e.dataset;
    entry["role"] = role_name(e.role);
    arr.push_back(std::move(entry));
  }
  ojson doc;
  doc["entries"] = std::move(arr);
  atomic_write_file(repo.dsr_dir() / "acl.json", doc.dump(),
                    repo.staging_dir());
}

void require_access(const Repo& repo, const std::string& principal,
                    Action action, const std::string& dataset) {
  Decision d = load_acl(repo).authorize(principal, action, dataset);
  if (!d.allowed) fail(Errc::permission_denied, d.reason);
}

AclEntry grant(Repo& repo, const std::string& admin_principal,
               const std::string& target_principal, const std::string& dataset,
               Role role) {
  require_valid_name("principal", target_principal);
  if (dataset != "*") require_valid_name("dataset", dataset);
  require_access(repo, admin_principal, Action::admin, dataset);
  FileLock lock = repo.lock_repo();
  AclTable table = load_acl(repo);
  AclEntry entry{target_principal, dataset, role};
  table.put(entry);
  save_acl(repo, table);
  return entry;
}

std::optional<AclEntry> revoke_grant(Repo& repo,
                                     const std::string& admin_principal,
                                     const std::string& target_principal,
                                     const std::string& dataset) {
  require_access(repo, admin_principal, Action::admin, dataset);
  FileLock lock = repo.lock_repo();
  AclTable table = load_acl(repo);
  auto removed = table.remove(target_principal, dataset);
  if (removed) save_acl(repo, table);
  return removed;
}

}  // namespace dsr
