#pragma once

// Runtime substitution of named entries in host plotting namespaces, with
// exact restoration of the original callables.

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "plotmorph/error.hpp"
#include "plotmorph/host.hpp"

namespace plotmorph::intercept {

// Namespace paths of the supported host APIs and the functions replaced in
// each. Adapting to a different host layout means editing this table only.
struct TargetTable {
  std::string_view namespace_path;
  std::vector<std::string_view> functions;
};

inline const std::vector<TargetTable>& default_targets() {
  static const std::vector<TargetTable> table = {
      {"sc.pl",
       {"embedding", "pca", "umap", "tsne", "scatter", "spatial", "dotplot", "heatmap", "violin"}},
      {"sdata.pl", {"render_images", "render_shapes", "render_points", "render_labels"}},
  };
  return table;
}

struct PatchRecord {
  std::string target_path;
  host::Callable original;
  host::Callable replacement;
  bool applied = false;

  std::shared_ptr<host::Namespace> owner;
  std::string attribute;
};

enum class PatchState { Active, Inactive };

struct PatchReport {
  std::string target_path;
  ErrorCode code;
  std::string message;
};

class PatchSet {
 public:
  const std::vector<PatchRecord>& records() const { return records_; }
  std::vector<PatchRecord>& records() { return records_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // ACTIVE exactly when every record is applied.
  PatchState state() const {
    for (const auto& r : records_) {
      if (!r.applied) return PatchState::Inactive;
    }
    return PatchState::Active;
  }

  const PatchRecord* find(std::string_view target_path) const {
    for (const auto& r : records_) {
      if (r.target_path == target_path) return &r;
    }
    return nullptr;
  }

  // Rejects duplicate target paths.
  void add(PatchRecord record) {
    if (find(record.target_path)) {
      throw Error(ErrorCode::InvalidArgument, "duplicate patch target " + record.target_path);
    }
    records_.push_back(std::move(record));
  }

  void warn(std::string message) { warnings_.push_back(std::move(message)); }

 private:
  std::vector<PatchRecord> records_;
  std::vector<std::string> warnings_;
};

// Builds the substitute for one target from its original callable. The
// result must accept every call the original accepts.
using ReplacementFactory =
    std::function<host::Callable(const std::string& target_path, const host::Callable& original)>;

inline PatchSet build_patchset(const host::NamespaceMap& namespaces,
                               const std::vector<TargetTable>& targets,
                               const ReplacementFactory& make_replacement) {
  PatchSet ps;
  for (const auto& table : targets) {
    auto ns_it = namespaces.find(std::string(table.namespace_path));
    if (ns_it == namespaces.end() || !ns_it->second) {
      if (!namespaces.empty()) ps.warn("namespace " + std::string(table.namespace_path) + " not found; skipped");
      continue;
    }
    for (auto fn : table.functions) {
      std::string target_path = std::string(table.namespace_path) + "." + std::string(fn);
      auto original = ns_it->second->get(std::string(fn));
      if (!original) {
        ps.warn(target_path + " not present in host; skipped");
        continue;
      }
      auto replacement = make_replacement(target_path, original);
      if (!replacement || !replacement->signature.accepts_all_of(original->signature)) {
        ps.warn(target_path + " replacement does not accept the original signature; skipped");
        continue;
      }
      ps.add(PatchRecord{target_path, original, std::move(replacement), false, ns_it->second,
                         std::string(fn)});
    }
  }
  return ps;
}

struct ToggleResult {
  std::size_t count = 0;
  std::vector<PatchReport> vanished;
};

// Installs every unapplied replacement. Idempotent.
inline ToggleResult activate(PatchSet& ps) {
  ToggleResult result;
  for (auto& r : ps.records()) {
    if (r.applied) continue;
    if (!r.owner->get(r.attribute)) {
      result.vanished.push_back(
          {r.target_path, ErrorCode::TargetVanished, r.target_path + " no longer resolves"});
      continue;
    }
    r.owner->set(r.attribute, r.replacement);
    r.applied = true;
    ++result.count;
  }
  return result;
}

// Puts every original back, by identity. Idempotent.
inline ToggleResult deactivate(PatchSet& ps) {
  ToggleResult result;
  for (auto& r : ps.records()) {
    if (!r.applied) continue;
    r.applied = false;
    if (!r.owner->get(r.attribute)) {
      result.vanished.push_back(
          {r.target_path, ErrorCode::TargetVanished, r.target_path + " no longer resolves"});
      continue;
    }
    r.owner->set(r.attribute, r.original);
    ++result.count;
  }
  return result;
}

// Runs body with every patch removed, then restores exactly the records
// that were applied before, also when body throws. Main thread only.
template <typename Body>
auto run_static(PatchSet& ps, Body&& body) -> std::invoke_result_t<Body&> {
  std::vector<bool> was_applied;
  was_applied.reserve(ps.records().size());
  for (const auto& r : ps.records()) was_applied.push_back(r.applied);

  struct Restore {
    PatchSet& ps;
    const std::vector<bool>& was_applied;
    ~Restore() {
      auto& records = ps.records();
      for (std::size_t i = 0; i < records.size() && i < was_applied.size(); ++i) {
        auto& r = records[i];
        if (was_applied[i] && !r.applied && r.owner->get(r.attribute)) {
          r.owner->set(r.attribute, r.replacement);
          r.applied = true;
        }
      }
    }
  } restore{ps, was_applied};

  deactivate(ps);
  return std::forward<Body>(body)();
}

}  // namespace plotmorph::intercept
