#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "solmine/group_algorithms.hpp"

namespace solmine::detail {

// Lazily derived facts about one group. Each slot is filled at most once
// under the mutex; readers get references that stay valid for the cache's
// lifetime.
struct GroupCache {
  std::recursive_mutex mutex;
  std::optional<std::vector<ConjugacyClass>> classes;
  std::optional<std::vector<PermGroup>> normal_subgroups;
  std::shared_ptr<const SubgroupLattice> lattice;
  std::optional<PermGroup> radical;
};

}  // namespace solmine::detail
