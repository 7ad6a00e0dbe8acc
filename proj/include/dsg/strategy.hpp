#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "dsg/belief.hpp"

namespace dsg {

struct VecHash {
  size_t operator()(const std::vector<long long>& v) const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (long long x : v) {
      h ^= static_cast<uint64_t>(x);
      h *= 0x100000001b3ULL;
    }
    return static_cast<size_t>(h);
  }
};

// A behavioral strategy for one player. Table strategies are the faithful
// finite encoding of history-dependent play; the rule kinds (uniform,
// belief-stationary, abstract-state table) are shift-invariant.
//
// Queries off a table's domain fall back to the uniform mixture; that is the
// concrete choice for behavior on histories the play never reaches.
struct Strategy {
  enum class Kind { Uniform, HistoryTable, AbstractTable, BeliefStationary };

  Kind kind = Kind::Uniform;
  int num_actions = 0;
  std::map<History, std::vector<double>> table;  // Kind::HistoryTable
  std::unordered_map<std::vector<long long>, std::vector<double>, VecHash>
      abstract_table;  // Kind::AbstractTable, keyed by abstract-state key
  std::function<std::vector<double>(const Belief&)> rule;  // Kind::BeliefStationary

  static Strategy uniform(int num_actions);
  static Strategy history_table(int num_actions, std::map<History, std::vector<double>> table);
  static Strategy belief_stationary(int num_actions,
                                    std::function<std::vector<double>(const Belief&)> rule);
  static Strategy abstract_table(
      int num_actions,
      std::unordered_map<std::vector<long long>, std::vector<double>, VecHash> table);

  // Mixture for a query context. `rel_history` is relative to the strategy's
  // current root; `belief` feeds belief-stationary rules, `abstract_key`
  // feeds abstract-state tables (either may be null when not applicable).
  std::vector<double> mixture(const History& rel_history, const Belief* belief,
                              const std::vector<long long>* abstract_key) const;

  std::vector<double> uniform_mixture() const;
};

// Continuation of a strategy after the prefix h: table strategies are
// re-rooted (entries with prefix h keep their suffixes), rule strategies are
// returned unchanged.
Strategy shift_strategy(const Strategy& sigma, const History& h);

}  // namespace dsg
