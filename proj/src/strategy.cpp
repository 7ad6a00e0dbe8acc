#include "dsg/strategy.hpp"

#include <stdexcept>

namespace dsg {

Strategy Strategy::uniform(int num_actions) {
  Strategy s;
  s.kind = Kind::Uniform;
  s.num_actions = num_actions;
  return s;
}

Strategy Strategy::history_table(int num_actions, std::map<History, std::vector<double>> table) {
  Strategy s;
  s.kind = Kind::HistoryTable;
  s.num_actions = num_actions;
  s.table = std::move(table);
  return s;
}

Strategy Strategy::belief_stationary(int num_actions,
                                     std::function<std::vector<double>(const Belief&)> rule) {
  Strategy s;
  s.kind = Kind::BeliefStationary;
  s.num_actions = num_actions;
  s.rule = std::move(rule);
  return s;
}

Strategy Strategy::abstract_table(
    int num_actions, std::unordered_map<std::vector<long long>, std::vector<double>, VecHash> table) {
  Strategy s;
  s.kind = Kind::AbstractTable;
  s.num_actions = num_actions;
  s.abstract_table = std::move(table);
  return s;
}

std::vector<double> Strategy::uniform_mixture() const {
  return std::vector<double>(num_actions, 1.0 / num_actions);
}

std::vector<double> Strategy::mixture(const History& rel_history, const Belief* belief,
                                      const std::vector<long long>* abstract_key) const {
  switch (kind) {
    case Kind::Uniform:
      return uniform_mixture();
    case Kind::HistoryTable: {
      auto it = table.find(rel_history);
      return it != table.end() ? it->second : uniform_mixture();
    }
    case Kind::AbstractTable: {
      if (abstract_key == nullptr) return uniform_mixture();
      auto it = abstract_table.find(*abstract_key);
      return it != abstract_table.end() ? it->second : uniform_mixture();
    }
    case Kind::BeliefStationary:
      if (belief == nullptr) return uniform_mixture();
      return rule(*belief);
  }
  throw std::logic_error("unreachable strategy kind");
}

Strategy shift_strategy(const Strategy& sigma, const History& h) {
  if (sigma.kind != Strategy::Kind::HistoryTable || h.empty()) return sigma;
  std::map<History, std::vector<double>> shifted;
  for (const auto& [key, mix] : sigma.table) {
    if (key.size() < h.size()) continue;
    if (!std::equal(h.begin(), h.end(), key.begin())) continue;
    shifted.emplace(History(key.begin() + static_cast<long>(h.size()), key.end()), mix);
  }
  return Strategy::history_table(sigma.num_actions, std::move(shifted));
}

}  // namespace dsg
