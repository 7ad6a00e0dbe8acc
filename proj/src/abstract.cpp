#include "dsg/abstract.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dsg/errors.hpp"
#include "dsg/strategy.hpp"

namespace dsg {

namespace {
constexpr double kAdmissibleTol = 1e-15;
}

Belief GridPoint::to_belief() const {
  Belief b;
  b.probs.resize(numerators.size());
  for (size_t k = 0; k < numerators.size(); ++k) b.probs[k] = static_cast<double>(numerators[k]) / eta;
  return b;
}

GridPoint project(const Belief& b, int eta) {
  const std::vector<int> supp = b.support();
  const int m = static_cast<int>(supp.size());
  if (m == 0) throw EtaTooSmall("project: belief has empty support");
  if (eta < m)
    throw EtaTooSmall("project: eta=" + std::to_string(eta) + " below the support size " +
                      std::to_string(m));

  // Separable convex allocation: start every support coordinate at 1 and
  // spend the remaining eta-m unit increments greedily by marginal gain.
  // Gains per coordinate are nonincreasing (+1 while below floor(eta*b_k),
  // then 2*frac-1 once, then -1), so the greedy is an exact L1 argmin. Ties
  // go to the largest index, which yields the lexicographically smallest
  // numerator vector among the optima.
  std::vector<int> n(supp.size(), 1);
  long long budget = eta - m;

  std::vector<double> c(supp.size());
  std::vector<long long> fl(supp.size());
  for (size_t t = 0; t < supp.size(); ++t) {
    c[t] = static_cast<double>(eta) * b.probs[supp[t]];
    fl[t] = static_cast<long long>(std::floor(c[t]));
  }

  for (size_t rt = supp.size(); rt-- > 0 && budget > 0;) {
    const long long cap = std::max<long long>(0, fl[rt] - 1);
    const long long take = std::min<long long>(cap, budget);
    n[rt] += static_cast<int>(take);
    budget -= take;
  }
  if (budget > 0) {
    // Middle increments, one per coordinate, in decreasing gain order.
    std::vector<std::pair<double, int>> mids;
    for (size_t t = 0; t < supp.size(); ++t) {
      if (fl[t] < 1) continue;
      const double gain = 2.0 * (c[t] - static_cast<double>(fl[t])) - 1.0;
      if (gain > -1.0) mids.push_back({gain, static_cast<int>(t)});
    }
    std::sort(mids.begin(), mids.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second > b.second;
    });
    for (const auto& [gain, t] : mids) {
      if (budget == 0) break;
      n[t] += 1;
      --budget;
    }
    // Every further increment costs the same wherever it lands.
    if (budget > 0) n[supp.size() - 1] += static_cast<int>(budget);
  }

  GridPoint g;
  g.eta = eta;
  g.numerators.assign(b.probs.size(), 0);
  for (size_t t = 0; t < supp.size(); ++t) g.numerators[supp[t]] = n[t];
  return g;
}

std::vector<long long> AbstractState::key() const {
  std::vector<long long> k;
  k.reserve(2 + anchor_numerators.size() + 3 * trail.size());
  k.push_back(anchor_numerators.empty() ? 0 : 1);
  for (int v : anchor_numerators) k.push_back(v);
  k.push_back(entry_signal);
  for (const Step& st : trail) {
    k.push_back(st.i);
    k.push_back(st.j);
    k.push_back(st.s);
  }
  return k;
}

Belief abstract_proj(const GameSpec& spec, const Belief& b1, const AbstractState& x) {
  Belief anchor;
  if (x.anchor_numerators.empty()) {
    anchor = b1;
  } else {
    GridPoint g;
    g.numerators = x.anchor_numerators;
    g.eta = 0;
    for (int v : x.anchor_numerators) g.eta += v;
    anchor = g.to_belief();
  }
  return belief_from_history(spec, anchor, x.trail);
}

AbstractState abstract_update(const GameSpec& spec, const Belief& b1, const AbstractState& x, int i,
                              int j, int s, int eta) {
  const Belief b = abstract_proj(spec, b1, x);
  if (signal_probability(spec, b, i, j, s) <= kAdmissibleTol)
    throw InadmissibleSignal("abstract_update: signal '" + spec.signals[s] +
                             "' has zero probability from proj(x)");
  AbstractState next;
  if (static_cast<int>(x.trail.size()) < eta - 1) {
    next.anchor_numerators = x.anchor_numerators;
    next.trail = x.trail;
    next.trail.push_back({i, j, s});
    return next;
  }
  // The step completes eta exact factors since the anchor: re-project.
  const Belief bn = belief_update(spec, b, i, j, s);
  next.anchor_numerators = project(bn, eta).numerators;
  next.entry_signal = s;
  return next;
}

AbstractGame build_abstract(const GameSpec& spec, const Belief& b1, int eta, long long state_cap) {
  if (eta < 1) throw EtaTooSmall("build_abstract: eta must be positive");
  const int I = spec.i_count(), J = spec.j_count(), S = spec.s_count();

  AbstractGame ag;
  ag.initial_belief = b1;
  ag.eta = eta;

  std::unordered_map<std::vector<long long>, int, VecHash> ids;
  AbstractState x1;
  ids.emplace(x1.key(), 0);
  ag.states.push_back(x1);
  ag.proj.push_back(b1);

  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> rewards;

  for (int x = 0; x < static_cast<int>(ag.states.size()); ++x) {
    const AbstractState state = ag.states[x];  // copy: the vector grows below
    const Belief b = ag.proj[x];
    for (int i = 0; i < I; ++i) {
      for (int j = 0; j < J; ++j) {
        std::map<int, double> row;
        for (int s = 0; s < S; ++s) {
          const double sp = signal_probability(spec, b, i, j, s);
          if (sp <= kAdmissibleTol) continue;
          AbstractState child;
          Belief child_proj;
          if (static_cast<int>(state.trail.size()) < eta - 1) {
            child.anchor_numerators = state.anchor_numerators;
            child.trail = state.trail;
            child.trail.push_back({i, j, s});
            child_proj = belief_update(spec, b, i, j, s);
          } else {
            const Belief bn = belief_update(spec, b, i, j, s);
            child.anchor_numerators = project(bn, eta).numerators;
            child.entry_signal = s;
            GridPoint g{child.anchor_numerators, eta};
            child_proj = g.to_belief();
          }
          auto [it, inserted] = ids.emplace(child.key(), static_cast<int>(ag.states.size()));
          if (inserted) {
            if (static_cast<long long>(ag.states.size()) >= state_cap)
              throw CapExceeded("build_abstract: state cap " + std::to_string(state_cap) + " exceeded");
            ag.states.push_back(child);
            ag.proj.push_back(child_proj);
          }
          row[it->second] += sp;
        }
        rows.emplace_back(row.begin(), row.end());
        rewards.push_back(spec.belief_reward(b, i, j));
      }
    }
  }

  ag.game.actions1 = spec.actions1;
  ag.game.actions2 = spec.actions2;
  ag.game.states.reserve(ag.states.size());
  for (size_t x = 0; x < ag.states.size(); ++x) ag.game.states.push_back("x" + std::to_string(x));
  ag.game.rows = std::move(rows);
  ag.game.reward = std::move(rewards);
  ag.game.initial_state = 0;
  return ag;
}

AbstractGame::Stats AbstractGame::stats() const {
  Stats st;
  st.state_count = static_cast<long long>(states.size());
  for (const auto& row : game.rows) st.edge_count += static_cast<long long>(row.size());
  for (const AbstractState& s : states) st.trail_length_histogram[static_cast<int>(s.trail.size())] += 1;
  return st;
}

AbstractHistory map_history_xi(const GameSpec& spec, const AbstractGame& ag, const History& h) {
  std::unordered_map<std::vector<long long>, int, VecHash> ids;
  for (size_t x = 0; x < ag.states.size(); ++x) ids.emplace(ag.states[x].key(), static_cast<int>(x));

  AbstractHistory out;
  out.state_ids.push_back(0);
  int cur = 0;
  for (const Step& step : h) {
    AbstractState next;
    try {
      next = abstract_update(spec, ag.initial_belief, ag.states[cur], step.i, step.j, step.s, ag.eta);
    } catch (const InadmissibleSignal&) {
      throw InadmissibleHistory("map_history_xi: history is inadmissible from the initial belief");
    }
    auto it = ids.find(next.key());
    if (it == ids.end())
      throw InadmissibleHistory("map_history_xi: image state was not materialized; history inadmissible");
    cur = it->second;
    out.actions.push_back({step.i, step.j});
    out.state_ids.push_back(cur);
  }
  return out;
}

History map_history_xiA(const GameSpec& spec, const AbstractGame& ag, const AbstractHistory& ha) {
  if (ha.state_ids.empty() || ha.state_ids[0] != 0)
    throw InadmissibleHistory("map_history_xiA: abstract history must start at x0");
  if (ha.state_ids.size() != ha.actions.size() + 1)
    throw InadmissibleHistory("map_history_xiA: malformed abstract history");

  History out;
  for (size_t t = 0; t < ha.actions.size(); ++t) {
    const AbstractState& cur = ag.states[ha.state_ids[t]];
    const AbstractState& next = ag.states[ha.state_ids[t + 1]];
    const auto [i, j] = ha.actions[t];
    // The consumed signal is the trail's newest step, or the entry signal of
    // a re-anchored state.
    const int s = next.trail.empty() ? next.entry_signal : next.trail.back().s;
    if (s < 0) throw InadmissibleHistory("map_history_xiA: successor carries no signal");
    AbstractState expect;
    try {
      expect = abstract_update(spec, ag.initial_belief, cur, i, j, s, ag.eta);
    } catch (const InadmissibleSignal&) {
      throw InadmissibleHistory("map_history_xiA: signal inadmissible at step " + std::to_string(t));
    }
    if (expect.key() != next.key())
      throw InadmissibleHistory("map_history_xiA: transition does not follow the abstract update");
    out.push_back({i, j, s});
  }
  // The admissibility carries over to the hidden game.
  belief_from_history(spec, ag.initial_belief, out);
  return out;
}

}  // namespace dsg
