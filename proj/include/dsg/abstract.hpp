#pragma once

#include <map>
#include <vector>

#include "dsg/belief.hpp"
#include "dsg/game.hpp"

namespace dsg {

// Point of the uniform grid on the belief simplex: numerators over the full
// state set, summing to eta.
struct GridPoint {
  std::vector<int> numerators;
  int eta = 0;
  Belief to_belief() const;
};

// L1-nearest grid point whose support equals supp(b); ties resolved to the
// lexicographically smallest numerator vector. Requires eta >= |supp(b)|.
GridPoint project(const Belief& b, int eta);

// State of the abstract game: an anchor belief (the initial belief, or a
// grid point after a re-projection) plus the exact history replayed since
// the anchor. A freshly re-anchored state carries the signal that produced
// it instead of a trail.
struct AbstractState {
  std::vector<int> anchor_numerators;  // empty = anchored at the initial belief
  int entry_signal = -1;               // >= 0 only when the trail is empty on a grid anchor
  History trail;

  std::vector<long long> key() const;
};

// Finite stochastic game over reachable abstract states, with back-pointers
// from each state to its exact belief.
struct AbstractGame {
  FiniteGame game;  // states labeled x0..xN in discovery order
  std::vector<AbstractState> states;
  std::vector<Belief> proj;
  Belief initial_belief;
  int eta = 0;

  struct Stats {
    long long state_count = 0;
    long long edge_count = 0;
    std::map<int, long long> trail_length_histogram;
  };
  Stats stats() const;
};

// One abstract transition. Replays the exact update while the trail is
// shorter than eta - 1 steps; the step completing eta factors since the
// anchor re-projects onto the grid (support-preserving) and restarts the
// trail. Throws InadmissibleSignal when s has zero probability from proj(x).
AbstractState abstract_update(const GameSpec& spec, const Belief& b1, const AbstractState& x, int i,
                              int j, int s, int eta);

Belief abstract_proj(const GameSpec& spec, const Belief& b1, const AbstractState& x);

// Breadth-first closure from (b1, empty trail) under abstract_update over
// all action pairs and admissible signals. Only reachable states are
// materialized; ids follow discovery order, which is deterministic.
AbstractGame build_abstract(const GameSpec& spec, const Belief& b1, int eta, long long state_cap);

struct AbstractHistory {
  std::vector<int> state_ids;             // length = actions.size() + 1
  std::vector<std::pair<int, int>> actions;
};

// Deterministic image of a hidden-game history in the abstract game, and its
// inverse (signal extraction). Both reject inadmissible inputs.
AbstractHistory map_history_xi(const GameSpec& spec, const AbstractGame& ag, const History& h);
History map_history_xiA(const GameSpec& spec, const AbstractGame& ag, const AbstractHistory& ha);

}  // namespace dsg
