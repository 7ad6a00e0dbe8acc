#pragma once

#include <compare>
#include <vector>

#include "dsg/game.hpp"
#include "dsg/matrix.hpp"

namespace dsg {

struct Strategy;

// One observed step: both actions plus the public signal that followed.
struct Step {
  int i = 0;
  int j = 0;
  int s = 0;
  auto operator<=>(const Step&) const = default;
};

// A history before stage m has m-1 steps; the empty history is the unique
// history before stage 1.
using History = std::vector<Step>;

struct BeliefNode {
  History history;
  Belief belief;
  double weight = 0.0;  // probability of the history under uniform actions
  int depth = 1;        // stage index
};

// Probability of observing signal s from belief b under actions (i, j):
// b' P(i,j,s) 1. Sums to one over s.
double signal_probability(const GameSpec& spec, const Belief& b, int i, int j, int s);

// Bayes update of the belief after observing s; throws ZeroProbabilitySignal
// when the signal has probability <= 1e-15 from b.
Belief belief_update(const GameSpec& spec, const Belief& b, int i, int j, int s);

// Product of the update matrices along the history; empty history gives the
// identity.
Matrix forward_product(const GameSpec& spec, const History& h);

// Belief after an admissible history, equal to the fold of belief_update.
// Throws InadmissibleHistory when the history has zero probability from b1.
Belief belief_from_history(const GameSpec& spec, const Belief& b1, const History& h);

// All histories before stage m admissible from b1, with their beliefs and
// uniform-action weights. Throws CapExceeded past the node cap.
std::vector<BeliefNode> enumerate_admissible(const GameSpec& spec, const Belief& b1, int stage,
                                             long long cap);

// Minimax Cesaro value of the n-stage game by backward induction on the
// exact belief tree, with nodes of equal depth and belief merged.
double exact_nstage_value(const GameSpec& spec, const Belief& b1, int n, long long cap = 2'000'000,
                          double lp_tol = 1e-9);

// Exact expected n-stage payoff under a fixed strategy pair, by forward
// recursion over weighted belief nodes.
double exact_payoff(const GameSpec& spec, const Belief& b1, const Strategy& sigma, const Strategy& tau,
                    int n, long long cap = 2'000'000);

}  // namespace dsg
