#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsg/errors.hpp"
#include "dsg/matrix.hpp"

namespace dsg {

// Probability vector over the hidden states. Entries at or below kSupportTol
// are treated as structural zeros when computing the support.
struct Belief {
  static constexpr double kSupportTol = 1e-12;

  std::vector<double> probs;

  Belief() = default;
  explicit Belief(std::vector<double> p) : probs(std::move(p)) {}
  static Belief dirac(int k, int n);

  int size() const { return static_cast<int>(probs.size()); }
  std::vector<int> support() const;
  double mass() const;
  double l1_distance(const Belief& o) const;
  double linf_distance(const Belief& o) const;
};

// A two-player zero-sum hidden stochastic game: finite states, per-player
// action sets, public signals, a joint transition kernel over (next state,
// signal), and a stage reward in [0,1] that neither player observes.
//
// All labels are stable strings; everything downstream works on the dense
// indices fixed by the label order here.
struct GameSpec {
  std::vector<std::string> states;
  std::vector<std::string> actions1;
  std::vector<std::string> actions2;
  std::vector<std::string> signals;
  // transition[idx(k,i,j,k2,s)] = p(k2, s | k, i, j)
  std::vector<double> transition;
  // reward[(k*I + i)*J + j] = g(k, i, j)
  std::vector<double> reward;
  Belief initial_belief;

  int k_count() const { return static_cast<int>(states.size()); }
  int i_count() const { return static_cast<int>(actions1.size()); }
  int j_count() const { return static_cast<int>(actions2.size()); }
  int s_count() const { return static_cast<int>(signals.size()); }
  bool is_blind() const { return signals.size() == 1; }

  size_t trans_index(int k, int i, int j, int k2, int s) const {
    return (((static_cast<size_t>(k) * i_count() + i) * j_count() + j) * k_count() + k2) * s_count() + s;
  }
  double p(int k, int i, int j, int k2, int s) const { return transition[trans_index(k, i, j, k2, s)]; }
  double& p_ref(int k, int i, int j, int k2, int s) { return transition[trans_index(k, i, j, k2, s)]; }
  double g(int k, int i, int j) const { return reward[(static_cast<size_t>(k) * i_count() + i) * j_count() + j]; }
  double& g_ref(int k, int i, int j) { return reward[(static_cast<size_t>(k) * i_count() + i) * j_count() + j]; }

  // Expected stage reward under a belief.
  double belief_reward(const Belief& b, int i, int j) const;

  int state_index(const std::string& label) const;
  int action1_index(const std::string& label) const;
  int action2_index(const std::string& label) const;
  int signal_index(const std::string& label) const;

  static GameSpec empty(std::vector<std::string> states, std::vector<std::string> a1,
                        std::vector<std::string> a2, std::vector<std::string> sig);
};

// Sub-stochastic update matrix for one (i, j, s) triple:
// entries(k, k2) = p(k2, s | k, i, j).
struct TransitionMatrix {
  Matrix entries;
  int i = 0;
  int j = 0;
  int s = 0;
};

struct Violation {
  std::string location;
  double magnitude = 0.0;
  std::string message;
};

// Violations are data, not failures; an empty report means a valid spec.
struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_game(const GameSpec& spec);

TransitionMatrix transition_matrix(const GameSpec& spec, int i, int j, int s);
TransitionMatrix transition_matrix(const GameSpec& spec, const std::string& i, const std::string& j,
                                   const std::string& s);

// A fully observable finite zero-sum stochastic game. Also the target shape
// for the abstract game, so the solvers treat both uniformly.
struct FiniteGame {
  std::vector<std::string> states;
  std::vector<std::string> actions1;
  std::vector<std::string> actions2;
  // row(x, i, j): sparse successor distribution, sorted by successor index.
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> reward;  // (x*I + i)*J + j
  int initial_state = 0;

  int x_count() const { return static_cast<int>(states.size()); }
  int i_count() const { return static_cast<int>(actions1.size()); }
  int j_count() const { return static_cast<int>(actions2.size()); }
  size_t row_index(int x, int i, int j) const {
    return (static_cast<size_t>(x) * i_count() + i) * j_count() + j;
  }
  const std::vector<std::pair<int, double>>& row(int x, int i, int j) const { return rows[row_index(x, i, j)]; }
  double g(int x, int i, int j) const { return reward[row_index(x, i, j)]; }
};

// Hidden-game encoding of a fully observable game: the signal set is the
// state set and the emitted signal always names the successor state.
GameSpec build_revealing(const FiniteGame& fg);

// The reverse direction; throws LookupError unless the spec has the
// revealing structure (every positive-probability signal names the
// successor) and a Dirac initial belief.
FiniteGame to_finite_game(const GameSpec& spec);

// Seven-state fixture with two blocks of transient states, two absorbing
// states, player-controlled switching, and block-revealing signals. Its
// belief dynamics exercise geometric drift with probabilistic resets.
GameSpec build_counterexample();

}  // namespace dsg
