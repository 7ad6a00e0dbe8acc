#include "dsg/game.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace dsg {

namespace {
constexpr double kStochasticTol = 1e-12;

int find_label(const std::vector<std::string>& labels, const std::string& label, const char* what) {
  for (size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == label) return static_cast<int>(k);
  throw LookupError(std::string("unknown ") + what + " label '" + label + "'");
}
}  // namespace

Belief Belief::dirac(int k, int n) {
  Belief b;
  b.probs.assign(n, 0.0);
  b.probs[k] = 1.0;
  return b;
}

std::vector<int> Belief::support() const {
  std::vector<int> idx;
  for (int k = 0; k < size(); ++k)
    if (probs[k] > kSupportTol) idx.push_back(k);
  return idx;
}

double Belief::mass() const {
  double s = 0.0;
  for (double v : probs) s += v;
  return s;
}

double Belief::l1_distance(const Belief& o) const {
  double d = 0.0;
  for (int k = 0; k < size(); ++k) d += std::abs(probs[k] - o.probs[k]);
  return d;
}

double Belief::linf_distance(const Belief& o) const {
  double d = 0.0;
  for (int k = 0; k < size(); ++k) d = std::max(d, std::abs(probs[k] - o.probs[k]));
  return d;
}

double GameSpec::belief_reward(const Belief& b, int i, int j) const {
  double r = 0.0;
  for (int k = 0; k < k_count(); ++k) r += b.probs[k] * g(k, i, j);
  return r;
}

int GameSpec::state_index(const std::string& label) const { return find_label(states, label, "state"); }
int GameSpec::action1_index(const std::string& label) const { return find_label(actions1, label, "action1"); }
int GameSpec::action2_index(const std::string& label) const { return find_label(actions2, label, "action2"); }
int GameSpec::signal_index(const std::string& label) const { return find_label(signals, label, "signal"); }

GameSpec GameSpec::empty(std::vector<std::string> states, std::vector<std::string> a1,
                         std::vector<std::string> a2, std::vector<std::string> sig) {
  GameSpec spec;
  spec.states = std::move(states);
  spec.actions1 = std::move(a1);
  spec.actions2 = std::move(a2);
  spec.signals = std::move(sig);
  spec.transition.assign(static_cast<size_t>(spec.k_count()) * spec.i_count() * spec.j_count() *
                             spec.k_count() * spec.s_count(),
                         0.0);
  spec.reward.assign(static_cast<size_t>(spec.k_count()) * spec.i_count() * spec.j_count(), 0.0);
  spec.initial_belief.probs.assign(spec.k_count(), 0.0);
  return spec;
}

ValidationReport validate_game(const GameSpec& spec) {
  ValidationReport report;
  auto add = [&](std::string loc, double mag, std::string msg) {
    report.violations.push_back({std::move(loc), mag, std::move(msg)});
  };

  const int K = spec.k_count(), I = spec.i_count(), J = spec.j_count(), S = spec.s_count();
  if (K == 0 || I == 0 || J == 0 || S == 0) {
    add("alphabets", 0.0, "states, actions and signals must be nonempty");
    return report;
  }

  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < I; ++i) {
      for (int j = 0; j < J; ++j) {
        double row = 0.0;
        for (int k2 = 0; k2 < K; ++k2) {
          for (int s = 0; s < S; ++s) {
            const double v = spec.p(k, i, j, k2, s);
            if (v < 0.0) {
              std::ostringstream loc;
              loc << "p(" << spec.states[k2] << "," << spec.signals[s] << "|" << spec.states[k] << ","
                  << spec.actions1[i] << "," << spec.actions2[j] << ")";
              add(loc.str(), -v, "negative transition probability");
            }
            row += v;
          }
        }
        if (std::abs(row - 1.0) > kStochasticTol) {
          std::ostringstream loc;
          loc << "row(" << spec.states[k] << "," << spec.actions1[i] << "," << spec.actions2[j] << ")";
          add(loc.str(), std::abs(row - 1.0), "transition row does not sum to 1");
        }
        const double g = spec.g(k, i, j);
        if (g < 0.0 || g > 1.0) {
          std::ostringstream loc;
          loc << "g(" << spec.states[k] << "," << spec.actions1[i] << "," << spec.actions2[j] << ")";
          add(loc.str(), g < 0.0 ? -g : g - 1.0, "reward outside [0,1]");
        }
      }
    }
  }

  if (static_cast<int>(spec.initial_belief.probs.size()) != K) {
    add("initial_belief", 0.0, "belief length does not match the state count");
  } else {
    double mass = 0.0;
    for (int k = 0; k < K; ++k) {
      const double v = spec.initial_belief.probs[k];
      if (v < 0.0) add("initial_belief[" + spec.states[k] + "]", -v, "negative belief entry");
      mass += v;
    }
    if (std::abs(mass - 1.0) > kStochasticTol)
      add("initial_belief", std::abs(mass - 1.0), "belief does not sum to 1");
  }
  return report;
}

TransitionMatrix transition_matrix(const GameSpec& spec, int i, int j, int s) {
  const int K = spec.k_count();
  if (i < 0 || i >= spec.i_count() || j < 0 || j >= spec.j_count() || s < 0 || s >= spec.s_count())
    throw LookupError("transition_matrix: index out of range");
  TransitionMatrix tm;
  tm.i = i;
  tm.j = j;
  tm.s = s;
  tm.entries = Matrix(K, K);
  for (int k = 0; k < K; ++k)
    for (int k2 = 0; k2 < K; ++k2) tm.entries(k, k2) = spec.p(k, i, j, k2, s);
  return tm;
}

TransitionMatrix transition_matrix(const GameSpec& spec, const std::string& i, const std::string& j,
                                   const std::string& s) {
  return transition_matrix(spec, spec.action1_index(i), spec.action2_index(j), spec.signal_index(s));
}

GameSpec build_revealing(const FiniteGame& fg) {
  GameSpec spec = GameSpec::empty(fg.states, fg.actions1, fg.actions2, fg.states);
  for (int x = 0; x < fg.x_count(); ++x) {
    for (int i = 0; i < fg.i_count(); ++i) {
      for (int j = 0; j < fg.j_count(); ++j) {
        for (const auto& [x2, q] : fg.row(x, i, j)) spec.p_ref(x, i, j, x2, x2) = q;
        spec.g_ref(x, i, j) = fg.g(x, i, j);
      }
    }
  }
  spec.initial_belief = Belief::dirac(fg.initial_state, fg.x_count());
  return spec;
}

FiniteGame to_finite_game(const GameSpec& spec) {
  const int K = spec.k_count(), I = spec.i_count(), J = spec.j_count(), S = spec.s_count();
  // Map each signal to the state with the same label.
  if (S != K) throw LookupError("to_finite_game: signal set does not mirror the state set");
  std::vector<int> state_of_signal(S, -1);
  for (int s = 0; s < S; ++s) state_of_signal[s] = spec.state_index(spec.signals[s]);

  FiniteGame fg;
  fg.states = spec.states;
  fg.actions1 = spec.actions1;
  fg.actions2 = spec.actions2;
  fg.rows.resize(static_cast<size_t>(K) * I * J);
  fg.reward.resize(static_cast<size_t>(K) * I * J);
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < I; ++i) {
      for (int j = 0; j < J; ++j) {
        std::map<int, double> dist;
        for (int k2 = 0; k2 < K; ++k2) {
          for (int s = 0; s < S; ++s) {
            const double v = spec.p(k, i, j, k2, s);
            if (v <= 0.0) continue;
            if (state_of_signal[s] != k2)
              throw LookupError("to_finite_game: signal does not reveal the successor state at p(" +
                                spec.states[k2] + "," + spec.signals[s] + "|...)");
            dist[k2] += v;
          }
        }
        auto& row = fg.rows[fg.row_index(k, i, j)];
        row.assign(dist.begin(), dist.end());
        fg.reward[fg.row_index(k, i, j)] = spec.g(k, i, j);
      }
    }
  }
  const auto supp = spec.initial_belief.support();
  if (supp.size() != 1) throw LookupError("to_finite_game: initial belief is not a Dirac");
  fg.initial_state = supp[0];
  return fg;
}

GameSpec build_counterexample() {
  const std::vector<std::string> states = {"0+", "0++", "0*", "1+", "1++", "1T", "1*"};
  const std::vector<std::string> acts = {"c", "q"};
  // Signal pair (s1, block label) flattened s1-major.
  std::vector<std::string> signals;
  for (const std::string& s1 : {"d", "d'"})
    for (const std::string& s2 : {"zero", "one", "zeroabs", "oneabs"}) signals.push_back(s1 + "|" + s2);

  GameSpec spec = GameSpec::empty(states, acts, acts, signals);
  auto k = [&](const char* s) { return spec.state_index(s); };
  const int zp = k("0+"), zpp = k("0++"), zstar = k("0*");
  const int op = k("1+"), opp = k("1++"), teet = k("1T"), ostar = k("1*");

  auto block = [&](int state) -> int {
    if (state == zp || state == zpp) return 0;   // zero
    if (state == op || state == opp || state == teet) return 1;  // one
    if (state == zstar) return 2;                // zeroabs
    return 3;                                    // oneabs
  };
  auto sig = [&](int s1, int next) { return s1 * 4 + block(next); };

  // Arcs as (controller action, next state, s1, prob); the block component of
  // the signal is pinned to the successor's block.
  struct Arc {
    int next;
    int s1;  // 0 = d, 1 = d'
    double prob;
  };
  auto set_p1 = [&](int from, int action, const std::vector<Arc>& arcs) {
    // Block-zero states are controlled by Player 1: rows ignore j.
    for (int j = 0; j < 2; ++j)
      for (const Arc& a : arcs) spec.p_ref(from, action, j, a.next, sig(a.s1, a.next)) += a.prob;
  };
  auto set_p2 = [&](int from, int action, const std::vector<Arc>& arcs) {
    for (int i = 0; i < 2; ++i)
      for (const Arc& a : arcs) spec.p_ref(from, i, action, a.next, sig(a.s1, a.next)) += a.prob;
  };
  auto set_absorbing = [&](int state) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) spec.p_ref(state, i, j, state, sig(0, state)) = 1.0;
  };

  const int c = 0, q = 1;
  set_p1(zp, c, {{zp, 0, 0.5}, {zpp, 1, 0.5}});
  set_p1(zp, q, {{opp, 0, 1.0}});
  set_p1(zpp, c, {{zp, 0, 0.25}, {zpp, 0, 0.25}, {zpp, 1, 0.5}});
  set_p1(zpp, q, {{zstar, 1, 1.0}});
  set_p2(op, c, {{op, 0, 0.5}, {opp, 1, 0.5}});
  set_p2(op, q, {{zpp, 0, 1.0}});
  set_p2(opp, c, {{teet, 0, 0.5}, {opp, 1, 0.5}});
  set_p2(opp, q, {{ostar, 1, 1.0}});
  set_p2(teet, c, {{op, 0, 0.375}, {opp, 0, 0.125}, {opp, 1, 0.5}});
  set_p2(teet, q, {{ostar, 1, 1.0}});
  set_absorbing(zstar);
  set_absorbing(ostar);

  // Reward 1 on the "one" block and its absorbing state, action-independent.
  for (int state : {op, opp, teet, ostar})
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) spec.g_ref(state, i, j) = 1.0;

  spec.initial_belief = Belief::dirac(zpp, spec.k_count());
  return spec;
}

}  // namespace dsg
