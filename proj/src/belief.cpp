#include "dsg/belief.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dsg/errors.hpp"
#include "dsg/matrix_game.hpp"
#include "dsg/strategy.hpp"

namespace dsg {

namespace {
constexpr double kAdmissibleTol = 1e-15;

// Quantized belief key used to merge tree nodes whose beliefs agree to the
// dedup tolerance.
std::vector<long long> belief_key(const Belief& b) {
  std::vector<long long> key(b.probs.size());
  for (size_t k = 0; k < b.probs.size(); ++k) key[k] = llround(b.probs[k] * 1e12);
  return key;
}
}  // namespace

double signal_probability(const GameSpec& spec, const Belief& b, int i, int j, int s) {
  const int K = spec.k_count();
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    const double bk = b.probs[k];
    if (bk == 0.0) continue;
    double row = 0.0;
    for (int k2 = 0; k2 < K; ++k2) row += spec.p(k, i, j, k2, s);
    total += bk * row;
  }
  return total;
}

Belief belief_update(const GameSpec& spec, const Belief& b, int i, int j, int s) {
  const int K = spec.k_count();
  std::vector<double> next(K, 0.0);
  double norm = 0.0;
  for (int k = 0; k < K; ++k) {
    const double bk = b.probs[k];
    if (bk == 0.0) continue;
    for (int k2 = 0; k2 < K; ++k2) {
      const double v = bk * spec.p(k, i, j, k2, s);
      next[k2] += v;
      norm += v;
    }
  }
  if (norm <= kAdmissibleTol)
    throw ZeroProbabilitySignal("belief_update: signal '" + spec.signals[s] + "' has zero probability");
  for (double& v : next) v /= norm;
  return Belief(std::move(next));
}

Matrix forward_product(const GameSpec& spec, const History& h) {
  Matrix prod = Matrix::identity(spec.k_count());
  for (const Step& step : h) prod = prod * transition_matrix(spec, step.i, step.j, step.s).entries;
  return prod;
}

Belief belief_from_history(const GameSpec& spec, const Belief& b1, const History& h) {
  // Fold of normalized updates; algebraically b1'T(h) renormalized, but the
  // per-step normalization avoids underflow on long histories.
  Belief b = b1;
  for (const Step& step : h) {
    try {
      b = belief_update(spec, b, step.i, step.j, step.s);
    } catch (const ZeroProbabilitySignal&) {
      throw InadmissibleHistory("belief_from_history: history has zero probability from the root belief");
    }
  }
  return b;
}

std::vector<BeliefNode> enumerate_admissible(const GameSpec& spec, const Belief& b1, int stage,
                                             long long cap) {
  const int I = spec.i_count(), J = spec.j_count(), S = spec.s_count();
  std::vector<BeliefNode> frontier;
  frontier.push_back({History{}, b1, 1.0, 1});
  for (int depth = 1; depth < stage; ++depth) {
    std::vector<BeliefNode> next;
    for (const BeliefNode& node : frontier) {
      for (int i = 0; i < I; ++i) {
        for (int j = 0; j < J; ++j) {
          for (int s = 0; s < S; ++s) {
            const double sp = signal_probability(spec, node.belief, i, j, s);
            if (sp <= kAdmissibleTol) continue;
            BeliefNode child;
            child.history = node.history;
            child.history.push_back({i, j, s});
            child.belief = belief_update(spec, node.belief, i, j, s);
            child.weight = node.weight * sp / (I * J);
            child.depth = depth + 1;
            next.push_back(std::move(child));
            if (static_cast<long long>(next.size()) > cap)
              throw CapExceeded("enumerate_admissible: more than " + std::to_string(cap) + " histories");
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return frontier;
}

namespace {
struct ValueMemo {
  std::unordered_map<std::vector<long long>, double, VecHash> map;
};

double value_rec(const GameSpec& spec, const Belief& b, int t, std::vector<ValueMemo>& memo,
                 long long cap, long long& nodes, double lp_tol) {
  if (t == 0) return 0.0;
  const auto key = belief_key(b);
  auto& level = memo[t].map;
  if (auto it = level.find(key); it != level.end()) return it->second;
  if (++nodes > cap) throw CapExceeded("exact_nstage_value: belief tree larger than the cap");

  const int I = spec.i_count(), J = spec.j_count(), S = spec.s_count();
  MatrixGame stage;
  stage.payoff = Matrix(I, J);
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      double q = spec.belief_reward(b, i, j);
      for (int s = 0; s < S; ++s) {
        const double sp = signal_probability(spec, b, i, j, s);
        if (sp <= kAdmissibleTol) continue;
        q += sp * value_rec(spec, belief_update(spec, b, i, j, s), t - 1, memo, cap, nodes, lp_tol);
      }
      stage.payoff(i, j) = q;
    }
  }
  const double v = matrix_game_value(stage, lp_tol).value;
  level.emplace(std::move(key), v);
  return v;
}
}  // namespace

double exact_nstage_value(const GameSpec& spec, const Belief& b1, int n, long long cap, double lp_tol) {
  std::vector<ValueMemo> memo(n + 1);
  long long nodes = 0;
  return value_rec(spec, b1, n, memo, cap, nodes, lp_tol) / n;
}

namespace {
double payoff_rec(const GameSpec& spec, const Belief& b, const History& h, const Strategy& sigma,
                  const Strategy& tau, double weight, int depth, int n, long long cap, long long& nodes) {
  if (depth > n) return 0.0;
  if (++nodes > cap) throw CapExceeded("exact_payoff: belief tree larger than the cap");
  const int I = spec.i_count(), J = spec.j_count(), S = spec.s_count();
  const std::vector<double> x = sigma.mixture(h, &b, nullptr);
  const std::vector<double> y = tau.mixture(h, &b, nullptr);

  double total = 0.0;
  for (int i = 0; i < I; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < J; ++j) {
      const double xy = x[i] * y[j];
      if (xy == 0.0) continue;
      total += weight * xy * spec.belief_reward(b, i, j);
      if (depth == n) continue;
      for (int s = 0; s < S; ++s) {
        const double sp = signal_probability(spec, b, i, j, s);
        if (sp <= kAdmissibleTol) continue;
        History h2 = h;
        h2.push_back({i, j, s});
        total += payoff_rec(spec, belief_update(spec, b, i, j, s), h2, sigma, tau, weight * xy * sp,
                            depth + 1, n, cap, nodes);
      }
    }
  }
  return total;
}
}  // namespace

double exact_payoff(const GameSpec& spec, const Belief& b1, const Strategy& sigma, const Strategy& tau,
                    int n, long long cap) {
  long long nodes = 0;
  return payoff_rec(spec, b1, History{}, sigma, tau, 1.0, 1, n, cap, nodes) / n;
}

}  // namespace dsg
