#include "dsg/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "dsg/belief.hpp"
#include "dsg/errors.hpp"
#include "dsg/rng.hpp"

namespace dsg {

namespace {
constexpr double kAdmissibleTol = 1e-15;

int sample_with(const std::vector<double>& weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  double acc = 0.0;
  int last = -1;
  for (size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    last = static_cast<int>(k);
    if (u * total < acc) return last;
  }
  return last;
}

// Signal-major inverse CDF over the joint (successor, signal) law, so the
// induced signal draw lines up with a pure signal draw under the same u.
void draw_joint_transition(const GameSpec& spec, int k, int i, int j, double u, int* k2_out,
                           int* s_out) {
  const int K = spec.k_count(), S = spec.s_count();
  double acc = 0.0;
  int lk = -1, ls = -1;
  for (int s = 0; s < S; ++s) {
    for (int k2 = 0; k2 < K; ++k2) {
      const double v = spec.p(k, i, j, k2, s);
      if (v <= 0.0) continue;
      acc += v;
      lk = k2;
      ls = s;
      if (u < acc) {
        *k2_out = k2;
        *s_out = s;
        return;
      }
    }
  }
  *k2_out = lk;
  *s_out = ls;
}

int draw_signal(const GameSpec& spec, const Belief& b, int i, int j, double u) {
  const int S = spec.s_count();
  std::vector<double> w(S);
  for (int s = 0; s < S; ++s) w[s] = signal_probability(spec, b, i, j, s);
  return sample_with(w, u);
}

// Abstract process tracker with an incrementally maintained belief; also
// reused as the "shadow" image each player's strategy sees of the other
// game's realization.
struct AbsTracker {
  AbstractState state;
  Belief proj;
  bool valid = true;

  void reset(const AbstractState& s, const Belief& p) {
    state = s;
    proj = p;
    valid = true;
  }

  bool advance(const GameSpec& spec, int i, int j, int s, int eta) {
    if (!valid) return false;
    if (signal_probability(spec, proj, i, j, s) <= kAdmissibleTol) {
      valid = false;
      return false;
    }
    if (static_cast<int>(state.trail.size()) < eta - 1) {
      proj = belief_update(spec, proj, i, j, s);
      state.trail.push_back({i, j, s});
      state.entry_signal = -1;
      return true;
    }
    const Belief bn = belief_update(spec, proj, i, j, s);
    GridPoint g = project(bn, eta);
    state.anchor_numerators = std::move(g.numerators);
    state.trail.clear();
    state.entry_signal = s;
    GridPoint full{state.anchor_numerators, eta};
    proj = full.to_belief();
    return true;
  }
};

std::vector<double> query_strategy(const Strategy& st, const History& root, const History& rel,
                                   const Belief* belief, const AbsTracker* tracker) {
  if (tracker != nullptr && !tracker->valid) return st.uniform_mixture();
  if (st.kind == Strategy::Kind::HistoryTable) {
    History absolute = root;
    absolute.insert(absolute.end(), rel.begin(), rel.end());
    return st.mixture(absolute, belief, nullptr);
  }
  if (st.kind == Strategy::Kind::AbstractTable && tracker != nullptr) {
    const std::vector<long long> key = tracker->state.key();
    return st.mixture(rel, belief, &key);
  }
  return st.mixture(rel, belief, nullptr);
}

struct EpisodeResult {
  double gap_mean = 0.0;
  double reward_gamma = 0.0;
  double reward_abstract = 0.0;
  std::vector<long long> t_ell;       // per block
  std::vector<long long> case2_count; // per block
};

struct TraceRow {
  long long episode;
  long long stage;
  int block;
  long long subblock;
  bool locked;
  std::string belief;
  std::string abstract_proj;
  double gap;
};

std::string join_probs(const Belief& b) {
  std::ostringstream os;
  for (int k = 0; k < b.size(); ++k) {
    if (k) os << '|';
    os << b.probs[k];
  }
  return os.str();
}

void run_episode(const GameSpec& spec, const Belief& b1, int eta, long long m_eps, double eps,
                 const Strategy& sigma_A, const Strategy& tau, const CouplingOptions& opt,
                 long long episode, EpisodeResult* out, std::vector<TraceRow>* trace) {
  const long long sub_blocks = eta / m_eps;
  const long long horizon = static_cast<long long>(opt.blocks) * eta;

  CounterRng rng_i(opt.seed, static_cast<uint64_t>(episode) * 8 + 0);
  CounterRng rng_j(opt.seed, static_cast<uint64_t>(episode) * 8 + 1);
  CounterRng rng_s(opt.seed, static_cast<uint64_t>(episode) * 8 + 2);
  CounterRng rng_i2(opt.seed, static_cast<uint64_t>(episode) * 8 + 3);
  CounterRng rng_j2(opt.seed, static_cast<uint64_t>(episode) * 8 + 4);
  CounterRng rng_s2(opt.seed, static_cast<uint64_t>(episode) * 8 + 5);
  CounterRng rng_k(opt.seed, static_cast<uint64_t>(episode) * 8 + 6);

  // Hidden game: sampled state, exact belief, absolute step history.
  int k = rng_k.sample(b1.probs);
  Belief b = b1;
  History absG, absA;

  // Abstract game and the two shadow images.
  AbstractState x1;
  AbsTracker x, shadowA, shadowB;
  x.reset(x1, b1);
  shadowA.reset(x1, b1);
  Belief shadowB_belief = b1;
  bool shadowB_valid = true;

  History rootA, rootG, relG, relA;

  out->t_ell.assign(opt.blocks, sub_blocks);
  out->case2_count.assign(opt.blocks, 0);
  double gap_sum = 0.0, rg_sum = 0.0, ra_sum = 0.0;

  bool locked = false;
  for (long long stage = 1; stage <= horizon; ++stage) {
    const long long pos = (stage - 1) % eta;
    const int block = static_cast<int>((stage - 1) / eta);
    if (pos == 0) locked = false;
    if (!locked && pos % m_eps == 0) {
      const long long r = pos / m_eps;
      if (b.l1_distance(x.proj) <= 2.0 * eps) {
        locked = true;
        out->t_ell[block] = r;
      } else {
        out->case2_count[block] += 1;
      }
      // Re-root the continuation strategies in both cases.
      rootA = absA;
      rootG = absG;
      relG.clear();
      relA.clear();
      shadowA.reset(x.state, x.proj);
      shadowB_belief = b;
      shadowB_valid = true;
    }

    const double ui = rng_i.u01();
    const double ui2 = opt.shared_draws ? ui : rng_i2.u01();
    const double uj = rng_j.u01();
    const double uj2 = opt.shared_draws ? uj : rng_j2.u01();
    const double us = rng_s.u01();
    const double us2 = opt.shared_draws ? us : rng_s2.u01();

    // Player 1 plays the abstract strategy in both games; in the hidden game
    // it reads the shadow image of the realized history.
    const int i = sample_with(query_strategy(sigma_A, rootA, relG, &shadowA.proj, &shadowA), ui);
    const int i2 = sample_with(query_strategy(sigma_A, rootA, relA, &x.proj, &x), ui2);
    // Player 2 plays the hidden-game strategy in both games; in the abstract
    // game it reads the extracted signal history.
    const int j = sample_with(query_strategy(tau, rootG, relG, &b, nullptr), uj);
    const int j2 = sample_with(
        query_strategy(tau, rootG, relA, shadowB_valid ? &shadowB_belief : nullptr, nullptr), uj2);

    const double g_gamma = spec.belief_reward(b, i, j);
    const double g_abs = spec.belief_reward(x.proj, i2, j2);
    gap_sum += g_gamma - g_abs;
    rg_sum += g_gamma;
    ra_sum += g_abs;

    if (trace != nullptr) {
      trace->push_back({episode, stage, block, pos / m_eps, locked, join_probs(b), join_probs(x.proj),
                        g_gamma - g_abs});
    }

    // Hidden-game step.
    int k2 = 0, s = 0;
    draw_joint_transition(spec, k, i, j, us, &k2, &s);
    k = k2;
    b = belief_update(spec, b, i, j, s);
    absG.push_back({i, j, s});
    relG.push_back({i, j, s});
    shadowA.advance(spec, i, j, s, eta);

    // Abstract-game step.
    const int s2 = draw_signal(spec, x.proj, i2, j2, us2);
    x.advance(spec, i2, j2, s2, eta);
    absA.push_back({i2, j2, s2});
    relA.push_back({i2, j2, s2});
    if (shadowB_valid) {
      if (signal_probability(spec, shadowB_belief, i2, j2, s2) > kAdmissibleTol)
        shadowB_belief = belief_update(spec, shadowB_belief, i2, j2, s2);
      else
        shadowB_valid = false;
    }
  }

  out->gap_mean = gap_sum / static_cast<double>(horizon);
  out->reward_gamma = rg_sum / static_cast<double>(horizon);
  out->reward_abstract = ra_sum / static_cast<double>(horizon);
}
}  // namespace

CouplingReport simulate_coupling(const GameSpec& spec, const Belief& b1, int eta, long long m_eps,
                                 double eps, const Strategy& sigma_A, const Strategy& tau,
                                 const CouplingOptions& options) {
  if (eta < 1 || m_eps < 1 || eta % m_eps != 0)
    throw InvalidBlockStructure("simulate_coupling: eta must be a positive multiple of m_eps");
  if (options.blocks < 1 || options.episodes < 1)
    throw InvalidBlockStructure("simulate_coupling: blocks and episodes must be positive");

  const long long sub_blocks = eta / m_eps;
  std::vector<EpisodeResult> results(options.episodes);
  const bool tracing = !options.trace_csv.empty();
  std::vector<std::vector<TraceRow>> traces(tracing ? options.episodes : 0);

  const int threads = std::max(1, options.threads);
  auto worker = [&](long long begin, long long end) {
    for (long long e = begin; e < end; ++e)
      run_episode(spec, b1, eta, m_eps, eps, sigma_A, tau, options, e, &results[e],
                  tracing ? &traces[e] : nullptr);
  };
  if (threads == 1) {
    worker(0, options.episodes);
  } else {
    std::vector<std::thread> pool;
    const long long chunk = (options.episodes + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const long long begin = t * chunk;
      const long long end = std::min<long long>(options.episodes, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  CouplingReport rep;
  rep.episodes = options.episodes;
  rep.blocks = options.blocks;
  rep.eta = eta;
  rep.m_eps = m_eps;
  rep.eps = eps;
  rep.horizon = static_cast<long long>(options.blocks) * eta;
  rep.seed = options.seed;
  rep.case2_fraction.assign(options.blocks, 0.0);

  double sum = 0.0, sum_sq = 0.0;
  for (const EpisodeResult& r : results) {
    sum += r.gap_mean;
    sum_sq += r.gap_mean * r.gap_mean;
    rep.mean_reward_gamma += r.reward_gamma;
    rep.mean_reward_abstract += r.reward_abstract;
    for (int blk = 0; blk < options.blocks; ++blk) {
      rep.t_ell_histogram[r.t_ell[blk]] += 1;
      rep.case2_fraction[blk] += static_cast<double>(r.case2_count[blk]) / sub_blocks;
    }
  }
  const double n = static_cast<double>(options.episodes);
  rep.mean_gap = sum / n;
  rep.mean_reward_gamma /= n;
  rep.mean_reward_abstract /= n;
  const double var = std::max(0.0, (sum_sq - sum * sum / n) / std::max(1.0, n - 1.0));
  rep.gap_stderr = std::sqrt(var / n);
  for (double& f : rep.case2_fraction) f /= n;

  if (tracing) {
    std::ofstream out(options.trace_csv);
    out << "episode,stage,block,subblock,locked,belief,abstract_proj,gap\n";
    for (const auto& rows : traces)
      for (const TraceRow& r : rows)
        out << r.episode << ',' << r.stage << ',' << r.block << ',' << r.subblock << ','
            << (r.locked ? 1 : 0) << ',' << r.belief << ',' << r.abstract_proj << ',' << r.gap << '\n';
  }
  return rep;
}

ResetProbe doeblin_reset_probability(const GameSpec& spec, long long m_eps, double eps,
                                     int strategy_pairs, uint64_t seed, long long episodes_per_vertex) {
  const int K = spec.k_count(), I = spec.i_count(), J = spec.j_count(), S = spec.s_count();
  const long long steps = std::max<long long>(0, m_eps - 1);

  ResetProbe probe;
  probe.min_witness = 1.0;
  for (int pair = 0; pair < strategy_pairs; ++pair) {
    CounterRng table_rng(seed, 0x1000 + static_cast<uint64_t>(pair));
    auto random_table = [&](int actions) {
      std::map<History, std::vector<double>> table;
      std::vector<History> level{History{}};
      for (long long t = 0; t <= steps; ++t) {
        std::vector<History> next;
        for (const History& h : level) {
          std::vector<double> mix(actions);
          double total = 0.0;
          for (double& v : mix) {
            v = -std::log(1.0 - table_rng.u01());
            total += v;
          }
          for (double& v : mix) v /= total;
          table.emplace(h, std::move(mix));
          if (t == steps) continue;
          for (int i = 0; i < I; ++i)
            for (int j = 0; j < J; ++j)
              for (int s = 0; s < S; ++s) {
                History h2 = h;
                h2.push_back({i, j, s});
                next.push_back(std::move(h2));
              }
        }
        level = std::move(next);
      }
      return table;
    };
    const Strategy sigma = Strategy::history_table(I, random_table(I));
    const Strategy tau = Strategy::history_table(J, random_table(J));

    // Terminal beliefs per vertex, with a pooled list of distinct centers.
    std::vector<std::vector<Belief>> terminal(K);
    std::vector<Belief> centers;
    for (int k = 0; k < K; ++k) {
      for (long long e = 0; e < episodes_per_vertex; ++e) {
        CounterRng rng(seed, (static_cast<uint64_t>(pair) * K + k) * 0x10000 + 7 + e);
        Belief b = Belief::dirac(k, K);
        History h;
        for (long long t = 0; t < steps; ++t) {
          const int i = rng.sample(sigma.mixture(h, &b, nullptr));
          const int j = rng.sample(tau.mixture(h, &b, nullptr));
          const int s = draw_signal(spec, b, i, j, rng.u01());
          b = belief_update(spec, b, i, j, s);
          h.push_back({i, j, s});
        }
        bool found = false;
        for (const Belief& c : centers)
          if (c.l1_distance(b) <= 1e-9) {
            found = true;
            break;
          }
        if (!found) centers.push_back(b);
        terminal[k].push_back(std::move(b));
      }
    }

    double best_common = 0.0;
    for (const Belief& c : centers) {
      double common = 1.0;
      for (int k = 0; k < K; ++k) {
        long long hits = 0;
        for (const Belief& b : terminal[k])
          if (b.l1_distance(c) <= eps) ++hits;
        common = std::min(common, static_cast<double>(hits) / episodes_per_vertex);
      }
      best_common = std::max(best_common, common);
    }
    probe.per_pair.push_back(best_common);
    probe.min_witness = std::min(probe.min_witness, best_common);
  }
  probe.stderr_est =
      std::sqrt(std::max(0.0, probe.min_witness * (1.0 - probe.min_witness)) /
                static_cast<double>(episodes_per_vertex));
  return probe;
}

}  // namespace dsg
