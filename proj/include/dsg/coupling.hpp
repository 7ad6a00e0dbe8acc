#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dsg/abstract.hpp"
#include "dsg/game.hpp"
#include "dsg/strategy.hpp"

namespace dsg {

struct CouplingOptions {
  long long episodes = 10'000;
  int blocks = 4;
  uint64_t seed = 1;
  int threads = 1;
  // Common random numbers for the paired draws. The marginal law of either
  // game does not depend on this; turning it off yields an uncoupled run.
  bool shared_draws = true;
  std::string trace_csv;  // per-stage trace file; empty disables it
};

struct CouplingReport {
  long long episodes = 0;
  int blocks = 0;
  int eta = 0;
  long long m_eps = 0;
  double eps = 0.0;
  long long horizon = 0;
  double mean_gap = 0.0;
  double gap_stderr = 0.0;
  double mean_reward_gamma = 0.0;
  double mean_reward_abstract = 0.0;
  // First sub-block of each block at which the exact belief and the abstract
  // state's belief were within 2*eps; the key equal to the sub-block count
  // means "never". Counts sum to episodes * blocks.
  std::map<long long, long long> t_ell_histogram;
  std::vector<double> case2_fraction;  // per block: mean fraction of sub-blocks before the lock
  uint64_t seed = 0;
};

// Runs the hidden game and its abstract version in lockstep: the abstract
// player's strategy drives the hidden game through the deterministic history
// image, and vice versa, with continuation strategies re-rooted at every
// sub-block start until the two beliefs are 2*eps-close, after which the
// same pair is kept for the rest of the block. Tracks the per-block stopping
// times and the per-stage reward gap. eta must be a multiple of m_eps.
CouplingReport simulate_coupling(const GameSpec& spec, const Belief& b1, int eta, long long m_eps,
                                 double eps, const Strategy& sigma_A, const Strategy& tau,
                                 const CouplingOptions& options);

struct ResetProbe {
  double min_witness = 0.0;   // min over pairs and vertices of the best common cluster frequency
  double stderr_est = 0.0;    // binomial standard error at the minimizing frequency
  std::vector<double> per_pair;
};

// Empirical lower-bound witness for delta_eps: for sampled table strategy
// pairs, simulates beliefs for m_eps-1 steps from every vertex belief,
// clusters the terminal beliefs at L1 radius eps, and reports the minimal
// frequency of the best cluster common to all vertices.
ResetProbe doeblin_reset_probability(const GameSpec& spec, long long m_eps, double eps,
                                     int strategy_pairs, uint64_t seed,
                                     long long episodes_per_vertex = 2000);

}  // namespace dsg
