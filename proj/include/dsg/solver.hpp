#pragma once

#include <vector>

#include "dsg/game.hpp"
#include "dsg/matrix_game.hpp"

namespace dsg {

struct ValueFunction {
  enum class Kind { NStage, Discounted };
  Kind kind = Kind::NStage;
  double param = 0.0;  // horizon n or discount lambda
  std::vector<double> values;
};

// One Shapley sweep: out(x) = value over (i,j) of [g + sum_x' p w(x')].
std::vector<double> shapley_apply(const FiniteGame& fg, const std::vector<double>& w,
                                  double lp_tol = 1e-9);

// One discounted sweep: out(x) = value over (i,j) of [lambda g + (1-lambda) sum p v].
std::vector<double> discounted_apply(const FiniteGame& fg, const std::vector<double>& v, double lambda,
                                     double lp_tol = 1e-9);

// Cesaro n-stage values at every state.
ValueFunction shapley_nstage(const FiniteGame& fg, long long n, double lp_tol = 1e-9);

// Fixed point of the discounted operator to sup-norm residual <= tol; each
// sweep contracts the error by (1-lambda).
ValueFunction discounted_value(const FiniteGame& fg, double lambda, double tol = 1e-9,
                               double lp_tol = 1e-9, long long max_sweeps = 100'000'000);

struct UniformEstimate {
  struct Refinement {
    long long n = 0;
    double value_n = 0.0;
    double lambda = 0.0;
    double value_lambda = 0.0;
  };
  double value = 0.0;
  bool converged = false;
  bool work_capped = false;
  std::vector<Refinement> trace;
};

// Heuristic two-sided estimate of the long-run value: n-stage values at
// doubling horizons against discounted values at halving discounts, stopping
// once the two agree at the initial state within tol on two consecutive
// refinements. Returns the midpoint plus both traces; converged=false after
// the refinement budget (or the sweep-work cap) flags the estimate as
// unreliable rather than hiding it.
UniformEstimate uniform_value_estimate(const FiniteGame& fg, double tol, int budget = 20,
                                       double lp_tol = 1e-9, long long work_cap = 80'000'000);

}  // namespace dsg
