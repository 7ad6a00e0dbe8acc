#include "dsg/solver.hpp"

#include <algorithm>
#include <cmath>

#include "dsg/errors.hpp"

namespace dsg {

namespace {
std::vector<double> bellman_sweep(const FiniteGame& fg, const std::vector<double>& w, double lambda,
                                  double lp_tol) {
  const int X = fg.x_count(), I = fg.i_count(), J = fg.j_count();
  std::vector<double> out(X, 0.0);
  MatrixGame stage;
  stage.payoff = Matrix(I, J);
  for (int x = 0; x < X; ++x) {
    for (int i = 0; i < I; ++i) {
      for (int j = 0; j < J; ++j) {
        double cont = 0.0;
        for (const auto& [x2, p] : fg.row(x, i, j)) cont += p * w[x2];
        stage.payoff(i, j) = lambda < 0.0 ? fg.g(x, i, j) + cont
                                          : lambda * fg.g(x, i, j) + (1.0 - lambda) * cont;
      }
    }
    out[x] = matrix_game_value(stage, lp_tol).value;
  }
  return out;
}
}  // namespace

std::vector<double> shapley_apply(const FiniteGame& fg, const std::vector<double>& w, double lp_tol) {
  return bellman_sweep(fg, w, -1.0, lp_tol);
}

std::vector<double> discounted_apply(const FiniteGame& fg, const std::vector<double>& v, double lambda,
                                     double lp_tol) {
  return bellman_sweep(fg, v, lambda, lp_tol);
}

ValueFunction shapley_nstage(const FiniteGame& fg, long long n, double lp_tol) {
  if (n < 1) throw NumericalFailure("shapley_nstage: horizon must be positive");
  std::vector<double> w(fg.x_count(), 0.0);
  for (long long t = 0; t < n; ++t) w = shapley_apply(fg, w, lp_tol);
  ValueFunction vf;
  vf.kind = ValueFunction::Kind::NStage;
  vf.param = static_cast<double>(n);
  vf.values = std::move(w);
  for (double& v : vf.values) v /= static_cast<double>(n);
  return vf;
}

ValueFunction discounted_value(const FiniteGame& fg, double lambda, double tol, double lp_tol,
                               long long max_sweeps) {
  if (lambda <= 0.0 || lambda >= 1.0)
    throw NumericalFailure("discounted_value: lambda must lie in (0,1)");
  std::vector<double> v(fg.x_count(), 0.0);
  for (long long sweep = 0; sweep < max_sweeps; ++sweep) {
    std::vector<double> next = discounted_apply(fg, v, lambda, lp_tol);
    double change = 0.0;
    for (int x = 0; x < fg.x_count(); ++x) change = std::max(change, std::abs(next[x] - v[x]));
    v = std::move(next);
    if (change <= tol) {
      ValueFunction vf;
      vf.kind = ValueFunction::Kind::Discounted;
      vf.param = lambda;
      vf.values = std::move(v);
      return vf;
    }
  }
  throw NumericalFailure("discounted_value: no convergence within the sweep budget");
}

UniformEstimate uniform_value_estimate(const FiniteGame& fg, double tol, int budget, double lp_tol,
                                       long long work_cap) {
  const int X = fg.x_count();
  const int init = fg.initial_state;
  UniformEstimate est;

  std::vector<double> w(X, 0.0);  // accumulated n-stage values
  long long t = 0;
  std::vector<double> vdisc(X, 0.0);
  long long work = 0;
  const double inner_tol = std::min(1e-10, tol * 1e-4);

  long long n = 16;
  double lambda = 1.0 / 16.0;
  bool prev_agree = false;
  for (int r = 0; r < budget; ++r) {
    while (t < n) {
      w = shapley_apply(fg, w, lp_tol);
      ++t;
      work += X;
      if (work > work_cap) {
        est.work_capped = true;
        break;
      }
    }
    if (est.work_capped) break;
    const double value_n = w[init] / static_cast<double>(t);

    for (;;) {
      std::vector<double> next = discounted_apply(fg, vdisc, lambda, lp_tol);
      double change = 0.0;
      for (int x = 0; x < X; ++x) change = std::max(change, std::abs(next[x] - vdisc[x]));
      vdisc = std::move(next);
      work += X;
      if (change <= inner_tol) break;
      if (work > work_cap) {
        est.work_capped = true;
        break;
      }
    }
    if (est.work_capped) break;
    const double value_lambda = vdisc[init];

    est.trace.push_back({n, value_n, lambda, value_lambda});
    est.value = 0.5 * (value_n + value_lambda);
    const bool agree = std::abs(value_n - value_lambda) <= tol;
    if (agree && prev_agree) {
      est.converged = true;
      return est;
    }
    prev_agree = agree;
    n *= 2;
    lambda *= 0.5;
  }
  est.converged = false;
  return est;
}

}  // namespace dsg
