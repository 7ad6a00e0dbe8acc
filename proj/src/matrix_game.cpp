#include "dsg/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsg/errors.hpp"

namespace dsg {

namespace {
constexpr double kPivotTol = 1e-11;

// Maximize sum(w) subject to A w <= 1, w >= 0, where A > 0. Dense tableau
// simplex; Bland's rule (lowest eligible index) on both the entering and the
// leaving choice, which rules out cycling.
struct SimplexResult {
  double objective = 0.0;
  std::vector<double> w;      // primal solution (column player, unscaled)
  std::vector<double> duals;  // multipliers on the row constraints
};

SimplexResult solve_positive_lp(const Matrix& A) {
  const int R = A.rows;  // constraints
  const int C = A.cols;  // structural variables
  const int cols = C + R + 1;  // structural + slack + rhs

  // tab[r] holds constraint r; tab[R] holds the objective row (maximization,
  // stored as z-row with negated costs so optimality is "no negative entry").
  std::vector<std::vector<double>> tab(R + 1, std::vector<double>(cols, 0.0));
  std::vector<int> basis(R);
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) tab[r][c] = A(r, c);
    tab[r][C + r] = 1.0;
    tab[r][cols - 1] = 1.0;
    basis[r] = C + r;
  }
  for (int c = 0; c < C; ++c) tab[R][c] = -1.0;

  const long long max_pivots = 4096 + 64LL * (R + C) * (R + C);
  for (long long pivots = 0;; ++pivots) {
    if (pivots > max_pivots) throw NumericalFailure("matrix_game_value: simplex did not terminate");
    int enter = -1;
    for (int c = 0; c < cols - 1; ++c) {
      if (tab[R][c] < -kPivotTol) {
        enter = c;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < R; ++r) {
      if (tab[r][enter] > kPivotTol) {
        const double ratio = tab[r][cols - 1] / tab[r][enter];
        if (ratio < best_ratio - kPivotTol ||
            (std::abs(ratio - best_ratio) <= kPivotTol && (leave < 0 || basis[r] < basis[leave]))) {
          best_ratio = ratio;
          leave = r;
        }
      }
    }
    if (leave < 0) throw NumericalFailure("matrix_game_value: unbounded LP");
    const double piv = tab[leave][enter];
    for (int c = 0; c < cols; ++c) tab[leave][c] /= piv;
    for (int r = 0; r <= R; ++r) {
      if (r == leave) continue;
      const double f = tab[r][enter];
      if (f == 0.0) continue;
      for (int c = 0; c < cols; ++c) tab[r][c] -= f * tab[leave][c];
    }
    basis[leave] = enter;
  }

  SimplexResult res;
  res.objective = tab[R][cols - 1];
  res.w.assign(C, 0.0);
  for (int r = 0; r < R; ++r)
    if (basis[r] < C) res.w[basis[r]] = tab[r][cols - 1];
  res.duals.assign(R, 0.0);
  for (int r = 0; r < R; ++r) res.duals[r] = tab[R][C + r];  // reduced cost of slack r
  return res;
}
}  // namespace

MatrixGameSolution matrix_game_value(const MatrixGame& game, double tol) {
  const Matrix& M = game.payoff;
  const int R = M.rows, C = M.cols;
  if (R <= 0 || C <= 0) throw NumericalFailure("matrix_game_value: empty payoff matrix");
  for (double v : M.a)
    if (!std::isfinite(v)) throw NumericalFailure("matrix_game_value: non-finite payoff entry");

  // Shift so all entries are >= 1; the value shifts by the same constant and
  // the LP region stays bounded.
  const double shift = 1.0 - M.min_entry();
  Matrix A = M;
  for (double& v : A.a) v += shift;

  const SimplexResult lp = solve_positive_lp(A);
  if (lp.objective <= 0.0) throw NumericalFailure("matrix_game_value: degenerate LP objective");
  const double shifted_value = 1.0 / lp.objective;

  MatrixGameSolution sol;
  sol.value = shifted_value - shift;
  sol.col_mixture.assign(C, 0.0);
  for (int c = 0; c < C; ++c) sol.col_mixture[c] = lp.w[c] * shifted_value;
  sol.row_mixture.assign(R, 0.0);
  for (int r = 0; r < R; ++r) sol.row_mixture[r] = lp.duals[r] * shifted_value;

  // Clean tiny negatives and renormalize.
  for (auto* mix : {&sol.row_mixture, &sol.col_mixture}) {
    double total = 0.0;
    for (double& v : *mix) {
      if (v < 0.0) v = 0.0;
      total += v;
    }
    if (total <= 0.0) throw NumericalFailure("matrix_game_value: degenerate mixture");
    for (double& v : *mix) v /= total;
  }

  // Guarantee check for both players.
  for (int c = 0; c < C; ++c) {
    double col = 0.0;
    for (int r = 0; r < R; ++r) col += sol.row_mixture[r] * M(r, c);
    if (col < sol.value - tol) throw NumericalFailure("matrix_game_value: row guarantee violated");
  }
  for (int r = 0; r < R; ++r) {
    double row = 0.0;
    for (int c = 0; c < C; ++c) row += M(r, c) * sol.col_mixture[c];
    if (row > sol.value + tol) throw NumericalFailure("matrix_game_value: column guarantee violated");
  }
  return sol;
}

}  // namespace dsg
