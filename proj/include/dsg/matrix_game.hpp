#pragma once

#include <vector>

#include "dsg/matrix.hpp"

namespace dsg {

// One-shot zero-sum matrix game; the row player maximizes.
struct MatrixGame {
  Matrix payoff;
};

struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> row_mixture;
  std::vector<double> col_mixture;
};

// Exact value and optimal mixtures via the standard LP reduction, solved
// with a bounded primal simplex using Bland's rule. The returned mixtures
// satisfy min_j x'M >= value - tol and max_i My <= value + tol; violating
// either raises NumericalFailure.
MatrixGameSolution matrix_game_value(const MatrixGame& game, double tol = 1e-9);

}  // namespace dsg
