#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dsg/game.hpp"
#include "dsg/matrix.hpp"

namespace dsg {

// Witness for the belief reset property: after m_eps update steps, under any
// strategy pair, the posterior lands within epsilon (L1) of a common anchor
// belief with probability at least delta_eps.
struct DoeblinCertificate {
  enum class Source { Ergodic, Primitive, User };

  double epsilon = 0.0;
  long long m_eps = 0;
  double delta_eps = 0.0;
  Source source = Source::User;
  double tau_bar = 0.0;       // contraction base used for m_eps
  long long base_length = 0;  // product length at which tau_bar was measured
  std::optional<double> mu_eps;  // minimal row-sum bound (primitive only)
};

const char* to_string(DoeblinCertificate::Source source);

// Positivity pattern of a nonnegative matrix; the pattern of a product is
// the boolean product of the patterns. State counts are capped at 64 so one
// word per row suffices.
struct PatternMatrix {
  int n = 0;
  std::vector<uint64_t> rows;

  static constexpr double kPositiveTol = 1e-15;
  static PatternMatrix from_matrix(const Matrix& m);

  PatternMatrix product(const PatternMatrix& o) const;
  bool all_positive() const;
  // Every pair of rows shares a column with positive entries.
  bool scrambling() const;
  bool operator==(const PatternMatrix&) const = default;
  bool operator<(const PatternMatrix& o) const { return rows < o.rows; }
};

// Half the maximal L1 distance between rows of a stochastic matrix; the
// contraction modulus for belief differences under row-stochastic updates.
// Throws NotStochastic unless rows sum to 1 within 1e-10.
double ergodicity_coefficient(const Matrix& p);

// Birkhoff projective contraction coefficient of a nonnegative matrix;
// exactly 1 whenever any entry is zero (within the positivity threshold).
double birkhoff_coefficient(const Matrix& p);

enum class PatternKind { Scrambling, Positive };
enum class CoefficientKind { TauE, TauP };

// Smallest m <= bound such that every product of m update matrices satisfies
// the property, computed by breadth-first closure over reachable positivity
// patterns. nullopt means the property fails for every m (the default bounds
// are large enough to certify that). Scrambling requires a blind spec.
std::optional<long long> minimal_uniform_length(const GameSpec& spec, PatternKind kind,
                                                std::optional<long long> bound = std::nullopt);

// Maximum of the coefficient over all products of exactly m update matrices,
// by exhaustive prefix enumeration; throws CapExceeded when alphabet^m > cap.
// TauE requires a blind spec.
double max_coefficient(const GameSpec& spec, long long m, CoefficientKind kind, long long cap);

// Conservative lower bound for the minimal row sum of any product of m
// update matrices, by the backward recursion
//   l_1(k) = min_a rowsum_k P(a),   l_t(k) = min_a sum_k' P_{k,k'}(a) l_{t-1}(k').
double mu_lower_bound(const GameSpec& spec, long long m);

// Certificates built from the structural conditions. Both use the minimal
// uniform length m* as the contraction base; tau_bar = 0 degenerates to
// m_eps = m*.
//   ergodic:   blind specs, scrambling patterns; delta_eps = |IxJ|^-m_eps.
//   primitive: any signal set, all-positive patterns;
//              delta_eps = (1/(|I||J|))^(m_eps-1) * mu_eps.
DoeblinCertificate ergodic_certificate(const GameSpec& spec, double eps, long long enum_cap = 1'000'000);
DoeblinCertificate primitive_certificate(const GameSpec& spec, double eps, long long enum_cap = 1'000'000);

}  // namespace dsg
