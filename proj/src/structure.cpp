#include "dsg/structure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "dsg/errors.hpp"

namespace dsg {

const char* to_string(DoeblinCertificate::Source source) {
  switch (source) {
    case DoeblinCertificate::Source::Ergodic: return "ergodic";
    case DoeblinCertificate::Source::Primitive: return "primitive";
    case DoeblinCertificate::Source::User: return "user";
  }
  return "user";
}

PatternMatrix PatternMatrix::from_matrix(const Matrix& m) {
  PatternMatrix p;
  p.n = m.rows;
  p.rows.assign(m.rows, 0);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c)
      if (m(r, c) > kPositiveTol) p.rows[r] |= (1ULL << c);
  return p;
}

PatternMatrix PatternMatrix::product(const PatternMatrix& o) const {
  PatternMatrix out;
  out.n = n;
  out.rows.assign(n, 0);
  for (int r = 0; r < n; ++r) {
    uint64_t bits = rows[r];
    uint64_t acc = 0;
    while (bits) {
      const int k = __builtin_ctzll(bits);
      bits &= bits - 1;
      acc |= o.rows[k];
    }
    out.rows[r] = acc;
  }
  return out;
}

bool PatternMatrix::all_positive() const {
  const uint64_t full = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
  for (uint64_t r : rows)
    if (r != full) return false;
  return true;
}

bool PatternMatrix::scrambling() const {
  for (int r = 0; r < n; ++r)
    for (int r2 = r + 1; r2 < n; ++r2)
      if ((rows[r] & rows[r2]) == 0) return false;
  return true;
}

double ergodicity_coefficient(const Matrix& p) {
  for (int r = 0; r < p.rows; ++r)
    if (std::abs(p.row_sum(r) - 1.0) > 1e-10)
      throw NotStochastic("ergodicity_coefficient: row " + std::to_string(r) + " does not sum to 1");
  double worst = 0.0;
  for (int r = 0; r < p.rows; ++r) {
    for (int r2 = r + 1; r2 < p.rows; ++r2) {
      double d = 0.0;
      for (int c = 0; c < p.cols; ++c) d += std::abs(p(r, c) - p(r2, c));
      worst = std::max(worst, d);
    }
  }
  return 0.5 * worst;
}

double birkhoff_coefficient(const Matrix& p) {
  if (p.min_entry() <= PatternMatrix::kPositiveTol) return 1.0;
  double psi = std::numeric_limits<double>::infinity();
  for (int k = 0; k < p.rows; ++k)
    for (int kb = 0; kb < p.rows; ++kb)
      for (int c = 0; c < p.cols; ++c)
        for (int c2 = 0; c2 < p.cols; ++c2)
          psi = std::min(psi, (p(k, c) * p(kb, c2)) / (p(kb, c) * p(k, c2)));
  const double root = std::sqrt(psi);
  return (1.0 - root) / (1.0 + root);
}

namespace {
std::vector<Matrix> update_matrices(const GameSpec& spec) {
  std::vector<Matrix> out;
  out.reserve(static_cast<size_t>(spec.i_count()) * spec.j_count() * spec.s_count());
  for (int i = 0; i < spec.i_count(); ++i)
    for (int j = 0; j < spec.j_count(); ++j)
      for (int s = 0; s < spec.s_count(); ++s) out.push_back(transition_matrix(spec, i, j, s).entries);
  return out;
}

bool pattern_set_satisfies(const std::set<PatternMatrix>& set, PatternKind kind) {
  for (const PatternMatrix& p : set) {
    if (kind == PatternKind::Positive && !p.all_positive()) return false;
    if (kind == PatternKind::Scrambling && !p.scrambling()) return false;
  }
  return true;
}
}  // namespace

std::optional<long long> minimal_uniform_length(const GameSpec& spec, PatternKind kind,
                                                std::optional<long long> bound) {
  if (kind == PatternKind::Scrambling && !spec.is_blind())
    throw NotBlind("minimal_uniform_length: scrambling check requires a blind spec");
  if (spec.k_count() > 64) throw CapExceeded("minimal_uniform_length: more than 64 states");

  const long long limit = bound.value_or(static_cast<long long>(
      std::llround(std::pow(kind == PatternKind::Positive ? 2.0 : 3.0, spec.k_count()))));

  std::set<PatternMatrix> letters;
  for (const Matrix& m : update_matrices(spec)) letters.insert(PatternMatrix::from_matrix(m));

  std::set<PatternMatrix> level = letters;
  std::set<std::set<PatternMatrix>> seen;
  for (long long m = 1; m <= limit; ++m) {
    if (pattern_set_satisfies(level, kind)) return m;
    // A repeated level set means the reachable sets cycle from here on, so no
    // longer length can succeed either.
    if (!seen.insert(level).second) return std::nullopt;
    std::set<PatternMatrix> next;
    for (const PatternMatrix& a : level)
      for (const PatternMatrix& b : letters) next.insert(a.product(b));
    level = std::move(next);
  }
  return std::nullopt;
}

namespace {
double max_coefficient_rec(const std::vector<Matrix>& letters, const Matrix& prefix, long long remaining,
                           CoefficientKind kind) {
  if (remaining == 0)
    return kind == CoefficientKind::TauE ? ergodicity_coefficient(prefix) : birkhoff_coefficient(prefix);
  double worst = 0.0;
  for (const Matrix& m : letters)
    worst = std::max(worst, max_coefficient_rec(letters, prefix * m, remaining - 1, kind));
  return worst;
}
}  // namespace

double max_coefficient(const GameSpec& spec, long long m, CoefficientKind kind, long long cap) {
  if (kind == CoefficientKind::TauE && !spec.is_blind())
    throw NotBlind("max_coefficient: tau_e requires a blind spec");
  const std::vector<Matrix> letters = update_matrices(spec);
  double count = 1.0;
  for (long long t = 0; t < m; ++t) {
    count *= static_cast<double>(letters.size());
    if (count > static_cast<double>(cap))
      throw CapExceeded("max_coefficient: alphabet^m exceeds the enumeration cap");
  }
  // Depth-first over prefixes keeps the reduction order fixed, so the max is
  // deterministic.
  if (m == 0) {
    const Matrix id = Matrix::identity(spec.k_count());
    return kind == CoefficientKind::TauE ? ergodicity_coefficient(id) : birkhoff_coefficient(id);
  }
  return max_coefficient_rec(letters, Matrix::identity(spec.k_count()), m, kind);
}

double mu_lower_bound(const GameSpec& spec, long long m) {
  const std::vector<Matrix> letters = update_matrices(spec);
  const int K = spec.k_count();
  std::vector<double> l(K, 1.0);
  for (long long t = 1; t <= m; ++t) {
    std::vector<double> next(K, std::numeric_limits<double>::infinity());
    for (const Matrix& p : letters) {
      for (int k = 0; k < K; ++k) {
        double v = 0.0;
        for (int k2 = 0; k2 < K; ++k2) v += p(k, k2) * l[k2];
        next[k] = std::min(next[k], v);
      }
    }
    l = std::move(next);
  }
  double out = std::numeric_limits<double>::infinity();
  for (double v : l) out = std::min(out, v);
  return out;
}

namespace {
long long geometric_repeats(double eps_target, double tau_bar) {
  // Number of base-length blocks needed for tau_bar^t <= eps_target.
  if (tau_bar <= 0.0) return 1;
  const double t = std::log(eps_target) / std::log(tau_bar);
  const long long reps = static_cast<long long>(std::ceil(t));
  return std::max<long long>(1, reps);
}
}  // namespace

DoeblinCertificate ergodic_certificate(const GameSpec& spec, double eps, long long enum_cap) {
  if (!spec.is_blind()) throw NotBlind("ergodic_certificate: requires a blind spec");
  const auto mstar = minimal_uniform_length(spec, PatternKind::Scrambling);
  if (!mstar) throw NotErgodic("ergodic_certificate: no uniform scrambling length exists");

  DoeblinCertificate cert;
  cert.epsilon = eps;
  cert.source = DoeblinCertificate::Source::Ergodic;
  cert.base_length = *mstar;
  cert.tau_bar = max_coefficient(spec, *mstar, CoefficientKind::TauE, enum_cap);
  cert.m_eps = geometric_repeats(eps / 2.0, cert.tau_bar) * *mstar;
  const double pairs = static_cast<double>(spec.i_count()) * spec.j_count();
  cert.delta_eps = std::pow(pairs, -static_cast<double>(cert.m_eps));
  if (cert.delta_eps <= 0.0)
    throw NumericalFailure("ergodic_certificate: delta_eps underflowed; m_eps too large");
  return cert;
}

DoeblinCertificate primitive_certificate(const GameSpec& spec, double eps, long long enum_cap) {
  const auto mstar = minimal_uniform_length(spec, PatternKind::Positive);
  if (!mstar) throw NotPrimitive("primitive_certificate: no uniform positivity length exists");

  DoeblinCertificate cert;
  cert.epsilon = eps;
  cert.source = DoeblinCertificate::Source::Primitive;
  cert.base_length = *mstar;
  cert.tau_bar = max_coefficient(spec, *mstar, CoefficientKind::TauP, enum_cap);
  cert.m_eps = geometric_repeats(eps, cert.tau_bar) * *mstar;
  cert.mu_eps = mu_lower_bound(spec, cert.m_eps);
  const double pairs = static_cast<double>(spec.i_count()) * spec.j_count();
  cert.delta_eps = std::pow(1.0 / pairs, static_cast<double>(cert.m_eps - 1)) * *cert.mu_eps;
  if (cert.delta_eps <= 0.0)
    throw NumericalFailure("primitive_certificate: delta_eps underflowed; m_eps too large");
  return cert;
}

}  // namespace dsg
