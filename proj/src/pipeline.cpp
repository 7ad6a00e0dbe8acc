#include "dsg/pipeline.hpp"

#include <cmath>
#include <limits>

#include "dsg/errors.hpp"

namespace dsg {

PipelineParameters compute_parameters(double eps, long long m_eps, double delta_eps, int k_count) {
  if (!(eps > 0.0 && eps < 1.0)) throw NumericalFailure("compute_parameters: eps must lie in (0,1)");
  if (!(delta_eps > 0.0 && delta_eps <= 1.0))
    throw NumericalFailure("compute_parameters: delta_eps must lie in (0,1]");
  if (m_eps < 1) throw NumericalFailure("compute_parameters: m_eps must be positive");

  const long long k2 = static_cast<long long>(k_count) * k_count;
  const long long omega_floor = (k2 + m_eps - 1) / m_eps;  // ceil(|K|^2 / m_eps)
  long long omega = omega_floor;
  if (delta_eps < 1.0) {
    const double ratio = std::log(eps) / std::log1p(-delta_eps * delta_eps);
    omega = std::max(omega, static_cast<long long>(std::ceil(ratio)));
  }

  PipelineParameters out;
  out.omega_eps = omega;
  const long long inv = static_cast<long long>(std::ceil(1.0 / eps));
  const __int128 eta = static_cast<__int128>(omega) * m_eps * inv * inv;
  if (eta > static_cast<__int128>(std::numeric_limits<long long>::max())) {
    out.eta_eps = std::numeric_limits<long long>::max();
    out.eta_saturated = true;
  } else {
    out.eta_eps = static_cast<long long>(eta);
  }
  return out;
}

PipelineReport approximate_uniform_value(const GameSpec& spec, const PipelineConfig& config) {
  PipelineReport report;

  if (config.certificate) {
    report.certificate = *config.certificate;
  } else {
    try {
      report.certificate = primitive_certificate(spec, config.eps, config.enum_cap);
    } catch (const NotPrimitive&) {
      if (!spec.is_blind())
        throw NoCertificate("approximate_uniform_value: spec is neither primitive nor blind; supply a certificate");
      try {
        report.certificate = ergodic_certificate(spec, config.eps, config.enum_cap);
      } catch (const NotErgodic&) {
        throw NoCertificate("approximate_uniform_value: blind spec is neither primitive nor ergodic; supply a certificate");
      }
    }
  }

  const PipelineParameters params =
      compute_parameters(config.eps, report.certificate.m_eps, report.certificate.delta_eps, spec.k_count());
  report.omega_eps = params.omega_eps;
  report.eta_eps = params.eta_eps;
  report.eta_saturated = params.eta_saturated;
  report.override_used = config.eta_override.has_value();
  report.eta_used = config.eta_override.value_or(params.eta_eps);
  if (report.eta_used > std::numeric_limits<int>::max() / 2) {
    report.caps_hit = true;
    report.failed_stage = "build_abstract";
    report.guarantee = "downgraded: eta too large to materialize; rerun with --eta-override";
    return report;
  }

  AbstractGame ag;
  try {
    ag = build_abstract(spec, spec.initial_belief, static_cast<int>(report.eta_used), config.state_cap);
  } catch (const CapExceeded&) {
    report.caps_hit = true;
    report.failed_stage = "build_abstract";
    report.guarantee = "downgraded: abstract state cap exceeded";
    return report;
  }
  const AbstractGame::Stats stats = ag.stats();
  report.abstract_states = stats.state_count;
  report.abstract_edges = stats.edge_count;

  report.estimate = uniform_value_estimate(ag.game, config.tol, config.budget, 1e-9, config.work_cap);
  report.value = report.estimate.value;

  if (!report.estimate.converged) {
    report.caps_hit = report.caps_hit || report.estimate.work_capped;
    report.failed_stage = "uniform_value_estimate";
    report.guarantee = "downgraded: value estimate did not converge within the refinement budget";
  } else if (report.override_used) {
    report.guarantee = "downgraded: eta_override in effect; the eps bound does not apply";
  } else {
    report.guarantee = "eps+tol";
  }
  return report;
}

}  // namespace dsg
