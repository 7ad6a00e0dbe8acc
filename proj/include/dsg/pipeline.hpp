#pragma once

#include <optional>
#include <string>

#include "dsg/abstract.hpp"
#include "dsg/game.hpp"
#include "dsg/solver.hpp"
#include "dsg/structure.hpp"

namespace dsg {

// Block/grid sizes derived from a certificate:
//   omega = ceil(max{ln(eps)/ln(1 - delta^2), |K|^2/m_eps})
//   eta   = omega * m_eps * ceil(1/eps)^2
// delta = 1 makes the log undefined; one sub-block then suffices surely and
// omega degenerates to ceil(|K|^2/m_eps).
struct PipelineParameters {
  long long omega_eps = 0;
  long long eta_eps = 0;
  bool eta_saturated = false;  // eta overflowed 64 bits and was clamped
};

PipelineParameters compute_parameters(double eps, long long m_eps, double delta_eps, int k_count);

struct PipelineConfig {
  double eps = 0.1;
  std::optional<DoeblinCertificate> certificate;
  std::optional<long long> eta_override;
  long long state_cap = 200'000;
  long long enum_cap = 1'000'000;
  double tol = 1e-4;     // agreement tolerance of the uniform-value estimate
  int budget = 20;       // refinement budget
  long long work_cap = 80'000'000;
};

struct PipelineReport {
  DoeblinCertificate certificate;
  long long omega_eps = 0;
  long long eta_eps = 0;
  bool eta_saturated = false;
  long long eta_used = 0;
  bool override_used = false;
  long long abstract_states = 0;
  long long abstract_edges = 0;
  double value = 0.0;
  UniformEstimate estimate;
  bool caps_hit = false;
  std::string failed_stage;  // set when a cap aborted a stage
  // "eps+tol" when the full guarantee holds; otherwise the reason it was
  // downgraded (override, cap, or non-convergence).
  std::string guarantee;
};

// End-to-end approximation: certificate (supplied, else primitive, else
// ergodic for blind specs) -> (omega, eta) -> abstract game -> uniform-value
// estimate. eta_override replaces eta for desk-scale runs and downgrades the
// reported guarantee. Cap hits are reported in the result rather than thrown.
PipelineReport approximate_uniform_value(const GameSpec& spec, const PipelineConfig& config);

}  // namespace dsg
