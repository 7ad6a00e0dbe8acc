#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace dsg {

// Parsed command line. Caps resolve as flag > environment (DSG_STATE_CAP,
// DSG_ENUM_CAP) > default.
struct RunConfig {
  std::string command;
  std::string input;
  std::string output;

  double epsilon = 0.1;
  std::optional<long long> eta_override;
  long long horizon = 8;           // solve-nstage
  long long eta = 4;               // build-abstract, simulate-coupling
  long long m_eps = 1;             // simulate-coupling
  long long episodes = 10'000;     // simulate-coupling
  int blocks = 4;                  // simulate-coupling
  double tol = 1e-4;
  long long state_cap = 200'000;
  long long enum_cap = 1'000'000;
  uint64_t seed = 1;
  int threads = 0;                 // 0 = hardware concurrency
  int verbosity = 1;
  std::string kind;                // check / certificate
  std::string fixture_name;        // fixtures
  std::string certificate_path;    // pipeline
  std::string trace_csv;           // simulate-coupling / solve-uniform / pipeline
};

// Dispatches a parsed config. Exit status: 0 success, 1 validation or input
// failure, 2 cap or convergence failure.
int run(const RunConfig& config);

// Full command-line entry point (parses argv, then run()).
int run_cli(int argc, char** argv);

}  // namespace dsg
