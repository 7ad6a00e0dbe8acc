#include "dsg/io.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "dsg/errors.hpp"

namespace dsg {

namespace {
std::vector<std::string> string_array(const Json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_array())
    throw ParseError("missing or non-array field '" + field + "'");
  std::vector<std::string> out;
  for (const auto& v : j[field]) {
    if (!v.is_string()) throw ParseError("field '" + field + "' must contain strings");
    out.push_back(v.get<std::string>());
  }
  if (out.empty()) throw ParseError("field '" + field + "' must be nonempty");
  std::set<std::string> uniq(out.begin(), out.end());
  if (uniq.size() != out.size()) throw ParseError("field '" + field + "' has duplicate labels");
  return out;
}

double number_field(const Json& rec, const std::string& field, const std::string& where) {
  if (!rec.contains(field) || !rec[field].is_number())
    throw ParseError(where + ": missing or non-numeric field '" + field + "'");
  return rec[field].get<double>();
}

std::string str_field(const Json& rec, const std::string& field, const std::string& where) {
  if (!rec.contains(field) || !rec[field].is_string())
    throw ParseError(where + ": missing or non-string field '" + field + "'");
  return rec[field].get<std::string>();
}

int index_of(const std::vector<std::string>& labels, const std::string& label,
             const std::string& where) {
  for (size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == label) return static_cast<int>(k);
  throw ParseError(where + ": unknown label '" + label + "'");
}
}  // namespace

GameSpec game_from_json(const Json& j) {
  GameSpec spec = GameSpec::empty(string_array(j, "states"), string_array(j, "actions1"),
                                  string_array(j, "actions2"), string_array(j, "signals"));
  const int K = spec.k_count(), I = spec.i_count(), J = spec.j_count();

  if (!j.contains("transitions") || !j["transitions"].is_array())
    throw ParseError("missing or non-array field 'transitions'");
  std::vector<bool> row_present(static_cast<size_t>(K) * I * J, false);
  std::set<std::vector<int>> seen;
  int rec_idx = 0;
  for (const auto& rec : j["transitions"]) {
    const std::string where = "transitions[" + std::to_string(rec_idx++) + "]";
    const int k = index_of(spec.states, str_field(rec, "from", where), where + ".from");
    const int i = index_of(spec.actions1, str_field(rec, "a1", where), where + ".a1");
    const int jj = index_of(spec.actions2, str_field(rec, "a2", where), where + ".a2");
    const int k2 = index_of(spec.states, str_field(rec, "to", where), where + ".to");
    const int s = index_of(spec.signals, str_field(rec, "signal", where), where + ".signal");
    const double prob = number_field(rec, "prob", where);
    if (!seen.insert({k, i, jj, k2, s}).second)
      throw ParseError(where + ": duplicate transition record");
    spec.p_ref(k, i, jj, k2, s) = prob;
    row_present[(static_cast<size_t>(k) * I + i) * J + jj] = true;
  }
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < I; ++i)
      for (int jj = 0; jj < J; ++jj)
        if (!row_present[(static_cast<size_t>(k) * I + i) * J + jj])
          throw ParseError("transitions: no records for (" + spec.states[k] + "," + spec.actions1[i] +
                           "," + spec.actions2[jj] + ")");

  if (j.contains("rewards")) {
    if (!j["rewards"].is_array()) throw ParseError("field 'rewards' must be an array");
    rec_idx = 0;
    for (const auto& rec : j["rewards"]) {
      const std::string where = "rewards[" + std::to_string(rec_idx++) + "]";
      const int k = index_of(spec.states, str_field(rec, "state", where), where + ".state");
      const int i = index_of(spec.actions1, str_field(rec, "a1", where), where + ".a1");
      const int jj = index_of(spec.actions2, str_field(rec, "a2", where), where + ".a2");
      spec.g_ref(k, i, jj) = number_field(rec, "value", where);
    }
  }

  if (!j.contains("initial_belief") || !j["initial_belief"].is_array())
    throw ParseError("missing or non-array field 'initial_belief'");
  rec_idx = 0;
  for (const auto& rec : j["initial_belief"]) {
    const std::string where = "initial_belief[" + std::to_string(rec_idx++) + "]";
    const int k = index_of(spec.states, str_field(rec, "state", where), where + ".state");
    spec.initial_belief.probs[k] = number_field(rec, "prob", where);
  }
  return spec;
}

Json game_to_json(const GameSpec& spec) {
  Json j;
  j["states"] = spec.states;
  j["actions1"] = spec.actions1;
  j["actions2"] = spec.actions2;
  j["signals"] = spec.signals;
  Json transitions = Json::array();
  for (int k = 0; k < spec.k_count(); ++k)
    for (int i = 0; i < spec.i_count(); ++i)
      for (int jj = 0; jj < spec.j_count(); ++jj)
        for (int k2 = 0; k2 < spec.k_count(); ++k2)
          for (int s = 0; s < spec.s_count(); ++s) {
            const double v = spec.p(k, i, jj, k2, s);
            if (v == 0.0) continue;
            transitions.push_back({{"from", spec.states[k]},
                                   {"a1", spec.actions1[i]},
                                   {"a2", spec.actions2[jj]},
                                   {"to", spec.states[k2]},
                                   {"signal", spec.signals[s]},
                                   {"prob", v}});
          }
  j["transitions"] = std::move(transitions);
  Json rewards = Json::array();
  for (int k = 0; k < spec.k_count(); ++k)
    for (int i = 0; i < spec.i_count(); ++i)
      for (int jj = 0; jj < spec.j_count(); ++jj) {
        const double v = spec.g(k, i, jj);
        if (v == 0.0) continue;
        rewards.push_back({{"state", spec.states[k]},
                           {"a1", spec.actions1[i]},
                           {"a2", spec.actions2[jj]},
                           {"value", v}});
      }
  j["rewards"] = std::move(rewards);
  Json belief = Json::array();
  for (int k = 0; k < spec.k_count(); ++k) {
    const double v = spec.initial_belief.probs[k];
    if (v == 0.0) continue;
    belief.push_back({{"state", spec.states[k]}, {"prob", v}});
  }
  j["initial_belief"] = std::move(belief);
  return j;
}

GameSpec load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open game file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return game_from_json(j);
}

Json abstract_game_to_json(const AbstractGame& ag) {
  const FiniteGame& fg = ag.game;
  GameSpec as_spec = build_revealing(fg);
  return game_to_json(as_spec);
}

Json certificate_to_json(const DoeblinCertificate& cert) {
  Json j;
  j["epsilon"] = cert.epsilon;
  j["m_eps"] = cert.m_eps;
  j["delta_eps"] = cert.delta_eps;
  j["source"] = to_string(cert.source);
  j["tau_bar"] = cert.tau_bar;
  j["base_length"] = cert.base_length;
  if (cert.mu_eps) j["mu_eps"] = *cert.mu_eps;
  return j;
}

DoeblinCertificate certificate_from_json(const Json& j) {
  DoeblinCertificate cert;
  cert.epsilon = number_field(j, "epsilon", "certificate");
  cert.m_eps = static_cast<long long>(number_field(j, "m_eps", "certificate"));
  cert.delta_eps = number_field(j, "delta_eps", "certificate");
  const std::string source = str_field(j, "source", "certificate");
  if (source == "ergodic")
    cert.source = DoeblinCertificate::Source::Ergodic;
  else if (source == "primitive")
    cert.source = DoeblinCertificate::Source::Primitive;
  else if (source == "user")
    cert.source = DoeblinCertificate::Source::User;
  else
    throw ParseError("certificate: unknown source '" + source + "'");
  if (j.contains("tau_bar")) cert.tau_bar = j["tau_bar"].get<double>();
  if (j.contains("base_length")) cert.base_length = j["base_length"].get<long long>();
  if (j.contains("mu_eps")) cert.mu_eps = j["mu_eps"].get<double>();
  if (cert.m_eps < 1 || cert.delta_eps <= 0.0 || cert.delta_eps > 1.0)
    throw ParseError("certificate: m_eps must be >= 1 and delta_eps in (0,1]");
  return cert;
}

DoeblinCertificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open certificate file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return certificate_from_json(j);
}

Json validation_to_json(const ValidationReport& report) {
  Json j;
  j["valid"] = report.ok();
  Json list = Json::array();
  for (const Violation& v : report.violations)
    list.push_back({{"location", v.location}, {"magnitude", v.magnitude}, {"message", v.message}});
  j["violations"] = std::move(list);
  return j;
}

Json pipeline_report_to_json(const PipelineReport& report) {
  Json j;
  j["certificate"] = certificate_to_json(report.certificate);
  j["omega_eps"] = report.omega_eps;
  j["eta_eps"] = report.eta_eps;
  j["eta_saturated"] = report.eta_saturated;
  j["eta_used"] = report.eta_used;
  j["override_used"] = report.override_used;
  j["abstract_states"] = report.abstract_states;
  j["abstract_edges"] = report.abstract_edges;
  j["value"] = report.value;
  j["converged"] = report.estimate.converged;
  j["caps_hit"] = report.caps_hit;
  if (!report.failed_stage.empty()) j["failed_stage"] = report.failed_stage;
  j["guarantee"] = report.guarantee;
  Json trace = Json::array();
  for (const auto& step : report.estimate.trace)
    trace.push_back({{"n", step.n},
                     {"value_n", step.value_n},
                     {"lambda", step.lambda},
                     {"value_lambda", step.value_lambda}});
  j["diagnostics"] = std::move(trace);
  return j;
}

Json coupling_report_to_json(const CouplingReport& report) {
  Json j;
  j["episodes"] = report.episodes;
  j["blocks"] = report.blocks;
  j["eta"] = report.eta;
  j["m_eps"] = report.m_eps;
  j["eps"] = report.eps;
  j["horizon"] = report.horizon;
  j["mean_gap"] = report.mean_gap;
  j["gap_stderr"] = report.gap_stderr;
  j["mean_reward_gamma"] = report.mean_reward_gamma;
  j["mean_reward_abstract"] = report.mean_reward_abstract;
  Json hist = Json::object();
  for (const auto& [r, count] : report.t_ell_histogram) hist[std::to_string(r)] = count;
  j["t_ell_histogram"] = std::move(hist);
  j["case2_fraction"] = report.case2_fraction;
  j["seed"] = report.seed;
  return j;
}

void atomic_write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write to '" + tmp + "'");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace dsg
