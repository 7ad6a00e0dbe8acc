#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "dsg/abstract.hpp"
#include "dsg/coupling.hpp"
#include "dsg/game.hpp"
#include "dsg/pipeline.hpp"
#include "dsg/structure.hpp"

namespace dsg {

using Json = nlohmann::ordered_json;

// Game file schema: states/actions1/actions2/signals as string arrays,
// transitions as {from, a1, a2, to, signal, prob} records, rewards as
// {state, a1, a2, value} records (missing entries default to 0), and
// initial_belief as {state, prob} records. A (state, a1, a2) combination
// with no transition records at all is a parse error.
GameSpec game_from_json(const Json& j);
Json game_to_json(const GameSpec& spec);
GameSpec load_game(const std::string& path);

// The abstract game in the same schema, with opaque state labels and the
// revealing signal convention, so the solver commands accept it unchanged.
Json abstract_game_to_json(const AbstractGame& ag);

Json certificate_to_json(const DoeblinCertificate& cert);
DoeblinCertificate certificate_from_json(const Json& j);
DoeblinCertificate load_certificate(const std::string& path);

Json validation_to_json(const ValidationReport& report);
Json pipeline_report_to_json(const PipelineReport& report);
Json coupling_report_to_json(const CouplingReport& report);

// Writes through a temp file plus rename so readers never observe a partial
// report.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace dsg
