#pragma once

// JSON forms of configs and results. Parse errors are ConfigErrors whose
// message starts with the path of the offending field, e.g. "grid.qubits: ...".

#include <nlohmann/json.hpp>

#include "cascade_vqa/ansatz.hpp"
#include "cascade_vqa/fem_grid.hpp"
#include "cascade_vqa/optimizer.hpp"
#include "cascade_vqa/sampling.hpp"
#include "cascade_vqa/vqa/campaign.hpp"

namespace cvqa::json_io {

using nlohmann::json;

/// Grid object: {"qubits", "conductivity", "dirichlet": [...], "neumann": [...]}.
/// Missing boundary lists fall back to BoundarySpec::defaults().
json grid_to_json(const fem::GridSpec& spec, const fem::BoundarySpec& bc);
std::pair<fem::GridSpec, fem::BoundarySpec> grid_from_json(const json& j,
                                                           const std::string& path = "grid");

json to_json(const ansatz::AnsatzSpec& spec);
/// "family" is required. Depth comes from "reps" (+ "final_layer"), else from
/// "params", else the default budget for the qubit count.
ansatz::AnsatzSpec ansatz_from_json(const json& j, int qubits,
                                    const std::string& path = "ansatz");

json to_json(const opt::OptimizerConfig& cfg);
opt::OptimizerConfig optimizer_from_json(const json& j, const std::string& path = "optimizer");

json to_json(const opt::OptimResult& result, bool with_trace = true);
opt::OptimResult optim_result_from_json(const json& j);

json to_json(const vqa::Metrics& m);
vqa::Metrics metrics_from_json(const json& j);

/// Cascade sources are nested under "source" without their traces. Wall time is omitted.
json to_json(const vqa::RunRecord& record, bool with_trace = true);
vqa::RunRecord run_record_from_json(const json& j);

json to_json(const vqa::CampaignSummary& s);

json to_json(const sampling::ShotResult& shots);
sampling::ShotResult shot_result_from_json(const json& j);

}  // namespace cvqa::json_io
