#pragma once

#include <string>

#include "mchase/engine/run_record.hpp"

#include "json.hpp"

namespace mchase::io {

/// Fixed per-step column schema (stable across releases; golden-file tested):
///   t,time_s,mistake,u,branch,movement,dh_increment,halfspaces,generation,
///   xdd_desired,obs_0..,true_0..,theta_0..
std::string run_csv_header(const engine::RunRecord& rec);
void write_run_csv(const engine::RunRecord& rec, const std::string& path);

nlohmann::json summary_json(const engine::RunRecord& rec);
void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace mchase::io
