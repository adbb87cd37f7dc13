#include "mchase/io/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mchase::io {
namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::string run_csv_header(const engine::RunRecord& rec) {
    std::string h = "t,time_s,mistake,u,branch,movement,dh_increment,halfspaces,generation,xdd_desired";
    const int n_obs = rec.steps.empty() ? 0 : static_cast<int>(rec.steps.front().obs.size());
    const int n_true = rec.steps.empty() ? 0 : static_cast<int>(rec.steps.front().true_state.size());
    const int n_th = rec.steps.empty() ? 0 : static_cast<int>(rec.steps.front().theta.size());
    for (int i = 0; i < n_obs; ++i) h += ",obs_" + std::to_string(i);
    for (int i = 0; i < n_true; ++i) h += ",true_" + std::to_string(i);
    for (int i = 0; i < n_th; ++i) h += ",theta_" + std::to_string(i);
    return h;
}

void write_run_csv(const engine::RunRecord& rec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << run_csv_header(rec) << "\n";
    for (const auto& st : rec.steps) {
        out << st.t << ',' << fmt(st.time_s) << ',' << st.mistake << ',' << fmt(st.u) << ','
            << st.branch << ',' << fmt(st.movement) << ',' << fmt(st.dh_increment) << ','
            << st.halfspace_count << ',' << st.generation << ',' << fmt(st.xdd_desired);
        for (Eigen::Index i = 0; i < st.obs.size(); ++i) out << ',' << fmt(st.obs[i]);
        for (Eigen::Index i = 0; i < st.true_state.size(); ++i) out << ',' << fmt(st.true_state[i]);
        for (Eigen::Index i = 0; i < st.theta.size(); ++i) out << ',' << fmt(st.theta[i]);
        out << '\n';
    }
}

nlohmann::json summary_json(const engine::RunRecord& rec) {
    const auto& s = rec.summary;
    nlohmann::json j;
    j["config"] = rec.config_tag;
    j["seed"] = rec.master_seed;
    j["record_hash"] = rec.record_hash();
    j["mistakes"] = s.mistakes;
    j["first_success"] = s.first_success;
    j["terminal_clean_run"] = s.terminal_clean_run;
    j["terminal_fifth_mistakes"] = s.terminal_fifth_mistakes;
    j["completion_time_s"] = s.completion_time_s;
    j["safety_violations"] = s.safety_violations;
    j["max_abs_x"] = s.max_abs_x;
    j["max_abs_xdd"] = s.max_abs_xdd;
    j["max_state_norm"] = s.max_state_norm;
    j["widenings"] = s.widenings;
    j["diverged"] = s.diverged;
    j["truth_membership_ok"] = s.truth_membership_ok;
    j["nestedness_ok"] = s.nestedness_ok;
    j["total_movement"] = s.total_movement;
    j["steps"] = rec.steps.size();
    return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace mchase::io
