#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "mchase/chase/regressor.hpp"
#include "mchase/geom/directions.hpp"
#include "mchase/geom/polytope.hpp"

namespace mchase::chase {

struct ChasingOptions {
    int prune_every = 50;       // prune after this many stored halfspaces
    double widen_factor = 1.5;  // noise-bound growth on inconsistency
    double redundancy_tol = 1e-9;
    // Halfspaces must cut at least this deep (normalized units) to be worth
    // storing; shallower cuts leave a negligibly larger region and would
    // force a support refresh per step on noise-free streams.
    double min_cut = 1e-4;
};

struct UpdateOutcome {
    bool region_changed = false;
    bool inconsistent = false;  // consistent set became empty
    int appended = 0;
    int filtered = 0;
    double dh_increment = 0.0;  // directional estimate of the region shrink
};

/// The consistent-parameter set P(D_t) for a linearly parametrized system,
/// maintained online as box-plus-halfspaces, together with the SEL selection
/// rules operating on it. One instance per episode, single-threaded.
class ConsistentState {
public:
    ConsistentState(geom::Box param_box, RegressorSpec spec,
                    geom::DirectionSet dirs, ChasingOptions opts = {});

    /// Append one observation. Halfspaces that are already implied by the
    /// current region are certified redundant (bounding-box check, then LP)
    /// and dropped; everything else shrinks the region. Emptiness is reported
    /// through the outcome, never clamped away.
    UpdateOutcome update(const DataPoint& d);

    /// Append bare halfspaces (synthetic nested streams, demos). Same
    /// filtering and pruning as update().
    UpdateOutcome update_raw(const std::vector<geom::Halfspace>& hs);

    /// Grow the declared disturbance bounds by opts.widen_factor and rebuild
    /// the region from the stored history. Returns false if still empty.
    bool widen_and_rebuild();

    const geom::Polytope& polytope() const { return poly_; }
    const geom::Box& bounding_box() const { return bbox_; }
    const geom::DirectionSet& directions() const { return dirs_; }
    const std::vector<DataPoint>& history() const { return history_; }
    std::shared_ptr<const Eigen::VectorXd> supports() const { return supports_; }
    std::uint64_t generation() const { return generation_; }
    int halfspace_count() const { return static_cast<int>(poly_.halfspaces().size()); }
    double noise_scale() const { return noise_scale_; }
    const Eigen::VectorXd& last_selected() const { return last_selected_; }

    /// Steiner-point selection (SEL_s). Deterministic given the DirectionSet;
    /// an unchanged region returns the cached point bit-identically.
    Eigen::VectorXd sel_steiner();

    /// Greedy projection selection (SEL_p): closest consistent point to the
    /// previous selection.
    Eigen::VectorXd sel_greedy();

    /// Projection-based weak chasing: any consistent point moving at most
    /// gamma * dist(P, theta_prev); realized via exact projection (gamma = 1
    /// up to solver tolerance), so gamma only relaxes the caller's audit.
    Eigen::VectorXd sel_weak_projection(double gamma = 1.0);

private:
    void refresh_region_caches();
    UpdateOutcome apply_halfspaces(const std::vector<geom::Halfspace>& hs);
    bool try_append(const std::vector<geom::Halfspace>& hs, UpdateOutcome& out);

    geom::Box initial_box_;
    geom::Polytope poly_;
    geom::Box bbox_;
    RegressorSpec spec_;
    geom::DirectionSet dirs_;
    ChasingOptions opts_;

    std::vector<DataPoint> history_;
    std::vector<geom::Halfspace> raw_history_;
    std::shared_ptr<const Eigen::VectorXd> supports_;
    std::vector<Eigen::VectorXd> support_argmax_;   // per direction
    std::vector<geom::Halfspace> pending_cuts_;     // appended since refresh
    Eigen::VectorXd last_selected_;
    bool have_selection_ = false;
    Eigen::VectorXd cached_steiner_;
    bool steiner_dirty_ = true;
    std::uint64_t generation_ = 0;
    int since_prune_ = 0;
    double noise_scale_ = 1.0;
};

}  // namespace mchase::chase
