#include "mchase/chase/consistent.hpp"

#include <cmath>
#include <stdexcept>

namespace mchase::chase {

using geom::Halfspace;
using geom::LpStatus;

ConsistentState::ConsistentState(geom::Box param_box, RegressorSpec spec,
                                 geom::DirectionSet dirs, ChasingOptions opts)
    : initial_box_(param_box),
      poly_(std::move(param_box)),
      bbox_(poly_.box()),
      spec_(std::move(spec)),
      dirs_(std::move(dirs)),
      opts_(opts) {
    if (dirs_.dim() != poly_.dim())
        throw std::invalid_argument("ConsistentState: direction set dimension mismatch");
    refresh_region_caches();
}

void ConsistentState::refresh_region_caches() {
    // A direction's support can only drop if one of the new halfspaces cuts
    // off its cached maximizer; everything else keeps (value, argmax) exactly.
    auto h = std::make_shared<Eigen::VectorXd>(dirs_.size());
    const bool warm = static_cast<int>(support_argmax_.size()) == dirs_.size();
    if (warm && supports_) {
        for (int i = 0; i < dirs_.size(); ++i) {
            bool still_feasible = true;
            for (const auto& hs : pending_cuts_)
                if (hs.normal.dot(support_argmax_[static_cast<size_t>(i)]) > hs.offset + 1e-12) {
                    still_feasible = false;
                    break;
                }
            if (still_feasible) {
                (*h)[i] = (*supports_)[i];
            } else {
                const auto sup = geom::support(poly_, dirs_[i]);
                (*h)[i] = sup.value;
                support_argmax_[static_cast<size_t>(i)] = sup.argmax;
            }
        }
    } else {
        support_argmax_.assign(static_cast<size_t>(dirs_.size()), Eigen::VectorXd());
        for (int i = 0; i < dirs_.size(); ++i) {
            const auto sup = geom::support(poly_, dirs_[i]);
            (*h)[i] = sup.value;
            support_argmax_[static_cast<size_t>(i)] = sup.argmax;
        }
    }
    pending_cuts_.clear();
    const int n = poly_.dim();
    Eigen::VectorXd lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        hi[i] = (*h)[2 * i];        // axis pairs come first in the set
        lo[i] = -(*h)[2 * i + 1];
        if (lo[i] > hi[i]) {        // thin region; keep the box valid
            const double mid = 0.5 * (lo[i] + hi[i]);
            lo[i] = hi[i] = mid;
        }
    }
    bbox_ = geom::Box(lo, hi);
    supports_ = std::move(h);
    steiner_dirty_ = true;
}

bool ConsistentState::try_append(const std::vector<Halfspace>& hs, UpdateOutcome& out) {
    bool appended_any = false;
    for (const auto& raw : hs) {
        const double scale = raw.normal.norm();
        if (scale < 1e-14) {
            // Degenerate row 0 <= offset: vacuous when satisfied, otherwise a
            // direct inconsistency signal (noise bound too small).
            if (raw.offset >= -opts_.redundancy_tol) ++out.filtered;
            else out.inconsistent = true;
            continue;
        }
        Halfspace h(raw.normal / scale, raw.offset / scale);

        // Cheap certificate: the halfspace cannot cut (deep enough) if it
        // nearly holds on the region's bounding box. Sound forever, the
        // region only shrinks.
        if (bbox_.support(h.normal) <= h.offset + opts_.min_cut) {
            ++out.filtered;
            continue;
        }
        const auto sup = geom::solve_support_lp(poly_.box(), poly_.halfspaces(), h.normal);
        if (sup.status == LpStatus::Optimal && sup.value <= h.offset + opts_.min_cut) {
            ++out.filtered;
            continue;
        }
        pending_cuts_.push_back(h);
        poly_.append(std::move(h));
        ++generation_;
        ++since_prune_;
        ++out.appended;
        appended_any = true;
    }
    return appended_any;
}

UpdateOutcome ConsistentState::update(const DataPoint& d) {
    history_.push_back(d);
    return apply_halfspaces(halfspaces_from_observation(spec_, d, noise_scale_, noise_scale_));
}

UpdateOutcome ConsistentState::update_raw(const std::vector<Halfspace>& hs) {
    raw_history_.insert(raw_history_.end(), hs.begin(), hs.end());
    return apply_halfspaces(hs);
}

UpdateOutcome ConsistentState::apply_halfspaces(const std::vector<Halfspace>& hs) {
    UpdateOutcome out;
    const bool appended = try_append(hs, out);
    if (out.inconsistent) return out;
    if (!appended) return out;

    out.region_changed = true;
    if (geom::is_empty(poly_)) {
        out.inconsistent = true;  // noise bound misspecified; caller decides
        return out;
    }
    if (since_prune_ >= opts_.prune_every) {
        poly_ = geom::prune_redundant(poly_);
        since_prune_ = 0;
    }
    const Eigen::VectorXd old = *supports_;
    refresh_region_caches();
    out.dh_increment = (old - *supports_).maxCoeff();
    return out;
}

bool ConsistentState::widen_and_rebuild() {
    noise_scale_ *= opts_.widen_factor;

    // Disturbance-bound coordinates get a wider admissible range as well.
    geom::Box box = initial_box_;
    for (int row = 0; row < spec_.n_out; ++row) {
        const int j = spec_.noise_row_param[static_cast<size_t>(row)];
        if (j >= 0) box.upper[j] = box.lower[j] + noise_scale_ * (initial_box_.upper[j] - initial_box_.lower[j]);
    }
    poly_ = geom::Polytope(box);
    bbox_ = box;
    since_prune_ = 0;
    support_argmax_.clear();  // region grew; warm cache invalid
    pending_cuts_.clear();

    UpdateOutcome scratch;
    for (const auto& d : history_) {
        const bool appended =
            try_append(halfspaces_from_observation(spec_, d, noise_scale_, noise_scale_), scratch);
        if (scratch.inconsistent) return false;
        if (since_prune_ >= opts_.prune_every) {
            poly_ = geom::prune_redundant(poly_);
            since_prune_ = 0;
        }
        if (appended && geom::is_empty(poly_)) return false;
    }
    if (!raw_history_.empty()) {
        UpdateOutcome raw_out;
        try_append(raw_history_, raw_out);
        if (raw_out.inconsistent) return false;
        if (raw_out.appended > 0 && geom::is_empty(poly_)) return false;
    }
    refresh_region_caches();
    return true;
}

Eigen::VectorXd ConsistentState::sel_steiner() {
    if (steiner_dirty_) {
        cached_steiner_ = geom::steiner_from_supports(poly_, dirs_, *supports_);
        steiner_dirty_ = false;
    }
    last_selected_ = cached_steiner_;
    have_selection_ = true;
    return cached_steiner_;
}

Eigen::VectorXd ConsistentState::sel_greedy() {
    if (!have_selection_) {
        last_selected_ = bbox_.center();
        have_selection_ = true;
        return last_selected_;
    }
    last_selected_ = geom::project(poly_, last_selected_);
    return last_selected_;
}

Eigen::VectorXd ConsistentState::sel_weak_projection(double gamma) {
    (void)gamma;  // projection realizes gamma = 1, the tightest admissible
    return sel_greedy();
}

}  // namespace mchase::chase
