#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "acdiag/common.hpp"

namespace acdiag::sweep {

/// Sorted eigenpairs at one value of the control parameter. Vector columns
/// must share one dimension across the whole sweep so overlaps are defined.
struct ParameterEigenSet {
    double parameter = 0.0;
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns matching `values`
};

/// Half-open range of sorted indices to track; hi == -1 means "all".
struct IndexWindow {
    int lo = 0;
    int hi = -1;
};

struct BranchPoint {
    double parameter = 0.0;
    double value = 0.0;
    int set_index = 0;              // which ParameterEigenSet
    int column = 0;                 // sorted index inside that set
    double sign = 1.0;              // alignment factor for the referenced vector
    double overlap_from_prev = 1.0; // |<psi(t-1)|psi(t)>|, 1 at the first point
    bool break_before = false;      // overlap floor violated on the step into this point
};

/// An adiabatically tracked eigenpair sequence. Identity follows state
/// character via overlaps, not energy ordering.
struct EigenBranch {
    int id = 0;
    std::vector<BranchPoint> points;
    bool has_break() const {
        for (const auto& p : points)
            if (p.break_before) return true;
        return false;
    }
};

struct TrackOptions {
    double overlap_floor = 0.5;
};

/// Minimal-cost perfect assignment (Hungarian / Jonker-Volgenant scheme) on a
/// square cost matrix; returns the column matched to each row.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

/// Tracks branches through the sorted index window by maximizing the summed
/// |overlap| between consecutive eigensets with an optimal one-to-one
/// assignment. Signs are aligned so consecutive overlaps are nonnegative;
/// matches below the overlap floor are flagged as tracking breaks rather
/// than silently joined.
std::vector<EigenBranch> track_branches(const std::vector<ParameterEigenSet>& sets, IndexWindow window = {},
                                        TrackOptions options = {});

struct AvoidedCrossing {
    int branch_low = 0;    // branch id with the lower eigenvalue at the minimum
    int branch_high = 0;
    int rank_low = 0;      // sorted index of the lower state at the minimum
    double location = 0.0;
    double min_gap = 0.0;
    double window_lo = 0.0;  // hybridization window (gap <= factor * min gap)
    double window_hi = 0.0;
    bool refined = false;
};

/// Interior local minima of |value_i - value_j| over every pair of tracked
/// branches that is rank-adjacent at the minimum. The hybridization window is
/// the maximal contiguous region around the minimum where the gap stays below
/// gap_threshold_factor times the minimum gap.
std::vector<AvoidedCrossing> detect_avoided_crossings(const std::vector<EigenBranch>& branches,
                                                      double gap_threshold_factor = 2.0);

/// Resolves the sorted eigenvalues at an arbitrary parameter value.
using SolveValues = std::function<Eigen::VectorXd(double)>;

/// Golden-section refinement of the gap minimum inside a crossing's window.
/// Falls back to the coarse result (refined = false) if the bracketed gap is
/// not unimodal.
AvoidedCrossing refine_crossing(const SolveValues& solve, const AvoidedCrossing& crossing, int levels = 48);

}  // namespace acdiag::sweep
