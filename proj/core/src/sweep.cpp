#include "acdiag/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace acdiag::sweep {

std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    if (cost.rows() != cost.cols()) throw std::invalid_argument("solve_assignment: cost matrix must be square");
    const int n = static_cast<int>(cost.rows());
    if (n == 0) return {};

    // Potentials-and-augmenting-paths formulation with 1-based bookkeeping;
    // column 0 is the virtual unmatched slot.
    std::vector<double> row_potential(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> col_potential(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> matched_row(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> path(static_cast<std::size_t>(n) + 1, 0);

    for (int row = 1; row <= n; ++row) {
        matched_row[0] = row;
        int col0 = 0;
        std::vector<double> min_reduced(static_cast<std::size_t>(n) + 1, std::numeric_limits<double>::infinity());
        std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
        do {
            used[static_cast<std::size_t>(col0)] = true;
            const int row0 = matched_row[static_cast<std::size_t>(col0)];
            double delta = std::numeric_limits<double>::infinity();
            int col1 = 0;
            for (int col = 1; col <= n; ++col) {
                if (used[static_cast<std::size_t>(col)]) continue;
                const double reduced = cost(row0 - 1, col - 1) - row_potential[static_cast<std::size_t>(row0)] -
                                       col_potential[static_cast<std::size_t>(col)];
                if (reduced < min_reduced[static_cast<std::size_t>(col)]) {
                    min_reduced[static_cast<std::size_t>(col)] = reduced;
                    path[static_cast<std::size_t>(col)] = col0;
                }
                if (min_reduced[static_cast<std::size_t>(col)] < delta) {
                    delta = min_reduced[static_cast<std::size_t>(col)];
                    col1 = col;
                }
            }
            for (int col = 0; col <= n; ++col) {
                if (used[static_cast<std::size_t>(col)]) {
                    row_potential[static_cast<std::size_t>(matched_row[static_cast<std::size_t>(col)])] += delta;
                    col_potential[static_cast<std::size_t>(col)] -= delta;
                } else {
                    min_reduced[static_cast<std::size_t>(col)] -= delta;
                }
            }
            col0 = col1;
        } while (matched_row[static_cast<std::size_t>(col0)] != 0);
        do {
            const int col1 = path[static_cast<std::size_t>(col0)];
            matched_row[static_cast<std::size_t>(col0)] = matched_row[static_cast<std::size_t>(col1)];
            col0 = col1;
        } while (col0 != 0);
    }

    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    for (int col = 1; col <= n; ++col)
        if (matched_row[static_cast<std::size_t>(col)] != 0)
            row_to_col[static_cast<std::size_t>(matched_row[static_cast<std::size_t>(col)]) - 1] = col - 1;
    return row_to_col;
}

namespace {

void validate_sets(const std::vector<ParameterEigenSet>& sets, const IndexWindow& window, int& lo, int& hi) {
    if (sets.size() < 2) throw std::invalid_argument("track_branches: need at least 2 parameter points");
    const Eigen::Index rows = sets.front().vectors.rows();
    const Eigen::Index count = sets.front().values.size();
    double prev_parameter = -std::numeric_limits<double>::infinity();
    for (const auto& set : sets) {
        if (set.vectors.rows() != rows) throw std::invalid_argument("track_branches: inconsistent vector dimension");
        if (set.values.size() != count || set.vectors.cols() != count)
            throw std::invalid_argument("track_branches: inconsistent eigenpair count");
        if (set.parameter <= prev_parameter)
            throw std::invalid_argument("track_branches: parameters must be strictly increasing");
        prev_parameter = set.parameter;
        for (Eigen::Index i = 1; i < count; ++i)
            if (set.values[i] < set.values[i - 1])
                throw std::invalid_argument("track_branches: eigenvalues must be sorted ascending");
    }
    lo = window.lo;
    hi = window.hi < 0 ? static_cast<int>(count) : window.hi;
    if (lo < 0 || hi > count || lo >= hi)
        throw std::invalid_argument("track_branches: index window out of range");
}

}  // namespace

std::vector<EigenBranch> track_branches(const std::vector<ParameterEigenSet>& sets, IndexWindow window,
                                        TrackOptions options) {
    int lo = 0, hi = 0;
    validate_sets(sets, window, lo, hi);
    const int width = hi - lo;

    std::vector<EigenBranch> branches(static_cast<std::size_t>(width));
    for (int b = 0; b < width; ++b) {
        EigenBranch& branch = branches[static_cast<std::size_t>(b)];
        branch.id = b;
        branch.points.push_back({sets[0].parameter, sets[0].values[lo + b], 0, lo + b, 1.0, 1.0, false});
    }

    for (std::size_t t = 0; t + 1 < sets.size(); ++t) {
        const auto& current = sets[t];
        const auto& next = sets[t + 1];
        // overlap(b, c) between branch b's current state and window column c.
        Eigen::MatrixXd overlap(width, width);
        for (int b = 0; b < width; ++b) {
            const auto& point = branches[static_cast<std::size_t>(b)].points.back();
            overlap.row(b) =
                (current.vectors.col(point.column).transpose() * next.vectors.middleCols(lo, width)) * point.sign;
        }
        const std::vector<int> match = solve_assignment(Eigen::MatrixXd(1.0 - overlap.cwiseAbs().array()));
        for (int b = 0; b < width; ++b) {
            EigenBranch& branch = branches[static_cast<std::size_t>(b)];
            const int c = match[static_cast<std::size_t>(b)];
            const double o = overlap(b, c);
            BranchPoint point;
            point.parameter = next.parameter;
            point.value = next.values[lo + c];
            point.set_index = static_cast<int>(t + 1);
            point.column = lo + c;
            // o already carries the current point's sign, so the aligned
            // overlap (sign_t v_t) . (sign_{t+1} v_{t+1}) is nonnegative iff
            // sign_{t+1} = sgn(o).
            point.sign = o < 0.0 ? -1.0 : 1.0;
            point.overlap_from_prev = std::abs(o);
            point.break_before = std::abs(o) < options.overlap_floor;
            branch.points.push_back(point);
        }
    }
    return branches;
}

std::vector<AvoidedCrossing> detect_avoided_crossings(const std::vector<EigenBranch>& branches,
                                                      double gap_threshold_factor) {
    if (gap_threshold_factor < 1.0)
        throw std::invalid_argument("detect_avoided_crossings: threshold factor must be >= 1");
    std::vector<AvoidedCrossing> crossings;
    if (branches.size() < 2) return crossings;
    const std::size_t steps = branches.front().points.size();
    for (const auto& branch : branches)
        if (branch.points.size() != steps)
            throw std::invalid_argument("detect_avoided_crossings: branches have unequal lengths");
    if (steps < 3) throw std::invalid_argument("detect_avoided_crossings: need at least 3 parameter points");

    for (std::size_t a = 0; a < branches.size(); ++a) {
        for (std::size_t b = a + 1; b < branches.size(); ++b) {
            const auto& pa = branches[a].points;
            const auto& pb = branches[b].points;
            std::vector<double> gap(steps);
            for (std::size_t t = 0; t < steps; ++t) gap[t] = std::abs(pa[t].value - pb[t].value);

            for (std::size_t t = 1; t + 1 < steps; ++t) {
                const bool is_minimum =
                    gap[t] <= gap[t - 1] && gap[t] <= gap[t + 1] && (gap[t] < gap[t - 1] || gap[t] < gap[t + 1]);
                if (!is_minimum) continue;
                // Keep only the leftmost point of a flat-bottomed minimum.
                if (t >= 2 && gap[t] == gap[t - 1] && gap[t - 1] <= gap[t - 2]) continue;

                // Rank adjacency at the minimum: no third branch in between.
                const double low = std::min(pa[t].value, pb[t].value);
                const double high = std::max(pa[t].value, pb[t].value);
                bool adjacent = true;
                for (std::size_t other = 0; other < branches.size() && adjacent; ++other) {
                    if (other == a || other == b) continue;
                    const double v = branches[other].points[t].value;
                    if (v > low && v < high) adjacent = false;
                }
                if (!adjacent) continue;

                AvoidedCrossing crossing;
                const bool a_is_low = pa[t].value <= pb[t].value;
                crossing.branch_low = a_is_low ? branches[a].id : branches[b].id;
                crossing.branch_high = a_is_low ? branches[b].id : branches[a].id;
                crossing.rank_low = std::min(pa[t].column, pb[t].column);
                crossing.location = pa[t].parameter;
                crossing.min_gap = gap[t];

                const double ceiling = gap_threshold_factor * gap[t];
                std::size_t left = t, right = t;
                while (left > 0 && gap[left - 1] <= ceiling) --left;
                while (right + 1 < steps && gap[right + 1] <= ceiling) ++right;
                crossing.window_lo = pa[left].parameter;
                crossing.window_hi = pa[right].parameter;
                crossings.push_back(crossing);
            }
        }
    }
    std::sort(crossings.begin(), crossings.end(), [](const AvoidedCrossing& lhs, const AvoidedCrossing& rhs) {
        if (lhs.location != rhs.location) return lhs.location < rhs.location;
        if (lhs.min_gap != rhs.min_gap) return lhs.min_gap < rhs.min_gap;
        if (lhs.branch_low != rhs.branch_low) return lhs.branch_low < rhs.branch_low;
        return lhs.branch_high < rhs.branch_high;
    });
    return crossings;
}

AvoidedCrossing refine_crossing(const SolveValues& solve, const AvoidedCrossing& crossing, int levels) {
    if (levels <= 0) throw std::invalid_argument("refine_crossing: levels must be positive");
    const int rank = crossing.rank_low;
    auto gap_at = [&](double parameter) {
        const Eigen::VectorXd values = solve(parameter);
        if (rank + 1 >= values.size()) throw std::invalid_argument("refine_crossing: rank outside solved spectrum");
        return values[rank + 1] - values[rank];
    };

    constexpr double kInvPhi = 0.61803398874989485;
    double a = crossing.window_lo;
    double b = crossing.window_hi;
    if (!(b > a)) return crossing;

    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double gc = gap_at(c);
    double gd = gap_at(d);

    // Unimodality probe: a bracketed minimum must dip below both endpoints.
    if (std::min(gc, gd) > std::min(gap_at(a), gap_at(b))) {
        AvoidedCrossing coarse = crossing;
        coarse.refined = false;
        return coarse;
    }

    double previous_gap = std::numeric_limits<double>::infinity();
    for (int level = 0; level < levels; ++level) {
        if (gc < gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - kInvPhi * (b - a);
            gc = gap_at(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + kInvPhi * (b - a);
            gd = gap_at(d);
        }
        const double best = std::min(gc, gd);
        if (std::abs(previous_gap - best) <= 1e-8 * std::max(std::abs(best), 1e-300) &&
            (b - a) <= 1e-10 * std::max(std::abs(a) + std::abs(b), 1.0))
            break;
        previous_gap = best;
    }

    AvoidedCrossing refined = crossing;
    refined.location = gc < gd ? c : d;
    refined.min_gap = std::min(gc, gd);
    refined.refined = true;
    return refined;
}

}  // namespace acdiag::sweep
