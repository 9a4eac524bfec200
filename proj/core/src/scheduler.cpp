#include "ssu/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ssu {

void SessionProblem::validate() const {
    const std::size_t n = relays();
    const std::size_t m = users();
    if (feasible.rows() != n || feasible.cols() != m) throw DimensionMismatch("feasibility mask shape differs from values");
    if (capacity.size() != n) throw DimensionMismatch("capacity vector length differs from relay count");
    if (previous && (previous->rows() != n || previous->cols() != m)) {
        throw DimensionMismatch("previous plan shape differs from values");
    }
    if (!(penalty_fraction >= 0.0 && penalty_fraction < 1.0)) throw ConfigError("penalty fraction must lie in [0, 1)");
    for (int c : capacity) {
        if (c < 0) throw ConfigError("relay capacity must be >= 0");
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            const double v = value(j, i);
            if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("session values must be finite and >= 0");
            if (!feasible(j, i) && v != 0.0) throw ConfigError("infeasible pairs must carry zero value");
        }
    }
}

double SessionProblem::net_value(std::size_t j, std::size_t i) const {
    const double v = value(j, i);
    const bool penalized = penalty_mode == PenaltyMode::AllLinks || !previous || !(*previous)(j, i);
    return penalized ? v - penalty_fraction * v : v;
}

SessionProblem build_session(std::size_t session_index, std::span<const double> backlog_bits,
                             const Matrix<double>& deliverable_bits, const BoolMatrix& feasible,
                             std::span<const int> capacity, const std::optional<BoolMatrix>& previous,
                             double penalty_fraction, const ValueFunction& phi) {
    const std::size_t n = deliverable_bits.rows();
    const std::size_t m = deliverable_bits.cols();
    if (backlog_bits.size() != m) throw DimensionMismatch("backlog length differs from user count");
    if (feasible.rows() != n || feasible.cols() != m) throw DimensionMismatch("feasibility mask shape differs");
    if (capacity.size() != n) throw DimensionMismatch("capacity length differs from relay count");
    if (previous && (previous->rows() != n || previous->cols() != m)) {
        throw DimensionMismatch("previous plan shape differs");
    }
    SessionProblem p;
    p.session_index = session_index;
    p.value = Matrix<double>(n, m, 0.0);
    p.feasible = feasible;
    p.capacity.assign(capacity.begin(), capacity.end());
    p.previous = previous;
    p.penalty_fraction = penalty_fraction;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            if (!feasible(j, i)) continue;
            const double x = std::min(backlog_bits[i], deliverable_bits(j, i));
            p.value(j, i) = std::max(0.0, phi ? phi(x, session_index) : x);
        }
    }
    return p;
}

std::vector<std::size_t> hungarian_min_cost(const Matrix<double>& a) {
    // Shortest augmenting paths with row/column potentials, O(n^2 m).
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    if (n > m) throw DimensionMismatch("assignment needs at least as many columns as rows");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    std::vector<char> used(m + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> col_of_row(n, 0);
    for (std::size_t j = 1; j <= m; ++j) {
        if (p[j] != 0) col_of_row[p[j] - 1] = j - 1;
    }
    return col_of_row;
}

AssignmentPlan evaluate_plan(const SessionProblem& problem, const BoolMatrix& assignment) {
    const std::size_t n = problem.relays();
    const std::size_t m = problem.users();
    AssignmentPlan plan;
    plan.assignment = assignment;
    plan.per_relay_load.assign(n, 0);
    plan.relay_of_user.assign(m, std::nullopt);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            if (!assignment(j, i)) continue;
            ++plan.per_relay_load[j];
            plan.relay_of_user[i] = j;
            plan.objective += problem.net_value(j, i);
            if (!problem.previous || !(*problem.previous)(j, i)) ++plan.switches;
        }
    }
    return plan;
}

AssignmentPlan solve_session(const SessionProblem& problem) {
    problem.validate();
    const std::size_t n = problem.relays();
    const std::size_t m = problem.users();

    // Expand each useful relay into unit slots; a relay never needs more
    // slots than it has users with positive net value.
    std::vector<std::size_t> slot_relay;
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t useful = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (problem.feasible(j, i) && problem.net_value(j, i) > 0.0) ++useful;
        }
        const std::size_t slots = std::min<std::size_t>(useful, static_cast<std::size_t>(problem.capacity[j]));
        slot_relay.insert(slot_relay.end(), slots, j);
    }

    BoolMatrix assignment(n, m, 0);
    if (m == 0 || slot_relay.empty()) return evaluate_plan(problem, assignment);

    // One dummy column per user stands for "unassigned".
    const std::size_t cols = slot_relay.size() + m;
    Matrix<double> cost(m, cols, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t s = 0; s < slot_relay.size(); ++s) {
            const std::size_t j = slot_relay[s];
            if (problem.feasible(j, i)) cost(i, s) = -std::max(0.0, problem.net_value(j, i));
        }
    }
    const std::vector<std::size_t> col = hungarian_min_cost(cost);
    for (std::size_t i = 0; i < m; ++i) {
        if (col[i] >= slot_relay.size()) continue;
        const std::size_t j = slot_relay[col[i]];
        if (problem.feasible(j, i) && problem.net_value(j, i) > 0.0) assignment(j, i) = 1;
    }
    return evaluate_plan(problem, assignment);
}

std::vector<AssignmentPlan> schedule_horizon(std::span<const SessionBuilder> sessions) {
    std::vector<AssignmentPlan> plans;
    plans.reserve(sessions.size());
    std::optional<BoolMatrix> previous;
    for (const SessionBuilder& build : sessions) {
        plans.push_back(solve_session(build(previous)));
        previous = plans.back().assignment;
    }
    return plans;
}

}  // namespace ssu
