#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ssu/error.hpp"

namespace ssu {

/// Dense row-major matrix; rows are relays, columns are users.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using BoolMatrix = Matrix<std::uint8_t>;

/// Which links pay the switching penalty b * value.
enum class PenaltyMode {
    /// Links absent from the previous plan (handovers and new connections).
    NewLinksOnly,
    /// Every active link, as in the unrestricted objective.
    AllLinks,
};

struct SessionProblem {
    std::size_t session_index = 0;
    Matrix<double> value;  // N relays x M users, bits
    BoolMatrix feasible;
    std::vector<int> capacity;  // per relay
    std::optional<BoolMatrix> previous;
    double penalty_fraction = 0.0;
    PenaltyMode penalty_mode = PenaltyMode::NewLinksOnly;

    std::size_t relays() const noexcept { return value.rows(); }
    std::size_t users() const noexcept { return value.cols(); }

    /// Throws DimensionMismatch or ConfigError.
    void validate() const;
    /// Value net of the switching penalty for relay j serving user i.
    double net_value(std::size_t j, std::size_t i) const;
};

struct AssignmentPlan {
    BoolMatrix assignment;              // N x M
    std::vector<int> per_relay_load;    // column sums by relay
    std::vector<std::optional<std::size_t>> relay_of_user;
    double objective = 0.0;
    std::size_t switches = 0;
};

/// Maps min(backlog, deliverable) to the value of a link in a session.
using ValueFunction = std::function<double(double bits, std::size_t session_index)>;

/// value(j, i) = phi(min(backlog[i], deliverable(j, i))) on feasible pairs, 0 elsewhere.
/// phi defaults to the identity.
SessionProblem build_session(std::size_t session_index, std::span<const double> backlog_bits,
                             const Matrix<double>& deliverable_bits, const BoolMatrix& feasible,
                             std::span<const int> capacity, const std::optional<BoolMatrix>& previous,
                             double penalty_fraction, const ValueFunction& phi = {});

/// Optimal plan for one session: maximizes the summed net value subject to
/// one relay per user and relay capacities. Links with zero net value are
/// left out of the plan.
AssignmentPlan solve_session(const SessionProblem& problem);

/// Plan bookkeeping (loads, objective, switches) for a given assignment.
AssignmentPlan evaluate_plan(const SessionProblem& problem, const BoolMatrix& assignment);

/// Builds each session from the realized previous plan and solves it.
using SessionBuilder = std::function<SessionProblem(const std::optional<BoolMatrix>& previous)>;
std::vector<AssignmentPlan> schedule_horizon(std::span<const SessionBuilder> sessions);

/// Minimum-cost assignment of every row to a distinct column of a
/// rows <= cols cost matrix. Returns the column chosen for each row.
std::vector<std::size_t> hungarian_min_cost(const Matrix<double>& cost);

}  // namespace ssu
