#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fairsched/model.hpp"

namespace fairsched {

struct SolverLimits {
    int max_students = 5;
    std::size_t max_courses = 20;
    std::uint64_t node_budget = 200'000'000;
};

struct OracleResult {
    double value = 0;
    Allocation allocation;
    std::uint64_t nodes_explored = 0;
    bool proven_optimal = true;
};

/// Exact maximum social welfare. Depth-first branch and bound over courses in
/// canonical end-time order, branching on (each feasible student | charity),
/// pruning with current + sum of per-course best utilities over the
/// remaining courses. Exhausting the node budget raises BudgetExceeded; a
/// non-optimal value is never returned silently.
OracleResult opt_social_welfare(const Instance& instance, const SolverLimits& limits = {});

/// Exact max-min utility, found by descending feasibility search over integer
/// thresholds starting at the floor(U/n) bound (tightened by per-student
/// desired-MIS sizes for binary/uniform utilities). Utilities must be
/// integer-valued.
OracleResult opt_maxmin(const Instance& instance, const SolverLimits& limits = {});

/// Exact maximum social welfare among allocations giving every student at
/// least `threshold` utility. Raises InfeasibleThreshold when no valid
/// allocation meets it.
OracleResult opt_sw_given_maxmin(const Instance& instance, double threshold,
                                 const SolverLimits& limits = {});

/// Degree-capped bipartite node.
struct ConflictNode {
    std::string id;
    int capacity = 1;  // b(v)
};

struct WeightedEdge {
    std::string agent;
    std::string resource;
    double weight = 0;
};

/// b-matching with same-side conflict pairs: no node may be matched to both
/// endpoints of a conflict pair.
struct GeneralConflictInstance {
    std::vector<ConflictNode> agents;
    std::vector<ConflictNode> resources;
    std::vector<WeightedEdge> edges;
    std::vector<std::pair<std::string, std::string>> conflicts;
};

/// Maximum-weight feasible edge subset. The result allocation maps agent ids
/// to matched resource ids; unmatched resources land in charity.
OracleResult solve_bmatching_with_conflicts(const GeneralConflictInstance& g,
                                            const SolverLimits& limits = {});

/// Transcription showing the course-allocation problem is a special case of
/// b-matching with conflicts: students become agents with b = credit cap,
/// seat-expanded courses become unit-capacity resources, and overlapping
/// course pairs become resource-side conflicts. Requires unit credits.
GeneralConflictInstance bmatching_from_instance(const Instance& instance);

}  // namespace fairsched
