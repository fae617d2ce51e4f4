#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fairsched/model.hpp"

namespace fairsched {

enum class Algorithm { RoundRobin, MisRoundRobin, Ef1ccRoundRobin, MaxMinAugmenting, DpExact };

struct AlgorithmChoice {
    Algorithm kind = Algorithm::RoundRobin;
    int dp_max_students = 3;  // DpExact only

    std::string name() const;
    /// Accepts the CLI names: round-robin, mis, ef1cc, maxmin, dp.
    static AlgorithmChoice from_name(const std::string& name);
};

/// Walks courses by earliest finish time and hands each one to the eligible
/// student with the fewest assigned courses, ties by student index. Ignores
/// utility values; intended for uniform utilities.
Allocation round_robin(const Instance& instance);

/// Processes students once each in non-increasing credit-cap order (ties by
/// id); each takes the earliest-finishing prefix of the maximum independent
/// set of remaining desired courses, truncated to their cap. Requires binary
/// (or uniform) utilities and unit course credits.
Allocation mis_round_robin(const Instance& instance);

/// round_robin restricted to students who desire the course; ties among
/// minimum-load students go to the lowest student id. Requires binary (or
/// uniform) utilities.
Allocation ef1cc_round_robin(const Instance& instance);

/// Greedy assignment as in ef1cc_round_robin, followed after every
/// assignment by augmenting-path transfers that move load from the student
/// who just received a course toward strictly lighter students, until no
/// augmenting path remains.
Allocation maxmin_augmenting(const Instance& instance,
                             std::optional<std::size_t> max_augmentations_per_course = {});

enum class AugmentEdgeReason { ConflictSwap, DummyEntry };

struct AugmentEdge {
    bool from_dummy = false;  // true: `from` is a student id (dummy node d_from)
    std::string from;         // course id, or student id when from_dummy
    std::string to;           // course id
    AugmentEdgeReason reason = AugmentEdgeReason::ConflictSwap;
};

struct AugmentGraph {
    std::vector<std::string> course_nodes;  // assigned courses of expanded students
    std::vector<std::string> dummy_nodes;   // one per student
    std::vector<AugmentEdge> edges;
    std::set<std::string> processed;  // students expanded by the breadth-first build
};

struct AugmentPath {
    std::string dummy_student;         // source d_b
    std::vector<std::string> courses;  // first moves to dummy_student; each later
                                       // course moves to its predecessor's owner
};

/// Breadth-first construction of the reassignment graph, expanding students
/// starting from `from_student`.
AugmentGraph build_augment_graph(const Instance& instance, const Allocation& alloc,
                                 const std::string& from_student);

/// Shortest directed path from any dummy node to a course held by
/// `sink_student`, if one exists.
std::optional<AugmentPath> find_augmenting_path(const AugmentGraph& graph,
                                                const Allocation& alloc,
                                                const std::string& sink_student);

struct DpResult {
    double value = 0;
    Allocation allocation;
};

inline constexpr std::size_t kDefaultDpStateBudget = 2'000'000;

/// Exact maximum social welfare for a handful of students via memoized
/// recursion over (remaining credits, next free time, course index), courses
/// taken in non-decreasing start order. Arbitrary utilities and credits.
DpResult dp_exact_small(const Instance& instance,
                        std::size_t max_states = kDefaultDpStateBudget,
                        int max_students = 3);

/// Dispatch by AlgorithmChoice.
Allocation run_algorithm(const Instance& instance, const AlgorithmChoice& choice);

}  // namespace fairsched
