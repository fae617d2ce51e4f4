#pragma once

#include <set>
#include <string>
#include <vector>

#include "fairsched/model.hpp"

namespace fairsched {

/// Canonical course order: end ascending, ties by start ascending, then id
/// ascending. Every algorithm that walks courses "by earliest finish time"
/// uses this order, so runs are reproducible.
struct SortedCourseOrder {
    std::vector<std::string> order;
};

SortedCourseOrder sort_courses_by_end(const std::vector<Course>& courses);

/// Indices into `courses` in canonical order.
std::vector<std::size_t> sorted_course_indices(const std::vector<Course>& courses);

/// Ids of all other courses whose interval overlaps `course`'s interval.
std::set<std::string> conflict_set(const Course& course, const std::vector<Course>& courses);

/// Maximum-cardinality set of pairwise non-overlapping courses, computed by
/// the earliest-finish-time greedy over the canonical order. The result is
/// the unique greedy selection, not an arbitrary maximum set.
std::set<std::string> interval_mis(const std::vector<Course>& courses);

/// Same greedy, returning indices into `courses` in selection order.
std::vector<std::size_t> interval_mis_indices(const std::vector<Course>& courses);

}  // namespace fairsched
