#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fairsched/errors.hpp"

namespace fairsched {

/// Half-open interval [start, end) over discrete integer time steps.
struct TimeInterval {
    int start = 0;
    int end = 0;

    int duration() const { return end - start; }

    friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

/// True iff the intervals strictly overlap. Touching endpoints ([0,3) and
/// [3,5)) do not conflict.
bool overlaps(const TimeInterval& a, const TimeInterval& b);

enum class UtilityKind { Uniform, Binary, General };

/// Per-student valuation over courses. Values are always looked up by the
/// course's origin id, so every seat copy of a course inherits its value.
struct UtilitySpec {
    UtilityKind kind = UtilityKind::Uniform;
    std::set<std::string> desired;           // Binary only
    std::map<std::string, double> values;    // General only; absent key = 0

    double value(const std::string& origin_id) const;

    static UtilitySpec uniform();
    static UtilitySpec binary(std::set<std::string> desired_ids);
    static UtilitySpec general(std::map<std::string, double> course_values);

    friend bool operator==(const UtilitySpec&, const UtilitySpec&) = default;
};

struct Student {
    std::string id;
    int credit_cap = 0;
    UtilitySpec utility;

    friend bool operator==(const Student&, const Student&) = default;
};

/// One seat of a course after expansion; before expansion, `seats` may be > 1
/// and `origin_id == id`.
struct Course {
    std::string id;
    std::string origin_id;
    TimeInterval interval;
    int credits = 1;
    int seats = 1;

    friend bool operator==(const Course&, const Course&) = default;
};

struct Instance {
    std::vector<Student> students;
    std::vector<Course> courses;
    bool expanded = false;

    const Student* find_student(const std::string& id) const;
    const Course* find_course(const std::string& id) const;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Per-student course bundles plus the charity set of unassigned courses.
struct Allocation {
    std::map<std::string, std::set<std::string>> assignments;
    std::set<std::string> charity;

    const std::set<std::string>& bundle(const std::string& student_id) const;

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Empty bundles for every student; all courses in charity.
Allocation make_empty_allocation(const Instance& instance);

/// Recomputes charity as the set of courses in no student's bundle.
void fill_charity(const Instance& instance, Allocation& alloc);

enum class ViolationKind {
    ConflictWithinStudent,
    CreditCapExceeded,
    DuplicateAssignment,
    UnknownId,
};

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string detail;
};

struct ValidationReport {
    bool valid = true;
    std::vector<Violation> violations;
};

/// Replaces every course holding k seats by k single-seat copies (ids
/// "<id>#0".."<id>#k-1", origin_id preserved). Single-seat courses keep their
/// id. Throws AlreadyExpanded on a second call.
Instance expand_seats(const Instance& instance);

/// Checks the three model restrictions (credit caps, one holder per course,
/// no intra-student time conflict) plus id sanity. Requires an expanded
/// instance.
ValidationReport validate_allocation(const Instance& instance, const Allocation& alloc);

struct InstanceStats {
    double total_utility = 0;     // U: course count under uniform utilities
    double duration_ratio = 1;    // max duration / min duration; 1 when m = 0
    int maxmin_upper_bound = 0;   // floor(U / n)
};

InstanceStats instance_stats(const Instance& instance);

/// Utility of `course` for `student`, evaluated on the course's origin id.
double utility_of(const Student& student, const Course& course);

/// Sum of a student's utilities over a bundle of course ids.
double bundle_utility(const Instance& instance, const Student& student,
                      const std::set<std::string>& bundle);

}  // namespace fairsched
