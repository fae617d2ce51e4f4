#include "fairsched/model.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace fairsched {

bool overlaps(const TimeInterval& a, const TimeInterval& b) {
    return a.start < b.end && b.start < a.end;
}

double UtilitySpec::value(const std::string& origin_id) const {
    switch (kind) {
        case UtilityKind::Uniform:
            return 1.0;
        case UtilityKind::Binary:
            return desired.count(origin_id) != 0 ? 1.0 : 0.0;
        case UtilityKind::General: {
            auto it = values.find(origin_id);
            return it == values.end() ? 0.0 : it->second;
        }
    }
    return 0.0;
}

UtilitySpec UtilitySpec::uniform() { return UtilitySpec{}; }

UtilitySpec UtilitySpec::binary(std::set<std::string> desired_ids) {
    UtilitySpec spec;
    spec.kind = UtilityKind::Binary;
    spec.desired = std::move(desired_ids);
    return spec;
}

UtilitySpec UtilitySpec::general(std::map<std::string, double> course_values) {
    UtilitySpec spec;
    spec.kind = UtilityKind::General;
    spec.values = std::move(course_values);
    return spec;
}

const Student* Instance::find_student(const std::string& id) const {
    for (const auto& s : students) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

const Course* Instance::find_course(const std::string& id) const {
    for (const auto& c : courses) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

const std::set<std::string>& Allocation::bundle(const std::string& student_id) const {
    static const std::set<std::string> empty;
    auto it = assignments.find(student_id);
    return it == assignments.end() ? empty : it->second;
}

Allocation make_empty_allocation(const Instance& instance) {
    Allocation alloc;
    for (const auto& s : instance.students) {
        alloc.assignments[s.id];
    }
    for (const auto& c : instance.courses) {
        alloc.charity.insert(c.id);
    }
    return alloc;
}

void fill_charity(const Instance& instance, Allocation& alloc) {
    std::unordered_set<std::string> assigned;
    for (const auto& [sid, bundle] : alloc.assignments) {
        assigned.insert(bundle.begin(), bundle.end());
    }
    alloc.charity.clear();
    for (const auto& c : instance.courses) {
        if (!assigned.count(c.id)) alloc.charity.insert(c.id);
    }
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::ConflictWithinStudent: return "ConflictWithinStudent";
        case ViolationKind::CreditCapExceeded: return "CreditCapExceeded";
        case ViolationKind::DuplicateAssignment: return "DuplicateAssignment";
        case ViolationKind::UnknownId: return "UnknownId";
    }
    return "Unknown";
}

Instance expand_seats(const Instance& instance) {
    if (instance.expanded) {
        throw AlreadyExpanded("expand_seats: instance already expanded");
    }
    Instance out;
    out.students = instance.students;
    out.expanded = true;
    for (const auto& course : instance.courses) {
        if (course.seats == 1) {
            Course copy = course;
            copy.origin_id = course.origin_id.empty() ? course.id : course.origin_id;
            out.courses.push_back(std::move(copy));
            continue;
        }
        for (int seat = 0; seat < course.seats; ++seat) {
            Course copy = course;
            copy.id = course.id + "#" + std::to_string(seat);
            copy.origin_id = course.origin_id.empty() ? course.id : course.origin_id;
            copy.seats = 1;
            out.courses.push_back(std::move(copy));
        }
    }
    std::unordered_set<std::string> seen;
    for (const auto& c : out.courses) {
        if (!seen.insert(c.id).second) {
            throw SemanticError("expand_seats: seat copy id collides with existing course id: " + c.id);
        }
    }
    return out;
}

ValidationReport validate_allocation(const Instance& instance, const Allocation& alloc) {
    if (!instance.expanded) {
        throw NotExpanded("validate_allocation: instance must be expanded");
    }
    ValidationReport report;
    auto add = [&](ViolationKind kind, std::string detail) {
        report.violations.push_back({kind, std::move(detail)});
    };

    std::unordered_map<std::string, const Course*> courses;
    for (const auto& c : instance.courses) courses.emplace(c.id, &c);
    std::unordered_map<std::string, const Student*> students;
    for (const auto& s : instance.students) students.emplace(s.id, &s);

    // holder of each course: student id, or "charity"
    std::unordered_map<std::string, std::string> holder;
    auto claim = [&](const std::string& course_id, const std::string& who) {
        auto [it, inserted] = holder.emplace(course_id, who);
        if (!inserted) {
            add(ViolationKind::DuplicateAssignment,
                "course " + course_id + " held by " + it->second + " and " + who);
        }
    };

    for (const auto& [sid, bundle] : alloc.assignments) {
        auto sit = students.find(sid);
        if (sit == students.end()) {
            add(ViolationKind::UnknownId, "student " + sid + " not in instance");
            continue;
        }
        const Student& student = *sit->second;

        std::vector<const Course*> held;
        int used_credits = 0;
        for (const auto& cid : bundle) {
            auto cit = courses.find(cid);
            if (cit == courses.end()) {
                add(ViolationKind::UnknownId, "course " + cid + " not in instance");
                continue;
            }
            claim(cid, sid);
            held.push_back(cit->second);
            used_credits += cit->second->credits;
        }
        if (used_credits > student.credit_cap) {
            add(ViolationKind::CreditCapExceeded,
                "student " + sid + " holds " + std::to_string(used_credits) +
                    " credits, cap " + std::to_string(student.credit_cap));
        }
        for (std::size_t i = 0; i < held.size(); ++i) {
            for (std::size_t j = i + 1; j < held.size(); ++j) {
                if (overlaps(held[i]->interval, held[j]->interval)) {
                    add(ViolationKind::ConflictWithinStudent,
                        "student " + sid + ": " + held[i]->id + " overlaps " + held[j]->id);
                }
            }
        }
    }

    for (const auto& cid : alloc.charity) {
        if (!courses.count(cid)) {
            add(ViolationKind::UnknownId, "charity course " + cid + " not in instance");
            continue;
        }
        claim(cid, "charity");
    }

    report.valid = report.violations.empty();
    return report;
}

InstanceStats instance_stats(const Instance& instance) {
    if (!instance.expanded) {
        throw NotExpanded("instance_stats: instance must be expanded");
    }
    InstanceStats stats;
    stats.total_utility = static_cast<double>(instance.courses.size());
    if (!instance.courses.empty()) {
        int min_d = instance.courses.front().interval.duration();
        int max_d = min_d;
        for (const auto& c : instance.courses) {
            min_d = std::min(min_d, c.interval.duration());
            max_d = std::max(max_d, c.interval.duration());
        }
        stats.duration_ratio = static_cast<double>(max_d) / static_cast<double>(min_d);
    }
    if (!instance.students.empty()) {
        stats.maxmin_upper_bound =
            static_cast<int>(instance.courses.size() / instance.students.size());
    }
    return stats;
}

double utility_of(const Student& student, const Course& course) {
    return student.utility.value(course.origin_id);
}

double bundle_utility(const Instance& instance, const Student& student,
                      const std::set<std::string>& bundle) {
    double total = 0;
    for (const auto& cid : bundle) {
        const Course* course = instance.find_course(cid);
        if (course != nullptr) total += utility_of(student, *course);
    }
    return total;
}

}  // namespace fairsched
