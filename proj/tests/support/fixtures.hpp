#pragma once

#include <map>
#include <set>
#include <string>

#include "fairsched/model.hpp"

namespace fairsched::testing {

inline Student make_student(std::string id, int cap, UtilitySpec utility = UtilitySpec::uniform()) {
    Student s;
    s.id = std::move(id);
    s.credit_cap = cap;
    s.utility = std::move(utility);
    return s;
}

inline Course make_course(std::string id, int start, int end, int credits = 1, int seats = 1) {
    Course c;
    c.id = id;
    c.origin_id = std::move(id);
    c.interval = {start, end};
    c.credits = credits;
    c.seats = seats;
    return c;
}

// Three uniform students with cap 2; all courses conflict except C1 and C5.
// Optimal social welfare 4.
inline Instance fixture_a() {
    Instance inst;
    inst.students = {make_student("s1", 2), make_student("s2", 2), make_student("s3", 2)};
    inst.courses = {make_course("C1", 0, 2), make_course("C2", 1, 6), make_course("C3", 1, 6),
                    make_course("C4", 1, 6), make_course("C5", 3, 5)};
    return inst;
}

// Binary: s1 wants {a,c}, s2 wants {b,c}. Optimal welfare 3, max-min 1.
inline Instance fixture_b() {
    Instance inst;
    inst.students = {make_student("s1", 2, UtilitySpec::binary({"a", "c"})),
                     make_student("s2", 2, UtilitySpec::binary({"b", "c"}))};
    inst.courses = {make_course("a", 0, 1), make_course("b", 0, 1), make_course("c", 1, 2)};
    return inst;
}

// Two cap-1 students, three copies of the same slot. Optimal welfare 2,
// max-min 1.
inline Instance fixture_c() {
    Instance inst;
    inst.students = {make_student("s1", 1), make_student("s2", 1)};
    inst.courses = {make_course("c1", 0, 1), make_course("c2", 0, 1), make_course("c3", 0, 1)};
    return inst;
}

inline Allocation alloc_of(const Instance& instance,
                           const std::map<std::string, std::set<std::string>>& bundles) {
    Allocation alloc = make_empty_allocation(instance);
    for (const auto& [sid, bundle] : bundles) {
        alloc.assignments[sid] = bundle;
        for (const auto& cid : bundle) alloc.charity.erase(cid);
    }
    return alloc;
}

}  // namespace fairsched::testing
