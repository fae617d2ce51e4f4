#include "fairsched/intervals.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace fairsched {

std::vector<std::size_t> sorted_course_indices(const std::vector<Course>& courses) {
    std::vector<std::size_t> idx(courses.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const Course& ca = courses[a];
        const Course& cb = courses[b];
        return std::tie(ca.interval.end, ca.interval.start, ca.id) <
               std::tie(cb.interval.end, cb.interval.start, cb.id);
    });
    return idx;
}

SortedCourseOrder sort_courses_by_end(const std::vector<Course>& courses) {
    SortedCourseOrder out;
    for (std::size_t i : sorted_course_indices(courses)) {
        out.order.push_back(courses[i].id);
    }
    return out;
}

std::set<std::string> conflict_set(const Course& course, const std::vector<Course>& courses) {
    std::set<std::string> out;
    for (const auto& other : courses) {
        if (other.id == course.id) continue;
        if (overlaps(course.interval, other.interval)) out.insert(other.id);
    }
    return out;
}

std::vector<std::size_t> interval_mis_indices(const std::vector<Course>& courses) {
    std::vector<std::size_t> picked;
    int free_from = 0;
    bool first = true;
    for (std::size_t i : sorted_course_indices(courses)) {
        const Course& c = courses[i];
        if (first || c.interval.start >= free_from) {
            picked.push_back(i);
            free_from = c.interval.end;
            first = false;
        }
    }
    return picked;
}

std::set<std::string> interval_mis(const std::vector<Course>& courses) {
    std::set<std::string> out;
    for (std::size_t i : interval_mis_indices(courses)) {
        out.insert(courses[i].id);
    }
    return out;
}

}  // namespace fairsched
