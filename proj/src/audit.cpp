#include "fairsched/audit.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "fairsched/intervals.hpp"

namespace fairsched {

namespace {

void require_valid(const Instance& instance, const Allocation& alloc, const char* who) {
    ValidationReport report = validate_allocation(instance, alloc);
    if (!report.valid) {
        throw InvalidAllocation(std::string(who) + ": allocation invalid (" +
                                to_string(report.violations.front().kind) + ": " +
                                report.violations.front().detail + ")");
    }
}

struct View {
    const Instance& instance;
    std::unordered_map<std::string, const Course*> courses;

    explicit View(const Instance& inst) : instance(inst) {
        for (const auto& c : inst.courses) courses.emplace(c.id, &c);
    }

    const Course& course(const std::string& id) const { return *courses.at(id); }

    double value(const Student& s, const std::string& course_id) const {
        return utility_of(s, course(course_id));
    }

    double bundle_value(const Student& s, const std::set<std::string>& bundle) const {
        double total = 0;
        for (const auto& cid : bundle) total += value(s, cid);
        return total;
    }

    int used_credits(const std::set<std::string>& bundle) const {
        int total = 0;
        for (const auto& cid : bundle) total += course(cid).credits;
        return total;
    }

    bool at_cap(const Student& s, const std::set<std::string>& bundle) const {
        return used_credits(bundle) >= s.credit_cap;
    }

    std::size_t desired_count(const Student& s, const std::set<std::string>& bundle) const {
        std::size_t n = 0;
        for (const auto& cid : bundle) {
            if (value(s, cid) > 0) ++n;
        }
        return n;
    }
};

std::vector<const Student*> students_sorted_by_id(const Instance& instance) {
    std::vector<const Student*> out;
    for (const auto& s : instance.students) out.push_back(&s);
    std::sort(out.begin(), out.end(),
              [](const Student* a, const Student* b) { return a->id < b->id; });
    return out;
}

void sort_witnesses(std::vector<EnvyWitness>& ws) {
    std::sort(ws.begin(), ws.end(), [](const EnvyWitness& a, const EnvyWitness& b) {
        return std::tie(a.envier, a.envied, a.detail) < std::tie(b.envier, b.envied, b.detail);
    });
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

double social_welfare(const Instance& instance, const Allocation& alloc) {
    require_valid(instance, alloc, "social_welfare");
    View view(instance);
    double total = 0;
    for (const auto& s : instance.students) {
        total += view.bundle_value(s, alloc.bundle(s.id));
    }
    return total;
}

double maxmin_value(const Instance& instance, const Allocation& alloc) {
    require_valid(instance, alloc, "maxmin_value");
    View view(instance);
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& s : instance.students) {
        lowest = std::min(lowest, view.bundle_value(s, alloc.bundle(s.id)));
    }
    return instance.students.empty() ? 0.0 : lowest;
}

AuditOutcome audit_efx(const Instance& instance, const Allocation& alloc,
                       bool positive_items_only) {
    require_valid(instance, alloc, "audit_efx");
    View view(instance);
    AuditOutcome out;
    for (const Student* i : students_sorted_by_id(instance)) {
        const auto& own = alloc.bundle(i->id);
        double own_value = view.bundle_value(*i, own);
        if (view.at_cap(*i, own)) continue;
        for (const Student* other : students_sorted_by_id(instance)) {
            if (other == i) continue;
            const auto& envied = alloc.bundle(other->id);
            double envied_value = view.bundle_value(*i, envied);
            if (envied_value <= own_value) continue;
            for (const auto& cid : envied) {
                double item = view.value(*i, cid);
                if (positive_items_only && item <= 0) continue;
                if (envied_value - item > own_value) {
                    out.witnesses.push_back(
                        {i->id, other->id,
                         "removing " + cid + " leaves " + fmt(envied_value - item) + " > " +
                             fmt(own_value)});
                    break;
                }
            }
        }
    }
    sort_witnesses(out.witnesses);
    out.ok = out.witnesses.empty();
    return out;
}

AuditOutcome audit_ef1(const Instance& instance, const Allocation& alloc) {
    require_valid(instance, alloc, "audit_ef1");
    View view(instance);
    AuditOutcome out;
    for (const Student* i : students_sorted_by_id(instance)) {
        const auto& own = alloc.bundle(i->id);
        double own_value = view.bundle_value(*i, own);
        if (view.at_cap(*i, own)) continue;
        for (const Student* other : students_sorted_by_id(instance)) {
            if (other == i) continue;
            const auto& envied = alloc.bundle(other->id);
            double envied_value = view.bundle_value(*i, envied);
            if (envied_value <= own_value) continue;
            double best_item = 0;
            for (const auto& cid : envied) {
                best_item = std::max(best_item, view.value(*i, cid));
            }
            if (!(best_item > 0) || envied_value - best_item > own_value) {
                out.witnesses.push_back(
                    {i->id, other->id,
                     "no single removal closes the gap " + fmt(envied_value) + " > " +
                         fmt(own_value)});
            }
        }
    }
    sort_witnesses(out.witnesses);
    out.ok = out.witnesses.empty();
    return out;
}

namespace {

std::map<std::string, std::size_t> charity_mis_by_student(const View& view,
                                                          const Allocation& alloc) {
    std::map<std::string, std::size_t> out;
    for (const auto& s : view.instance.students) {
        std::vector<Course> desired_charity;
        for (const auto& cid : alloc.charity) {
            const Course& c = view.course(cid);
            if (utility_of(s, c) > 0) desired_charity.push_back(c);
        }
        out[s.id] = interval_mis(desired_charity).size();
    }
    return out;
}

}  // namespace

AuditOutcome audit_ef1cc(const Instance& instance, const Allocation& alloc) {
    for (const auto& s : instance.students) {
        if (s.utility.kind == UtilityKind::General) {
            throw UnsupportedUtilityKind(
                "audit_ef1cc: cardinality-based definition needs uniform or binary utilities "
                "(student " + s.id + " has general utilities)");
        }
    }
    require_valid(instance, alloc, "audit_ef1cc");
    View view(instance);
    AuditOutcome out;
    auto mis_sizes = charity_mis_by_student(view, alloc);

    for (const Student* i : students_sorted_by_id(instance)) {
        const auto& own = alloc.bundle(i->id);
        if (view.at_cap(*i, own)) continue;  // at-cap students envy no one
        std::size_t own_count = view.desired_count(*i, own);

        for (const Student* other : students_sorted_by_id(instance)) {
            if (other == i) continue;
            const auto& envied = alloc.bundle(other->id);
            if (view.at_cap(*other, envied)) continue;
            std::size_t envied_count = view.desired_count(*i, envied);
            if (own_count + 1 < envied_count) {
                out.witnesses.push_back({i->id, other->id,
                                         "desired counts " + std::to_string(own_count) + " vs " +
                                             std::to_string(envied_count)});
            }
        }

        std::size_t mis = mis_sizes.at(i->id);
        if (own_count + 1 < mis) {
            out.witnesses.push_back({i->id, "charity",
                                     "holds " + std::to_string(own_count) +
                                         " desired courses, charity MIS " + std::to_string(mis)});
        }
    }
    sort_witnesses(out.witnesses);
    out.ok = out.witnesses.empty();
    return out;
}

AuditReport audit_all(const Instance& instance, const Allocation& alloc) {
    require_valid(instance, alloc, "audit_all");
    View view(instance);
    AuditReport report;
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& s : instance.students) {
        double v = view.bundle_value(s, alloc.bundle(s.id));
        report.per_student_utility[s.id] = v;
        report.social_welfare += v;
        lowest = std::min(lowest, v);
    }
    report.min_utility = instance.students.empty() ? 0.0 : lowest;

    AuditOutcome efx = audit_efx(instance, alloc);
    report.efx = efx.ok;
    for (auto& w : efx.witnesses) {
        w.detail = "efx: " + w.detail;
        report.envy_witnesses.push_back(std::move(w));
    }
    AuditOutcome ef1 = audit_ef1(instance, alloc);
    report.ef1 = ef1.ok;
    for (auto& w : ef1.witnesses) {
        w.detail = "ef1: " + w.detail;
        report.envy_witnesses.push_back(std::move(w));
    }
    bool general = std::any_of(instance.students.begin(), instance.students.end(),
                               [](const Student& s) { return s.utility.kind == UtilityKind::General; });
    if (!general) {
        AuditOutcome ef1cc = audit_ef1cc(instance, alloc);
        report.ef1cc = ef1cc.ok;
        for (auto& w : ef1cc.witnesses) {
            w.detail = "ef1cc: " + w.detail;
            report.envy_witnesses.push_back(std::move(w));
        }
    }
    report.charity_mis_sizes = charity_mis_by_student(view, alloc);
    return report;
}

}  // namespace fairsched
