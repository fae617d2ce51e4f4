#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairsched/model.hpp"

namespace fairsched {

/// One envy violation: who envies whom (a student id, or "charity") and why.
struct EnvyWitness {
    std::string envier;
    std::string envied;
    std::string detail;
};

struct AuditOutcome {
    bool ok = true;
    std::vector<EnvyWitness> witnesses;
};

struct AuditReport {
    double social_welfare = 0;
    double min_utility = 0;
    std::map<std::string, double> per_student_utility;
    bool efx = false;
    bool ef1 = false;
    // absent for General utilities, where the cardinality-based definition
    // does not apply
    std::optional<bool> ef1cc;
    std::vector<EnvyWitness> envy_witnesses;
    std::map<std::string, std::size_t> charity_mis_sizes;
};

/// Sum over students of their bundle utility. Throws InvalidAllocation if the
/// allocation fails validate_allocation.
double social_welfare(const Instance& instance, const Allocation& alloc);

/// Minimum bundle utility over all students.
double maxmin_value(const Instance& instance, const Allocation& alloc);

/// Envy-free up to any good: every envy is killed by removing any single item
/// from the envied bundle, or the envier is at credit cap. The quantifier
/// runs over all items of the envied bundle, zero-valued ones included;
/// `positive_items_only` restricts it to positively-valued items for
/// sensitivity checks.
AuditOutcome audit_efx(const Instance& instance, const Allocation& alloc,
                       bool positive_items_only = false);

/// Envy-free up to one good: some positively-valued item whose removal kills
/// the envy exists, or the envier is at credit cap.
AuditOutcome audit_ef1(const Instance& instance, const Allocation& alloc);

/// EF1 considering charity, cardinality form: under-cap student pairs satisfy
/// the desired-count inequality, and no under-cap student trails the maximum
/// independent set of charity courses they desire by more than one. Only
/// defined for uniform/binary utilities; General raises
/// UnsupportedUtilityKind.
AuditOutcome audit_ef1cc(const Instance& instance, const Allocation& alloc);

/// Runs every audit and assembles the full report.
AuditReport audit_all(const Instance& instance, const Allocation& alloc);

}  // namespace fairsched
