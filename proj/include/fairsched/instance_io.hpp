#pragma once

#include <string>
#include <vector>

#include "fairsched/audit.hpp"
#include "fairsched/model.hpp"

namespace fairsched {

/// Parses the JSON instance document. Returns a validated, not-yet-expanded
/// instance; malformed JSON raises ParseError, dangling ids / bad values
/// raise SemanticError.
Instance parse_instance(const std::string& text);

std::string serialize_instance(const Instance& instance);

/// Allocation document: {"assignments": {student: [course...]}, "charity":
/// [course...]}. A missing charity key is filled with the unassigned courses.
Allocation parse_allocation(const std::string& text, const Instance& instance);

std::string serialize_allocation(const Allocation& alloc);

/// CSV rows (student_id,course_id), charity rows with an empty student field.
std::string serialize_allocation_csv(const Allocation& alloc);

std::string serialize_validation_report(const ValidationReport& report);

std::string serialize_audit_report(const AuditReport& report);

/// Form-export style desire triples: header student_id,course_id,desired.
struct DesireTriple {
    std::string student;
    std::string course;
    bool desired = false;
};

std::vector<DesireTriple> parse_desire_triples_csv(const std::string& text);

/// Replaces every student's utilities with binary desires taken from the
/// triples. Unknown ids raise SemanticError.
void apply_desire_triples(Instance& instance, const std::vector<DesireTriple>& triples);

/// RFC-style CSV field quoting.
std::string csv_escape(const std::string& field);

/// Integers print without a decimal point; other values use %.6g.
std::string format_number(double v);

}  // namespace fairsched
