#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairsched/allocators.hpp"
#include "fairsched/model.hpp"
#include "fairsched/oracle.hpp"

namespace fairsched {

enum class ReportFormat { Csv, Json, Pretty };

ReportFormat report_format_from_name(const std::string& name);

struct ComparisonRow {
    std::string dataset;
    std::string algorithm;
    std::optional<double> maxmin;
    std::optional<double> social_welfare;
    std::optional<double> runtime_ms;
    std::optional<bool> ef1;
    std::optional<bool> ef1cc;
    std::optional<double> oracle_maxmin;
    std::optional<double> oracle_sw;
    std::optional<double> oracle_sw_given_maxmin;
    std::optional<std::string> error;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
};

struct CompareOptions {
    bool include_oracle = false;
    // wall-clock runtimes are opt-in; reports must stay byte-identical
    // across reruns of a fixed seed
    bool measure_runtime = false;
    SolverLimits limits{};
};

using AllocatorFn = std::function<Allocation(const Instance&)>;

/// Runs each named allocator on the expanded instance, audits every result,
/// and appends one row per allocator (plus an oracle row when requested).
/// Errors are captured per row; one failing row never aborts the others.
ComparisonTable run_comparison(const std::string& dataset, const Instance& instance,
                               const std::vector<AlgorithmChoice>& algorithms,
                               const CompareOptions& opts = {});

/// Same, with caller-supplied allocator functions (test hook: a corrupted
/// allocator must surface as a row error here).
ComparisonTable run_comparison_rows(
    const std::string& dataset, const Instance& instance,
    const std::vector<std::pair<std::string, AllocatorFn>>& algorithms,
    const CompareOptions& opts = {});

/// Stable column order: dataset, algorithm, maxmin, social_welfare,
/// runtime_ms, ef1, ef1cc, oracle_maxmin, oracle_sw, oracle_sw_given_maxmin,
/// error. Identical tables serialize to identical bytes.
std::string emit_report(const ComparisonTable& table, ReportFormat format);

}  // namespace fairsched
