#include "fairsched/compare.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

#include "fairsched/audit.hpp"
#include "fairsched/instance_io.hpp"

namespace fairsched {

using ordered_json = nlohmann::ordered_json;

ReportFormat report_format_from_name(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    if (name == "pretty") return ReportFormat::Pretty;
    throw InvalidParams("unknown report format: " + name + " (expected csv|json|pretty)");
}

namespace {

std::string describe(const Error& e) {
    return std::string(e.kind()) + ": " + e.what();
}

struct OracleColumns {
    std::optional<double> sw;
    std::optional<double> maxmin;
    std::optional<double> sw_given_maxmin;
    std::optional<Allocation> two_stage_allocation;
    std::optional<double> runtime_ms;
    std::optional<std::string> error;
};

OracleColumns compute_oracle(const Instance& instance, const CompareOptions& opts) {
    OracleColumns out;
    auto start = std::chrono::steady_clock::now();
    try {
        out.sw = opt_social_welfare(instance, opts.limits).value;
        OracleResult mm = opt_maxmin(instance, opts.limits);
        out.maxmin = mm.value;
        OracleResult staged = opt_sw_given_maxmin(instance, mm.value, opts.limits);
        out.sw_given_maxmin = staged.value;
        out.two_stage_allocation = std::move(staged.allocation);
    } catch (const Error& e) {
        out.error = describe(e);
    }
    if (opts.measure_runtime) {
        out.runtime_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
    return out;
}

void audit_into_row(const Instance& instance, const Allocation& alloc, ComparisonRow& row) {
    row.social_welfare = social_welfare(instance, alloc);
    row.maxmin = maxmin_value(instance, alloc);
    row.ef1 = audit_ef1(instance, alloc).ok;
    try {
        row.ef1cc = audit_ef1cc(instance, alloc).ok;
    } catch (const UnsupportedUtilityKind&) {
        row.ef1cc = std::nullopt;
    }
}

}  // namespace

ComparisonTable run_comparison_rows(
    const std::string& dataset, const Instance& instance,
    const std::vector<std::pair<std::string, AllocatorFn>>& algorithms,
    const CompareOptions& opts) {
    ComparisonTable table;

    OracleColumns oracle;
    if (opts.include_oracle) oracle = compute_oracle(instance, opts);

    for (const auto& [name, fn] : algorithms) {
        ComparisonRow row;
        row.dataset = dataset;
        row.algorithm = name;
        try {
            auto start = std::chrono::steady_clock::now();
            Allocation alloc = fn(instance);
            auto stop = std::chrono::steady_clock::now();
            if (opts.measure_runtime) {
                row.runtime_ms =
                    std::chrono::duration<double, std::milli>(stop - start).count();
            }
            ValidationReport report = validate_allocation(instance, alloc);
            if (!report.valid) {
                throw InvariantBreach("allocator " + name + " produced an invalid allocation (" +
                                      to_string(report.violations.front().kind) + ": " +
                                      report.violations.front().detail + ")");
            }
            audit_into_row(instance, alloc, row);
        } catch (const Error& e) {
            row.error = describe(e);
        }
        if (opts.include_oracle) {
            row.oracle_sw = oracle.sw;
            row.oracle_maxmin = oracle.maxmin;
            row.oracle_sw_given_maxmin = oracle.sw_given_maxmin;
        }
        table.rows.push_back(std::move(row));
    }

    if (opts.include_oracle) {
        ComparisonRow row;
        row.dataset = dataset;
        row.algorithm = "oracle";
        row.runtime_ms = oracle.runtime_ms;
        row.oracle_sw = oracle.sw;
        row.oracle_maxmin = oracle.maxmin;
        row.oracle_sw_given_maxmin = oracle.sw_given_maxmin;
        if (oracle.error) {
            row.error = oracle.error;
        } else {
            // the oracle row reports the two-stage optimum: max-min
            // first, then welfare subject to it
            row.maxmin = oracle.maxmin;
            row.social_welfare = oracle.sw_given_maxmin;
            if (oracle.two_stage_allocation) {
                ComparisonRow audited = row;
                audit_into_row(instance, *oracle.two_stage_allocation, audited);
                row.ef1 = audited.ef1;
                row.ef1cc = audited.ef1cc;
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ComparisonTable run_comparison(const std::string& dataset, const Instance& instance,
                               const std::vector<AlgorithmChoice>& algorithms,
                               const CompareOptions& opts) {
    std::vector<std::pair<std::string, AllocatorFn>> fns;
    for (const auto& choice : algorithms) {
        fns.emplace_back(choice.name(), [choice](const Instance& inst) {
            return run_algorithm(inst, choice);
        });
    }
    return run_comparison_rows(dataset, instance, fns, opts);
}

namespace {

constexpr const char* kColumns[] = {"dataset",       "algorithm",
                                    "maxmin",        "social_welfare",
                                    "runtime_ms",    "ef1",
                                    "ef1cc",         "oracle_maxmin",
                                    "oracle_sw",     "oracle_sw_given_maxmin",
                                    "error"};

std::string cell(const ComparisonRow& row, std::size_t col) {
    auto num = [](const std::optional<double>& v) {
        return v ? format_number(*v) : std::string();
    };
    auto boolean = [](const std::optional<bool>& v) {
        return v ? std::string(*v ? "true" : "false") : std::string();
    };
    switch (col) {
        case 0: return row.dataset;
        case 1: return row.algorithm;
        case 2: return num(row.maxmin);
        case 3: return num(row.social_welfare);
        case 4: return num(row.runtime_ms);
        case 5: return boolean(row.ef1);
        case 6: return boolean(row.ef1cc);
        case 7: return num(row.oracle_maxmin);
        case 8: return num(row.oracle_sw);
        case 9: return num(row.oracle_sw_given_maxmin);
        case 10: return row.error.value_or("");
    }
    return {};
}

constexpr std::size_t kColumnCount = sizeof(kColumns) / sizeof(kColumns[0]);

}  // namespace

std::string emit_report(const ComparisonTable& table, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        std::ostringstream out;
        for (std::size_t c = 0; c < kColumnCount; ++c) {
            if (c > 0) out << ",";
            out << kColumns[c];
        }
        out << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < kColumnCount; ++c) {
                if (c > 0) out << ",";
                out << csv_escape(cell(row, c));
            }
            out << "\n";
        }
        return out.str();
    }

    if (format == ReportFormat::Json) {
        ordered_json doc = ordered_json::array();
        for (const auto& row : table.rows) {
            ordered_json rj;
            rj["dataset"] = row.dataset;
            rj["algorithm"] = row.algorithm;
            auto put_num = [&rj](const char* key, const std::optional<double>& v) {
                if (v) rj[key] = *v; else rj[key] = nullptr;
            };
            auto put_bool = [&rj](const char* key, const std::optional<bool>& v) {
                if (v) rj[key] = *v; else rj[key] = nullptr;
            };
            put_num("maxmin", row.maxmin);
            put_num("social_welfare", row.social_welfare);
            put_num("runtime_ms", row.runtime_ms);
            put_bool("ef1", row.ef1);
            put_bool("ef1cc", row.ef1cc);
            put_num("oracle_maxmin", row.oracle_maxmin);
            put_num("oracle_sw", row.oracle_sw);
            put_num("oracle_sw_given_maxmin", row.oracle_sw_given_maxmin);
            if (row.error) rj["error"] = *row.error; else rj["error"] = nullptr;
            doc.push_back(std::move(rj));
        }
        return doc.dump(2) + "\n";
    }

    // pretty: fixed-width text table
    std::vector<std::size_t> width(kColumnCount);
    for (std::size_t c = 0; c < kColumnCount; ++c) width[c] = std::string(kColumns[c]).size();
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < kColumnCount; ++c) {
            width[c] = std::max(width[c], cell(row, c).size());
        }
    }
    std::ostringstream out;
    auto emit_line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < kColumnCount; ++c) {
            if (c > 0) out << "  ";
            out << cells[c];
            out << std::string(width[c] - cells[c].size(), ' ');
        }
        out << "\n";
    };
    std::vector<std::string> header(kColumns, kColumns + kColumnCount);
    emit_line(header);
    for (const auto& row : table.rows) {
        std::vector<std::string> cells;
        for (std::size_t c = 0; c < kColumnCount; ++c) cells.push_back(cell(row, c));
        emit_line(cells);
    }
    return out.str();
}

}  // namespace fairsched
