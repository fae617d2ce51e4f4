#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairsched/allocators.hpp"
#include "fairsched/audit.hpp"
#include "fairsched/compare.hpp"
#include "fairsched/generator.hpp"
#include "fairsched/instance_io.hpp"
#include "fairsched/oracle.hpp"

namespace {

using namespace fairsched;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << content;
}

Instance load_instance(const std::string& path, const std::string& desires_csv) {
    Instance instance = parse_instance(read_file(path));
    if (!desires_csv.empty()) {
        apply_desire_triples(instance, parse_desire_triples_csv(read_file(desires_csv)));
    }
    return instance;
}

int run_allocate(const std::string& algo, const std::string& input, const std::string& output,
                 const std::string& format, const std::string& desires, int dp_max_students) {
    AlgorithmChoice choice = AlgorithmChoice::from_name(algo);
    choice.dp_max_students = dp_max_students;
    Instance instance = expand_seats(load_instance(input, desires));
    Allocation alloc = run_algorithm(instance, choice);

    ValidationReport report = validate_allocation(instance, alloc);
    if (!report.valid) {
        throw InvariantBreach("allocator output failed validation: " +
                              report.violations.front().detail);
    }
    if (!output.empty()) {
        write_file(output, format == "csv" ? serialize_allocation_csv(alloc)
                                           : serialize_allocation(alloc));
    }
    ordered_json summary;
    summary["algorithm"] = choice.name();
    summary["social_welfare"] = social_welfare(instance, alloc);
    summary["maxmin"] = maxmin_value(instance, alloc);
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int run_audit(const std::string& input, const std::string& allocation_path) {
    Instance instance = expand_seats(parse_instance(read_file(input)));
    Allocation alloc = parse_allocation(read_file(allocation_path), instance);
    ValidationReport report = validate_allocation(instance, alloc);
    if (!report.valid) {
        std::cout << serialize_validation_report(report);
        return 1;
    }
    std::cout << serialize_audit_report(audit_all(instance, alloc));
    return 0;
}

int run_oracle(const std::string& objective, const std::string& input,
               std::optional<double> threshold, const std::string& witness_path,
               std::uint64_t node_budget) {
    Instance instance = expand_seats(parse_instance(read_file(input)));
    SolverLimits limits;
    if (node_budget > 0) limits.node_budget = node_budget;

    ordered_json out;
    out["objective"] = objective;
    OracleResult result;
    if (objective == "sw") {
        result = opt_social_welfare(instance, limits);
    } else if (objective == "maxmin") {
        result = opt_maxmin(instance, limits);
    } else if (objective == "sw-given-maxmin") {
        double t = threshold ? *threshold : opt_maxmin(instance, limits).value;
        result = opt_sw_given_maxmin(instance, t, limits);
        out["threshold"] = t;
    } else {
        throw InvalidParams("unknown objective: " + objective +
                            " (expected sw|maxmin|sw-given-maxmin)");
    }
    out["value"] = result.value;
    out["nodes_explored"] = result.nodes_explored;
    out["proven_optimal"] = result.proven_optimal;
    std::cout << out.dump(2) << "\n";
    if (!witness_path.empty()) write_file(witness_path, serialize_allocation(result.allocation));
    return 0;
}

int run_gen(const std::string& preset_name, const GenParams& cli_params,
            const std::vector<bool>& flag_set, const std::string& output) {
    GenParams params;
    if (!preset_name.empty()) {
        auto names = preset_names();
        int k = 0;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == preset_name) k = static_cast<int>(i) + 1;
        }
        if (k == 0) throw InvalidParams("unknown preset " + preset_name);
        params = preset(k);
    }
    // explicit flags override the preset
    if (flag_set[0]) params.n_students = cli_params.n_students;
    if (flag_set[1]) params.n_courses = cli_params.n_courses;
    if (flag_set[2]) params.slot_grid = cli_params.slot_grid;
    if (flag_set[3]) params.duration_range = cli_params.duration_range;
    if (flag_set[4]) params.seats_range = cli_params.seats_range;
    if (flag_set[5]) params.cap_range = cli_params.cap_range;
    if (flag_set[6]) params.utility_kind = cli_params.utility_kind;
    if (flag_set[7]) params.desire_probability = cli_params.desire_probability;
    if (flag_set[8]) params.seed = cli_params.seed;

    Instance instance = generate_instance(params);
    std::string doc = serialize_instance(instance);
    if (output.empty()) {
        std::cout << doc;
    } else {
        write_file(output, doc);
    }
    return 0;
}

int run_compare(const std::vector<std::string>& inputs, const std::string& algos_csv,
                bool with_oracle, const std::string& report_path, const std::string& format,
                bool timing, const std::string& desires) {
    std::vector<AlgorithmChoice> algorithms;
    std::stringstream ss(algos_csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) algorithms.push_back(AlgorithmChoice::from_name(token));
    }

    CompareOptions opts;
    opts.include_oracle = with_oracle;
    opts.measure_runtime = timing;

    ComparisonTable table;
    for (const auto& path : inputs) {
        Instance instance = expand_seats(load_instance(path, desires));
        std::string dataset = std::filesystem::path(path).stem().string();
        ComparisonTable part = run_comparison(dataset, instance, algorithms, opts);
        for (auto& row : part.rows) table.rows.push_back(std::move(row));
    }

    std::string rendered = emit_report(table, report_format_from_name(format));
    if (report_path.empty()) {
        std::cout << rendered;
    } else {
        write_file(report_path, rendered);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fair allocation of time-conflicting course seats"};
    app.require_subcommand(1);

    // allocate
    auto* allocate = app.add_subcommand("allocate", "run one allocation algorithm");
    std::string algo, input, output, format = "json", desires;
    int dp_max_students = 3;
    allocate->add_option("--algo", algo, "round-robin|mis|ef1cc|maxmin|dp")->required();
    allocate->add_option("--input", input, "instance JSON file")->required();
    allocate->add_option("--output", output, "allocation file to write");
    allocate->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    allocate->add_option("--desires", desires, "desire-triples CSV overlay");
    allocate->add_option("--dp-max-students", dp_max_students, "student guard for --algo dp");

    // audit
    auto* audit = app.add_subcommand("audit", "validate an allocation and print its audit");
    std::string audit_input, audit_allocation;
    audit->add_option("--input", audit_input, "instance JSON file")->required();
    audit->add_option("--allocation", audit_allocation, "allocation JSON file")->required();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact optimum via branch and bound");
    std::string objective, oracle_input, witness;
    double threshold = 0;
    std::uint64_t node_budget = 0;
    oracle->add_option("--objective", objective, "sw|maxmin|sw-given-maxmin")->required();
    oracle->add_option("--input", oracle_input, "instance JSON file")->required();
    auto* threshold_opt = oracle->add_option("--threshold", threshold,
                                             "minimum per-student utility for sw-given-maxmin");
    oracle->add_option("--witness", witness, "write the witness allocation here");
    oracle->add_option("--node-budget", node_budget, "search node budget");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a seeded synthetic instance");
    std::string preset_name, gen_output;
    GenParams gp;
    gp.n_students = 3;
    gp.n_courses = 8;
    std::string utility_name = "uniform";
    gen->add_option("--preset", preset_name, "example-1..example-8");
    auto* o0 = gen->add_option("--n-students", gp.n_students);
    auto* o1 = gen->add_option("--n-courses", gp.n_courses);
    auto* o2 = gen->add_option("--slot-grid", gp.slot_grid);
    auto* o3 = gen->add_option("--duration", gp.duration_range, "min max");
    auto* o4 = gen->add_option("--seats", gp.seats_range, "min max");
    auto* o5 = gen->add_option("--caps", gp.cap_range, "min max");
    auto* o6 = gen->add_option("--utility", utility_name, "uniform|binary")
                   ->check(CLI::IsMember({"uniform", "binary"}));
    auto* o7 = gen->add_option("--desire-prob", gp.desire_probability);
    auto* o8 = gen->add_option("--seed", gp.seed);
    gen->add_option("--output", gen_output, "instance file to write (stdout if omitted)");

    // compare
    auto* compare = app.add_subcommand("compare", "algorithm-vs-oracle comparison table");
    std::vector<std::string> compare_inputs;
    std::string algos = "round-robin,mis,ef1cc,maxmin";
    std::string report_path, compare_format = "csv", compare_desires;
    bool with_oracle = false, timing = false;
    compare->add_option("--input", compare_inputs, "instance JSON file(s)")->required();
    compare->add_option("--algos", algos, "comma-separated algorithm list");
    compare->add_flag("--oracle", with_oracle, "attach exact-oracle columns and row");
    compare->add_option("--report", report_path, "report file (stdout if omitted)");
    compare->add_option("--format", compare_format, "csv|json|pretty")
        ->check(CLI::IsMember({"csv", "json", "pretty"}));
    compare->add_flag("--timing", timing, "record wall-clock runtimes (breaks byte-identical reruns)");
    compare->add_option("--desires", compare_desires, "desire-triples CSV overlay");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*allocate) {
            return run_allocate(algo, input, output, format, desires, dp_max_students);
        }
        if (*audit) {
            return run_audit(audit_input, audit_allocation);
        }
        if (*oracle) {
            std::optional<double> t;
            if (threshold_opt->count() > 0) t = threshold;
            return run_oracle(objective, oracle_input, t, witness, node_budget);
        }
        if (*gen) {
            gp.utility_kind = utility_name == "binary" ? GenParams::Utility::Binary
                                                       : GenParams::Utility::Uniform;
            std::vector<bool> flag_set = {o0->count() > 0, o1->count() > 0, o2->count() > 0,
                                          o3->count() > 0, o4->count() > 0, o5->count() > 0,
                                          o6->count() > 0, o7->count() > 0, o8->count() > 0};
            if (preset_name.empty()) {
                // without a preset the explicit values are the parameters
                flag_set.assign(flag_set.size(), true);
            }
            return run_gen(preset_name, gp, flag_set, gen_output);
        }
        if (*compare) {
            return run_compare(compare_inputs, algos, with_oracle, report_path, compare_format,
                               timing, compare_desires);
        }
    } catch (const Error& e) {
        std::cerr << e.kind() << ": " << e.what() << "\n";
        return static_cast<int>(e.error_class());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
