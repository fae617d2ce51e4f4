#include "fairsched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "fairsched/intervals.hpp"

namespace fairsched {

namespace {

struct Dense {
    const Instance& instance;
    std::size_t n;
    std::size_t m;
    std::vector<std::size_t> order;  // canonical course order
    std::vector<std::vector<double>> util;  // [student][position in order]
    std::vector<TimeInterval> iv;           // [position]
    std::vector<int> credits;               // [position]
    std::vector<int> caps;
    std::vector<double> suffix_best;                  // sum of max_i util from position k
    std::vector<std::vector<double>> suffix_student;  // per-student suffix sums

    explicit Dense(const Instance& inst)
        : instance(inst), n(inst.students.size()), m(inst.courses.size()) {
        order = sorted_course_indices(inst.courses);
        util.assign(n, std::vector<double>(m, 0.0));
        iv.resize(m);
        credits.resize(m);
        caps.resize(n);
        for (std::size_t i = 0; i < n; ++i) caps[i] = inst.students[i].credit_cap;
        for (std::size_t k = 0; k < m; ++k) {
            const Course& c = inst.courses[order[k]];
            iv[k] = c.interval;
            credits[k] = c.credits;
            for (std::size_t i = 0; i < n; ++i) {
                util[i][k] = utility_of(inst.students[i], c);
            }
        }
        suffix_best.assign(m + 1, 0.0);
        suffix_student.assign(n, std::vector<double>(m + 1, 0.0));
        for (std::size_t k = m; k-- > 0;) {
            double best = 0;
            for (std::size_t i = 0; i < n; ++i) {
                best = std::max(best, util[i][k]);
                suffix_student[i][k] = suffix_student[i][k + 1] + util[i][k];
            }
            suffix_best[k] = suffix_best[k + 1] + best;
        }
    }

    Allocation materialize(const std::vector<int>& assignment) const {
        Allocation alloc = make_empty_allocation(instance);
        for (std::size_t k = 0; k < m; ++k) {
            if (assignment[k] < 0) continue;
            const std::string& cid = instance.courses[order[k]].id;
            alloc.assignments[instance.students[static_cast<std::size_t>(assignment[k])].id]
                .insert(cid);
            alloc.charity.erase(cid);
        }
        return alloc;
    }
};

void check_guards(const Instance& instance, const SolverLimits& limits, const char* who) {
    if (!instance.expanded) {
        throw NotExpanded(std::string(who) + ": instance must be seat-expanded first");
    }
    if (instance.students.size() > static_cast<std::size_t>(limits.max_students) ||
        instance.courses.size() > limits.max_courses) {
        throw InstanceTooLarge(std::string(who) + ": instance has n=" +
                               std::to_string(instance.students.size()) + ", m=" +
                               std::to_string(instance.courses.size()) + "; guard is n<=" +
                               std::to_string(limits.max_students) + ", m<=" +
                               std::to_string(limits.max_courses));
    }
}

struct SearchState {
    std::vector<int> assignment;                 // per ordered course: student or -1
    std::vector<std::vector<std::size_t>> held;  // per student, positions held
    std::vector<int> used;                       // credits used
    std::vector<double> value;                   // utility per student
    double total = 0;

    explicit SearchState(const Dense& d)
        : assignment(d.m, -1), held(d.n), used(d.n, 0), value(d.n, 0.0) {}
};

bool fits(const Dense& d, const SearchState& s, std::size_t i, std::size_t k) {
    if (s.used[i] + d.credits[k] > d.caps[i]) return false;
    for (std::size_t held : s.held[i]) {
        if (overlaps(d.iv[held], d.iv[k])) return false;
    }
    return true;
}

void assign(const Dense& d, SearchState& s, std::size_t i, std::size_t k) {
    s.assignment[k] = static_cast<int>(i);
    s.held[i].push_back(k);
    s.used[i] += d.credits[k];
    s.value[i] += d.util[i][k];
    s.total += d.util[i][k];
}

void unassign(const Dense& d, SearchState& s, std::size_t i, std::size_t k) {
    s.assignment[k] = -1;
    s.held[i].pop_back();
    s.used[i] -= d.credits[k];
    s.value[i] -= d.util[i][k];
    s.total -= d.util[i][k];
}

struct NodeCounter {
    std::uint64_t nodes = 0;
    std::uint64_t budget;
    const char* who;

    void tick() {
        if (++nodes > budget) {
            throw BudgetExceeded(std::string(who) + ": node budget of " +
                                 std::to_string(budget) + " exhausted");
        }
    }
};

// Maximize social welfare subject to every student reaching `threshold`
// (pass -infinity for the unconstrained problem).
OracleResult max_welfare_search(const Dense& d, const SolverLimits& limits,
                                double threshold, const char* who) {
    SearchState state(d);
    NodeCounter counter{0, limits.node_budget, who};

    bool found = false;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> best_assignment(d.m, -1);

    auto feasible_remainder = [&](std::size_t k) {
        for (std::size_t i = 0; i < d.n; ++i) {
            if (state.value[i] + d.suffix_student[i][k] < threshold) return false;
        }
        return true;
    };

    std::function<void(std::size_t)> dfs = [&](std::size_t k) {
        counter.tick();
        if (!feasible_remainder(k)) return;
        if (k == d.m) {
            if (!found || state.total > best) {
                found = true;
                best = state.total;
                best_assignment = state.assignment;
            }
            return;
        }
        if (found && state.total + d.suffix_best[k] <= best) return;
        for (std::size_t i = 0; i < d.n; ++i) {
            if (!fits(d, state, i, k)) continue;
            assign(d, state, i, k);
            dfs(k + 1);
            unassign(d, state, i, k);
        }
        dfs(k + 1);  // charity branch
    };
    dfs(0);

    if (!found) {
        throw InfeasibleThreshold(std::string(who) + ": no valid allocation gives every " +
                                  "student at least " + std::to_string(threshold));
    }
    OracleResult result;
    result.value = best;
    result.allocation = d.materialize(best_assignment);
    result.nodes_explored = counter.nodes;
    result.proven_optimal = true;
    return result;
}

// First valid allocation giving every student at least `threshold`.
bool feasibility_search(const Dense& d, const SolverLimits& limits, double threshold,
                        std::vector<int>& out_assignment, std::uint64_t& nodes,
                        const char* who) {
    SearchState state(d);
    NodeCounter counter{0, limits.node_budget, who};

    std::function<bool(std::size_t)> dfs = [&](std::size_t k) -> bool {
        counter.tick();
        for (std::size_t i = 0; i < d.n; ++i) {
            if (state.value[i] + d.suffix_student[i][k] < threshold) return false;
        }
        if (k == d.m) {
            out_assignment = state.assignment;
            return true;
        }
        for (std::size_t i = 0; i < d.n; ++i) {
            if (!fits(d, state, i, k)) continue;
            assign(d, state, i, k);
            if (dfs(k + 1)) return true;
            unassign(d, state, i, k);
        }
        return dfs(k + 1);
    };
    bool ok = dfs(0);
    nodes += counter.nodes;
    return ok;
}

bool utilities_integral(const Instance& instance) {
    for (const auto& s : instance.students) {
        if (s.utility.kind != UtilityKind::General) continue;
        for (const auto& [cid, v] : s.utility.values) {
            if (std::floor(v) != v) return false;
        }
    }
    return true;
}

}  // namespace

OracleResult opt_social_welfare(const Instance& instance, const SolverLimits& limits) {
    check_guards(instance, limits, "opt_social_welfare");
    Dense d(instance);
    return max_welfare_search(d, limits, -std::numeric_limits<double>::infinity(),
                              "opt_social_welfare");
}

OracleResult opt_maxmin(const Instance& instance, const SolverLimits& limits) {
    check_guards(instance, limits, "opt_maxmin");
    if (!utilities_integral(instance)) {
        throw UnsupportedUtilityKind(
            "opt_maxmin: threshold search requires integer-valued utilities");
    }
    Dense d(instance);

    // floor(U/n) with U the best-case per-course utility mass
    double mass = d.suffix_best.empty() ? 0.0 : d.suffix_best[0];
    long long hi = static_cast<long long>(std::floor(mass / static_cast<double>(d.n)));

    bool cardinal = std::all_of(instance.students.begin(), instance.students.end(),
                                [](const Student& s) {
                                    return s.utility.kind != UtilityKind::General;
                                });
    if (cardinal) {
        for (const auto& s : instance.students) {
            std::vector<Course> desired;
            for (const auto& c : instance.courses) {
                if (utility_of(s, c) > 0) desired.push_back(c);
            }
            hi = std::min(hi, static_cast<long long>(interval_mis(desired).size()));
        }
    }

    std::uint64_t nodes = 0;
    for (long long t = std::max<long long>(hi, 0);; --t) {
        std::vector<int> witness;
        if (feasibility_search(d, limits, static_cast<double>(t), witness, nodes,
                               "opt_maxmin")) {
            OracleResult result;
            result.value = static_cast<double>(t);
            result.allocation = d.materialize(witness);
            result.nodes_explored = nodes;
            result.proven_optimal = true;
            return result;
        }
        if (t == 0) break;
    }
    throw InvariantBreach("opt_maxmin: threshold 0 must always be feasible");
}

OracleResult opt_sw_given_maxmin(const Instance& instance, double threshold,
                                 const SolverLimits& limits) {
    check_guards(instance, limits, "opt_sw_given_maxmin");
    Dense d(instance);
    return max_welfare_search(d, limits, threshold, "opt_sw_given_maxmin");
}

namespace {

struct BMatchDense {
    std::vector<int> agent_cap, res_cap;
    std::vector<std::size_t> edge_agent, edge_res;
    std::vector<double> weight;
    std::vector<double> suffix;
    // conflicts by node index, per side
    std::vector<std::vector<std::size_t>> agent_conflicts, res_conflicts;
};

}  // namespace

OracleResult solve_bmatching_with_conflicts(const GeneralConflictInstance& g,
                                            const SolverLimits& limits) {
    if (g.edges.size() > 24) {
        throw InstanceTooLarge("solve_bmatching_with_conflicts: " +
                               std::to_string(g.edges.size()) + " edges exceeds the guard of 24");
    }
    std::unordered_map<std::string, std::size_t> agent_idx, res_idx;
    for (std::size_t i = 0; i < g.agents.size(); ++i) agent_idx[g.agents[i].id] = i;
    for (std::size_t i = 0; i < g.resources.size(); ++i) res_idx[g.resources[i].id] = i;

    BMatchDense d;
    d.agent_cap.resize(g.agents.size());
    d.res_cap.resize(g.resources.size());
    for (std::size_t i = 0; i < g.agents.size(); ++i) d.agent_cap[i] = g.agents[i].capacity;
    for (std::size_t i = 0; i < g.resources.size(); ++i) d.res_cap[i] = g.resources[i].capacity;
    d.agent_conflicts.resize(g.agents.size());
    d.res_conflicts.resize(g.resources.size());
    for (const auto& [a, b] : g.conflicts) {
        if (agent_idx.count(a) && agent_idx.count(b)) {
            d.agent_conflicts[agent_idx[a]].push_back(agent_idx[b]);
            d.agent_conflicts[agent_idx[b]].push_back(agent_idx[a]);
        } else if (res_idx.count(a) && res_idx.count(b)) {
            d.res_conflicts[res_idx[a]].push_back(res_idx[b]);
            d.res_conflicts[res_idx[b]].push_back(res_idx[a]);
        } else {
            throw SemanticError("conflict pair (" + a + ", " + b +
                                ") does not name two nodes on the same side");
        }
    }
    for (const auto& e : g.edges) {
        if (!agent_idx.count(e.agent) || !res_idx.count(e.resource)) {
            throw SemanticError("edge (" + e.agent + ", " + e.resource + ") names unknown nodes");
        }
        d.edge_agent.push_back(agent_idx[e.agent]);
        d.edge_res.push_back(res_idx[e.resource]);
        d.weight.push_back(e.weight);
    }
    d.suffix.assign(g.edges.size() + 1, 0.0);
    for (std::size_t k = g.edges.size(); k-- > 0;) {
        d.suffix[k] = d.suffix[k + 1] + std::max(0.0, d.weight[k]);
    }

    std::vector<int> agent_deg(g.agents.size(), 0), res_deg(g.resources.size(), 0);
    // partner sets for conflict checks
    std::vector<std::set<std::size_t>> agent_partners(g.agents.size());
    std::vector<std::set<std::size_t>> res_partners(g.resources.size());

    std::vector<bool> chosen(g.edges.size(), false), best_chosen;
    bool found = false;
    double best = -std::numeric_limits<double>::infinity();
    double current = 0;
    NodeCounter counter{0, limits.node_budget, "solve_bmatching_with_conflicts"};

    std::function<void(std::size_t)> dfs = [&](std::size_t k) {
        counter.tick();
        if (k == g.edges.size()) {
            if (!found || current > best) {
                found = true;
                best = current;
                best_chosen = chosen;
            }
            return;
        }
        if (found && current + d.suffix[k] <= best) return;

        std::size_t a = d.edge_agent[k], r = d.edge_res[k];
        bool can = agent_deg[a] < d.agent_cap[a] && res_deg[r] < d.res_cap[r];
        if (can) {
            // r must not already be matched to an agent conflicting with a,
            // and a must not be matched to a resource conflicting with r
            for (std::size_t other : d.agent_conflicts[a]) {
                if (res_partners[r].count(other)) { can = false; break; }
            }
            if (can) {
                for (std::size_t other : d.res_conflicts[r]) {
                    if (agent_partners[a].count(other)) { can = false; break; }
                }
            }
        }
        if (can) {
            chosen[k] = true;
            current += d.weight[k];
            ++agent_deg[a];
            ++res_deg[r];
            agent_partners[a].insert(r);
            res_partners[r].insert(a);
            dfs(k + 1);
            chosen[k] = false;
            current -= d.weight[k];
            --agent_deg[a];
            --res_deg[r];
            agent_partners[a].erase(r);
            res_partners[r].erase(a);
        }
        dfs(k + 1);
    };
    dfs(0);

    OracleResult result;
    result.value = best;
    result.nodes_explored = counter.nodes;
    result.proven_optimal = true;
    for (const auto& agent : g.agents) result.allocation.assignments[agent.id];
    std::unordered_set<std::string> matched;
    for (std::size_t k = 0; k < best_chosen.size(); ++k) {
        if (!best_chosen[k]) continue;
        result.allocation.assignments[g.edges[k].agent].insert(g.edges[k].resource);
        matched.insert(g.edges[k].resource);
    }
    for (const auto& r : g.resources) {
        if (!matched.count(r.id)) result.allocation.charity.insert(r.id);
    }
    return result;
}

GeneralConflictInstance bmatching_from_instance(const Instance& instance) {
    if (!instance.expanded) {
        throw NotExpanded("bmatching_from_instance: instance must be seat-expanded first");
    }
    for (const auto& c : instance.courses) {
        if (c.credits != 1) {
            throw NonUnitCredits("bmatching_from_instance: degree caps model credit caps only "
                                 "under unit credits (course " + c.id + " has " +
                                 std::to_string(c.credits) + ")");
        }
    }
    GeneralConflictInstance g;
    for (const auto& s : instance.students) g.agents.push_back({s.id, s.credit_cap});
    for (const auto& c : instance.courses) g.resources.push_back({c.id, c.seats});
    for (const auto& s : instance.students) {
        for (const auto& c : instance.courses) {
            double w = utility_of(s, c);
            if (w > 0) g.edges.push_back({s.id, c.id, w});
        }
    }
    for (std::size_t i = 0; i < instance.courses.size(); ++i) {
        for (std::size_t j = i + 1; j < instance.courses.size(); ++j) {
            if (overlaps(instance.courses[i].interval, instance.courses[j].interval)) {
                g.conflicts.push_back({instance.courses[i].id, instance.courses[j].id});
            }
        }
    }
    return g;
}

}  // namespace fairsched
