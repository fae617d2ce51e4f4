#include "fairsched/allocators.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <unordered_map>

#include "fairsched/intervals.hpp"

namespace fairsched {

namespace {

void require_expanded(const Instance& instance, const char* who) {
    if (!instance.expanded) {
        throw NotExpanded(std::string(who) + ": instance must be seat-expanded first");
    }
}

void require_binary_or_uniform(const Instance& instance, const char* who) {
    for (const auto& s : instance.students) {
        if (s.utility.kind == UtilityKind::General) {
            throw NonBinaryUtilities(std::string(who) + ": student " + s.id +
                                     " has general utilities; binary (or uniform) required");
        }
    }
}

bool conflicts_with_bundle(const Instance& instance, const std::vector<std::size_t>& bundle,
                           const Course& course) {
    for (std::size_t held : bundle) {
        if (overlaps(instance.courses[held].interval, course.interval)) return true;
    }
    return false;
}

Allocation materialize(const Instance& instance,
                       const std::vector<std::vector<std::size_t>>& bundles) {
    Allocation alloc = make_empty_allocation(instance);
    for (std::size_t i = 0; i < bundles.size(); ++i) {
        auto& target = alloc.assignments[instance.students[i].id];
        for (std::size_t k : bundles[i]) {
            target.insert(instance.courses[k].id);
            alloc.charity.erase(instance.courses[k].id);
        }
    }
    return alloc;
}

std::vector<std::vector<double>> utility_matrix(const Instance& instance) {
    std::vector<std::vector<double>> util(instance.students.size(),
                                          std::vector<double>(instance.courses.size(), 0.0));
    for (std::size_t i = 0; i < instance.students.size(); ++i) {
        for (std::size_t k = 0; k < instance.courses.size(); ++k) {
            util[i][k] = utility_of(instance.students[i], instance.courses[k]);
        }
    }
    return util;
}

}  // namespace

std::string AlgorithmChoice::name() const {
    switch (kind) {
        case Algorithm::RoundRobin: return "round-robin";
        case Algorithm::MisRoundRobin: return "mis";
        case Algorithm::Ef1ccRoundRobin: return "ef1cc";
        case Algorithm::MaxMinAugmenting: return "maxmin";
        case Algorithm::DpExact: return "dp";
    }
    return "unknown";
}

AlgorithmChoice AlgorithmChoice::from_name(const std::string& name) {
    if (name == "round-robin") return {Algorithm::RoundRobin};
    if (name == "mis") return {Algorithm::MisRoundRobin};
    if (name == "ef1cc") return {Algorithm::Ef1ccRoundRobin};
    if (name == "maxmin") return {Algorithm::MaxMinAugmenting};
    if (name == "dp") return {Algorithm::DpExact};
    throw InvalidParams("unknown algorithm: " + name +
                        " (expected round-robin|mis|ef1cc|maxmin|dp)");
}

Allocation round_robin(const Instance& instance) {
    require_expanded(instance, "round_robin");
    const std::size_t n = instance.students.size();
    std::vector<std::vector<std::size_t>> bundles(n);
    std::vector<int> used(n, 0);

    for (std::size_t k : sorted_course_indices(instance.courses)) {
        const Course& course = instance.courses[k];
        int pick = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i] + course.credits > instance.students[i].credit_cap) continue;
            if (conflicts_with_bundle(instance, bundles[i], course)) continue;
            if (pick < 0 || bundles[i].size() < bundles[pick].size()) {
                pick = static_cast<int>(i);  // ties go to the lowest student index
            }
        }
        if (pick >= 0) {
            bundles[pick].push_back(k);
            used[pick] += course.credits;
        }
    }
    return materialize(instance, bundles);
}

Allocation ef1cc_round_robin(const Instance& instance) {
    require_expanded(instance, "ef1cc_round_robin");
    require_binary_or_uniform(instance, "ef1cc_round_robin");
    const std::size_t n = instance.students.size();
    auto util = utility_matrix(instance);
    std::vector<std::vector<std::size_t>> bundles(n);
    std::vector<int> used(n, 0);

    for (std::size_t k : sorted_course_indices(instance.courses)) {
        const Course& course = instance.courses[k];
        int pick = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(util[i][k] > 0)) continue;
            if (used[i] + course.credits > instance.students[i].credit_cap) continue;
            if (conflicts_with_bundle(instance, bundles[i], course)) continue;
            if (pick < 0 || bundles[i].size() < bundles[pick].size() ||
                (bundles[i].size() == bundles[pick].size() &&
                 instance.students[i].id < instance.students[pick].id)) {
                pick = static_cast<int>(i);  // ties go to the lowest student id
            }
        }
        if (pick >= 0) {
            bundles[pick].push_back(k);
            used[pick] += course.credits;
        }
    }
    return materialize(instance, bundles);
}

Allocation mis_round_robin(const Instance& instance) {
    require_expanded(instance, "mis_round_robin");
    require_binary_or_uniform(instance, "mis_round_robin");
    for (const auto& c : instance.courses) {
        if (c.credits != 1) {
            throw NonUnitCredits("mis_round_robin: course " + c.id + " has " +
                                 std::to_string(c.credits) + " credits; unit credits required");
        }
    }
    const std::size_t n = instance.students.size();
    auto util = utility_matrix(instance);

    std::vector<std::size_t> student_order(n);
    for (std::size_t i = 0; i < n; ++i) student_order[i] = i;
    std::sort(student_order.begin(), student_order.end(), [&](std::size_t a, std::size_t b) {
        const Student& sa = instance.students[a];
        const Student& sb = instance.students[b];
        if (sa.credit_cap != sb.credit_cap) return sa.credit_cap > sb.credit_cap;
        return sa.id < sb.id;
    });

    std::vector<bool> taken(instance.courses.size(), false);
    std::vector<std::vector<std::size_t>> bundles(n);
    for (std::size_t i : student_order) {
        std::vector<Course> candidates;
        std::vector<std::size_t> back;
        for (std::size_t k = 0; k < instance.courses.size(); ++k) {
            if (!taken[k] && util[i][k] > 0) {
                candidates.push_back(instance.courses[k]);
                back.push_back(k);
            }
        }
        std::vector<std::size_t> picked = interval_mis_indices(candidates);
        std::size_t cap = static_cast<std::size_t>(std::max(instance.students[i].credit_cap, 0));
        if (picked.size() > cap) picked.resize(cap);  // keep the earliest-ending prefix
        for (std::size_t local : picked) {
            bundles[i].push_back(back[local]);
            taken[back[local]] = true;
        }
    }
    return materialize(instance, bundles);
}

namespace {

struct AllocView {
    const Instance& instance;
    std::unordered_map<std::string, const Course*> course_by_id;
    std::unordered_map<std::string, const Student*> student_by_id;

    explicit AllocView(const Instance& inst) : instance(inst) {
        for (const auto& c : inst.courses) course_by_id.emplace(c.id, &c);
        for (const auto& s : inst.students) student_by_id.emplace(s.id, &s);
    }

    const Course& course(const std::string& id) const { return *course_by_id.at(id); }

    int used_credits(const Allocation& alloc, const std::string& sid) const {
        int total = 0;
        for (const auto& cid : alloc.bundle(sid)) total += course(cid).credits;
        return total;
    }

    bool bundle_conflicts(const Allocation& alloc, const std::string& sid,
                          const Course& c, const std::string& ignoring = {}) const {
        for (const auto& cid : alloc.bundle(sid)) {
            if (cid == ignoring) continue;
            if (overlaps(course(cid).interval, c.interval)) return true;
        }
        return false;
    }

    std::string owner_of(const Allocation& alloc, const std::string& course_id) const {
        for (const auto& [sid, bundle] : alloc.assignments) {
            if (bundle.count(course_id)) return sid;
        }
        return {};
    }
};

void apply_augmenting_path(const Instance& instance, const AllocView& view, Allocation& alloc,
                           const AugmentPath& path) {
    std::vector<std::string> owners;
    owners.reserve(path.courses.size());
    for (const auto& cid : path.courses) owners.push_back(view.owner_of(alloc, cid));

    // Source-first, so each later course lands in the slot its predecessor
    // just vacated and the allocation stays valid after every single move.
    std::vector<std::string> destination;
    destination.push_back(path.dummy_student);
    for (std::size_t t = 1; t < path.courses.size(); ++t) destination.push_back(owners[t - 1]);

    for (std::size_t t = 0; t < path.courses.size(); ++t) {
        alloc.assignments[owners[t]].erase(path.courses[t]);
        alloc.assignments[destination[t]].insert(path.courses[t]);
        ValidationReport report = validate_allocation(instance, alloc);
        if (!report.valid) {
            throw InvariantBreach("maxmin_augmenting: move of " + path.courses[t] + " to " +
                                  destination[t] + " broke allocation validity (" +
                                  report.violations.front().detail + ")");
        }
    }
}

}  // namespace

AugmentGraph build_augment_graph(const Instance& instance, const Allocation& alloc,
                                 const std::string& from_student) {
    AllocView view(instance);
    AugmentGraph graph;
    for (const auto& s : instance.students) graph.dummy_nodes.push_back(s.id);

    std::deque<std::string> queue;
    std::set<std::string> enqueued;
    queue.push_back(from_student);
    enqueued.insert(from_student);

    auto enqueue = [&](const std::string& sid) {
        if (!graph.processed.count(sid) && !enqueued.count(sid)) {
            queue.push_back(sid);
            enqueued.insert(sid);
        }
    };

    while (!queue.empty()) {
        std::string p = queue.front();
        queue.pop_front();
        if (graph.processed.count(p)) continue;
        graph.processed.insert(p);

        const auto& bundle_p = alloc.bundle(p);
        for (const auto& jid : bundle_p) {
            graph.course_nodes.push_back(jid);
            const Course& j = view.course(jid);

            for (const auto& b : instance.students) {
                if (b.id == p) continue;
                const auto& bundle_b = alloc.bundle(b.id);
                if (!(utility_of(b, j) > 0)) continue;

                // d_b -> j: b takes j outright and still sits strictly
                // below p's pre-transfer load.
                if (bundle_b.size() + 2 <= bundle_p.size() &&
                    view.used_credits(alloc, b.id) + j.credits <= b.credit_cap &&
                    !view.bundle_conflicts(alloc, b.id, j)) {
                    graph.edges.push_back({true, b.id, jid, AugmentEdgeReason::DummyEntry});
                    enqueue(b.id);
                }

                // j' -> j: j' is b's unique conflicter of j; b swaps j' for j.
                if (bundle_b.size() < bundle_p.size()) {
                    std::vector<std::string> conflicters;
                    for (const auto& cid : bundle_b) {
                        if (overlaps(view.course(cid).interval, j.interval)) {
                            conflicters.push_back(cid);
                        }
                    }
                    if (conflicters.size() == 1) {
                        const Course& jp = view.course(conflicters.front());
                        if (view.used_credits(alloc, b.id) - jp.credits + j.credits <=
                            b.credit_cap) {
                            graph.edges.push_back({false, conflicters.front(), jid,
                                                   AugmentEdgeReason::ConflictSwap});
                            enqueue(b.id);
                        }
                    }
                }
            }
        }
    }
    return graph;
}

std::optional<AugmentPath> find_augmenting_path(const AugmentGraph& graph,
                                                const Allocation& alloc,
                                                const std::string& sink_student) {
    // node keys: "c:<course>" and "d:<student>"
    auto course_key = [](const std::string& id) { return "c:" + id; };
    auto dummy_key = [](const std::string& id) { return "d:" + id; };

    std::map<std::string, std::vector<std::pair<std::string, std::string>>> out_edges;
    for (const auto& e : graph.edges) {
        std::string from = e.from_dummy ? dummy_key(e.from) : course_key(e.from);
        out_edges[from].push_back({course_key(e.to), e.to});
    }

    const auto& sink_bundle = alloc.bundle(sink_student);

    std::deque<std::string> queue;
    std::map<std::string, std::string> parent;  // node -> predecessor node
    for (const auto& sid : graph.dummy_nodes) {
        std::string key = dummy_key(sid);
        if (out_edges.count(key)) {
            queue.push_back(key);
            parent.emplace(key, "");
        }
    }

    std::string found;
    while (!queue.empty() && found.empty()) {
        std::string node = queue.front();
        queue.pop_front();
        auto it = out_edges.find(node);
        if (it == out_edges.end()) continue;
        for (const auto& [next_key, course_id] : it->second) {
            if (parent.count(next_key)) continue;
            parent.emplace(next_key, node);
            if (sink_bundle.count(course_id)) {
                found = next_key;
                break;
            }
            queue.push_back(next_key);
        }
    }
    if (found.empty()) return std::nullopt;

    std::vector<std::string> course_chain;
    std::string node = found;
    while (!node.empty() && node[0] == 'c') {
        course_chain.push_back(node.substr(2));
        node = parent.at(node);
    }
    std::reverse(course_chain.begin(), course_chain.end());
    AugmentPath path;
    path.dummy_student = node.substr(2);
    path.courses = std::move(course_chain);
    return path;
}

Allocation maxmin_augmenting(const Instance& instance,
                             std::optional<std::size_t> max_augmentations_per_course) {
    require_expanded(instance, "maxmin_augmenting");
    require_binary_or_uniform(instance, "maxmin_augmenting");
    AllocView view(instance);
    Allocation alloc = make_empty_allocation(instance);

    const std::size_t limit = max_augmentations_per_course.value_or(
        instance.students.size() * instance.courses.size());

    for (std::size_t k : sorted_course_indices(instance.courses)) {
        const Course& course = instance.courses[k];
        const Student* pick = nullptr;
        std::size_t pick_load = 0;
        for (const auto& s : instance.students) {
            if (!(utility_of(s, course) > 0)) continue;
            if (view.used_credits(alloc, s.id) + course.credits > s.credit_cap) continue;
            if (view.bundle_conflicts(alloc, s.id, course)) continue;
            std::size_t load = alloc.bundle(s.id).size();
            if (pick == nullptr || load < pick_load ||
                (load == pick_load && s.id < pick->id)) {
                pick = &s;
                pick_load = load;
            }
        }
        if (pick == nullptr) continue;  // unassignable; stays with charity

        alloc.assignments[pick->id].insert(course.id);
        alloc.charity.erase(course.id);

        std::size_t augmentations = 0;
        while (true) {
            AugmentGraph graph = build_augment_graph(instance, alloc, pick->id);
            auto path = find_augmenting_path(graph, alloc, pick->id);
            if (!path) break;
            if (++augmentations > limit) {
                throw AugmentationLimitExceeded(
                    "maxmin_augmenting: more than " + std::to_string(limit) +
                    " augmentations after assigning " + course.id);
            }
            apply_augmenting_path(instance, view, alloc, *path);
        }
    }
    return alloc;
}

namespace {

constexpr int kDpMaxStudents = 6;

struct DpKey {
    std::int32_t j = 0;
    std::array<std::int32_t, kDpMaxStudents> t{};
    std::array<std::int32_t, kDpMaxStudents> p{};

    friend bool operator==(const DpKey&, const DpKey&) = default;
};

struct DpKeyHash {
    std::size_t operator()(const DpKey& k) const {
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ULL;
        };
        mix(static_cast<std::uint64_t>(k.j));
        for (auto v : k.t) mix(static_cast<std::uint64_t>(v) + 0x9e3779b9ULL);
        for (auto v : k.p) mix(static_cast<std::uint64_t>(v) + 0x7f4a7c15ULL);
        return static_cast<std::size_t>(h);
    }
};

struct DpEntry {
    double value = 0;
    std::int8_t choice = -1;  // -1 skip, otherwise student index
};

}  // namespace

DpResult dp_exact_small(const Instance& instance, std::size_t max_states, int max_students) {
    require_expanded(instance, "dp_exact_small");
    if (max_students < 1) {
        throw InvalidParams("dp_exact_small: max_students must be >= 1");
    }
    const int n = static_cast<int>(instance.students.size());
    if (n > max_students || n > kDpMaxStudents) {
        throw TooManyStudents("dp_exact_small: " + std::to_string(n) +
                              " students exceeds the guard of " +
                              std::to_string(std::min(max_students, kDpMaxStudents)));
    }
    const int m = static_cast<int>(instance.courses.size());

    // non-decreasing start order; ties by end then id for reproducibility
    std::vector<std::size_t> order(instance.courses.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Course& ca = instance.courses[a];
        const Course& cb = instance.courses[b];
        return std::tie(ca.interval.start, ca.interval.end, ca.id) <
               std::tie(cb.interval.start, cb.interval.end, cb.id);
    });

    // next-free times live in {0} U {course end times}
    std::vector<int> times{0};
    for (const auto& c : instance.courses) times.push_back(c.interval.end);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    auto time_index = [&](int t) {
        return static_cast<std::int32_t>(
            std::lower_bound(times.begin(), times.end(), t) - times.begin());
    };

    auto util = utility_matrix(instance);

    std::unordered_map<DpKey, DpEntry, DpKeyHash> memo;

    std::function<double(int, const std::array<std::int32_t, kDpMaxStudents>&,
                         const std::array<std::int32_t, kDpMaxStudents>&)>
        solve = [&](int j, const std::array<std::int32_t, kDpMaxStudents>& t,
                    const std::array<std::int32_t, kDpMaxStudents>& p) -> double {
        if (j == m) return 0.0;
        DpKey key{j, t, p};
        if (auto it = memo.find(key); it != memo.end()) return it->second.value;

        const std::size_t course_idx = order[static_cast<std::size_t>(j)];
        const Course& course = instance.courses[course_idx];

        DpEntry entry;
        entry.value = solve(j + 1, t, p);
        entry.choice = -1;
        for (int i = 0; i < n; ++i) {
            if (course.interval.start < times[static_cast<std::size_t>(t[i])]) continue;
            if (course.credits > p[i]) continue;
            auto t2 = t;
            auto p2 = p;
            t2[i] = time_index(course.interval.end);
            p2[i] -= course.credits;
            double v = util[static_cast<std::size_t>(i)][course_idx] + solve(j + 1, t2, p2);
            if (v > entry.value) {
                entry.value = v;
                entry.choice = static_cast<std::int8_t>(i);
            }
        }
        if (memo.size() >= max_states) {
            throw StateBudgetExceeded("dp_exact_small: memo exceeded " +
                                      std::to_string(max_states) + " states");
        }
        memo.emplace(key, entry);
        return entry.value;
    };

    std::array<std::int32_t, kDpMaxStudents> t0{};
    std::array<std::int32_t, kDpMaxStudents> p0{};
    for (int i = 0; i < n; ++i) p0[static_cast<std::size_t>(i)] = instance.students[i].credit_cap;

    DpResult result;
    result.value = solve(0, t0, p0);

    // backtrack along memoized choices
    std::vector<std::vector<std::size_t>> bundles(instance.students.size());
    auto t = t0;
    auto p = p0;
    for (int j = 0; j < m; ++j) {
        DpKey key{j, t, p};
        auto it = memo.find(key);
        if (it == memo.end()) break;
        int choice = it->second.choice;
        if (choice >= 0) {
            const std::size_t course_idx = order[static_cast<std::size_t>(j)];
            const Course& course = instance.courses[course_idx];
            bundles[static_cast<std::size_t>(choice)].push_back(course_idx);
            t[choice] = time_index(course.interval.end);
            p[choice] -= course.credits;
        }
    }
    result.allocation = materialize(instance, bundles);
    return result;
}

Allocation run_algorithm(const Instance& instance, const AlgorithmChoice& choice) {
    switch (choice.kind) {
        case Algorithm::RoundRobin: return round_robin(instance);
        case Algorithm::MisRoundRobin: return mis_round_robin(instance);
        case Algorithm::Ef1ccRoundRobin: return ef1cc_round_robin(instance);
        case Algorithm::MaxMinAugmenting: return maxmin_augmenting(instance);
        case Algorithm::DpExact:
            return dp_exact_small(instance, kDefaultDpStateBudget, choice.dp_max_students)
                .allocation;
    }
    throw InvalidParams("run_algorithm: unknown algorithm kind");
}

}  // namespace fairsched
