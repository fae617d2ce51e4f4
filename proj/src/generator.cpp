#include "fairsched/generator.hpp"

#include <random>

namespace fairsched {

namespace {

// std distributions are not pinned across standard libraries; bounded ints
// come straight from the engine, which the standard does pin.
struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    int uniform_int(int lo, int hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine() % span);
    }

    double uniform01() {
        return static_cast<double>(engine() >> 11) * 0x1.0p-53;
    }
};

void check_range(const std::array<int, 2>& r, int min_lo, const char* name) {
    if (r[0] > r[1] || r[0] < min_lo) {
        throw InvalidParams(std::string("generate_instance: bad ") + name + " range [" +
                            std::to_string(r[0]) + ", " + std::to_string(r[1]) + "]");
    }
}

}  // namespace

Instance generate_instance(const GenParams& params) {
    if (params.n_students < 1) throw InvalidParams("generate_instance: n_students must be >= 1");
    if (params.n_courses < 1) throw InvalidParams("generate_instance: n_courses must be >= 1");
    check_range(params.duration_range, 1, "duration");
    check_range(params.seats_range, 1, "seats");
    check_range(params.cap_range, 0, "cap");
    if (params.slot_grid < params.duration_range[1]) {
        throw InvalidParams("generate_instance: slot_grid smaller than max duration");
    }
    if (params.desire_probability < 0.0 || params.desire_probability > 1.0) {
        throw InvalidParams("generate_instance: desire_probability must lie in [0,1]");
    }

    Rng rng(params.seed);
    Instance instance;

    for (int j = 0; j < params.n_courses; ++j) {
        Course c;
        c.id = "c" + std::to_string(j + 1);
        c.origin_id = c.id;
        int duration = rng.uniform_int(params.duration_range[0], params.duration_range[1]);
        c.interval.start = rng.uniform_int(0, params.slot_grid - duration);
        c.interval.end = c.interval.start + duration;
        c.credits = 1;
        c.seats = rng.uniform_int(params.seats_range[0], params.seats_range[1]);
        instance.courses.push_back(std::move(c));
    }

    for (int i = 0; i < params.n_students; ++i) {
        Student s;
        s.id = "s" + std::to_string(i + 1);
        s.credit_cap = rng.uniform_int(params.cap_range[0], params.cap_range[1]);
        s.utility = UtilitySpec::uniform();
        instance.students.push_back(std::move(s));
    }

    if (params.utility_kind == GenParams::Utility::Binary) {
        for (auto& s : instance.students) {
            std::set<std::string> desired;
            for (const auto& c : instance.courses) {
                if (rng.uniform01() < params.desire_probability) desired.insert(c.id);
            }
            s.utility = UtilitySpec::binary(std::move(desired));
        }
    }
    return instance;
}

GenParams preset(int k) {
    GenParams p;
    switch (k) {
        case 1:
            p = {3, 6, 12, {1, 3}, {1, 1}, {2, 2}, GenParams::Utility::Uniform, 0.5, 101};
            break;
        case 2:
            p = {3, 8, 14, {1, 4}, {1, 1}, {1, 3}, GenParams::Utility::Binary, 0.5, 202};
            break;
        case 3:
            p = {4, 10, 16, {1, 4}, {1, 1}, {2, 3}, GenParams::Utility::Binary, 0.4, 303};
            break;
        case 4:
            p = {2, 5, 10, {1, 2}, {1, 1}, {2, 2}, GenParams::Utility::Uniform, 0.5, 404};
            break;
        case 5:
            p = {3, 8, 12, {1, 3}, {1, 2}, {2, 4}, GenParams::Utility::Binary, 0.6, 505};
            break;
        case 6:
            p = {3, 12, 18, {2, 2}, {1, 1}, {4, 4}, GenParams::Utility::Uniform, 0.5, 606};
            break;
        case 7:
            p = {4, 9, 12, {1, 2}, {1, 1}, {1, 2}, GenParams::Utility::Binary, 0.7, 707};
            break;
        case 8:
            p = {5, 18, 20, {1, 3}, {1, 1}, {2, 3}, GenParams::Utility::Binary, 0.35, 808};
            break;
        default:
            throw InvalidParams("preset: expected example-1..example-8, got index " +
                                std::to_string(k));
    }
    return p;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (int k = 1; k <= 8; ++k) out.push_back("example-" + std::to_string(k));
    return out;
}

}  // namespace fairsched
