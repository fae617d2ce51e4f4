#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fairsched/model.hpp"

namespace fairsched {

/// Seeded synthetic instance parameters. The example-1..8 presets are
/// reconstructions in the spirit of small benchmark sets, not recovered
/// datasets.
struct GenParams {
    int n_students = 0;
    int n_courses = 0;
    int slot_grid = 50;
    std::array<int, 2> duration_range{1, 3};
    std::array<int, 2> seats_range{1, 1};
    std::array<int, 2> cap_range{0, 4};
    enum class Utility { Uniform, Binary } utility_kind = Utility::Uniform;
    double desire_probability = 0.5;
    std::uint64_t seed = 0;
};

/// Deterministic for a fixed parameter set: the same params always produce
/// the same instance, byte for byte once serialized.
Instance generate_instance(const GenParams& params);

/// Presets example-1..example-8 (k in [1,8]).
GenParams preset(int k);

std::vector<std::string> preset_names();

}  // namespace fairsched
