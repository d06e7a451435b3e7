#pragma once

#include "thermobeam/operators.hpp"

#include <cstdint>
#include <random>

namespace thermobeam {

/// Seeded source of uniform doubles in [-1, 1). The conversion from the raw
/// 64-bit stream is done by hand so sequences match across standard libraries.
class StateSampler {
public:
    explicit StateSampler(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        const auto bits = engine_() >> 11;
        return 2.0 * static_cast<double>(bits) * 0x1.0p-53 - 1.0;
    }

    BeamState state(std::size_t n_interior) {
        BeamState s = BeamState::zeros(n_interior);
        for (auto& x : s.u) x = uniform();
        for (auto& x : s.v) x = uniform();
        for (auto& x : s.theta) x = uniform();
        return s;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace thermobeam
