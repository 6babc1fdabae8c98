// SPDX-License-Identifier: Apache-2.0
// Hand-rolled random generators for the property tests.
#pragma once

#include <cstdint>
#include <random>

#include "optionrace/core_model.hpp"

namespace optionrace::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    bool coin() { return integer(0, 1) == 1; }

    /// Probability in (0, 1], occasionally exactly 1.
    double pi() { return integer(0, 19) == 0 ? 1.0 : uniform(0.01, 0.99); }

    model::RaceParameters params(double max_share = 0.49) {
        model::RaceParameters p;
        p.invest_cost = uniform(0.05, 20.0);
        p.d_social = integer(0, 9) == 0 ? 0.0 : uniform(0.0, 100.0);
        p.d_private = coin() ? 0.0 : uniform(0.0, 50.0);
        p.share = integer(0, 4) == 0 ? 0.0 : uniform(0.0, max_share);
        p.lambda_rate = uniform(0.05, 2.0);
        return p;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace optionrace::testing
