#pragma once

// Shared generators for the test suites.

#include <random>
#include <string>
#include <vector>

#include "hroot/descriptor.hpp"

namespace hroot::testing {

struct MixOptions {
    int max_order = 12;
    /// Largest Jordan block at a nonzero eigenvalue.
    int max_nonzero_block = 3;
    /// Largest Jordan block at zero.
    int max_zero_block = 4;
};

/// Blocks drawn from the eigenvalue pools {1, 4}, {-1, -3}, {0},
/// {1+2i, -2+i}, with random sizes and signs.
inline Descriptor random_mixed_descriptor(std::mt19937_64& rng, const MixOptions& opt) {
    std::uniform_int_distribution<int> kind(0, 3);
    std::bernoulli_distribution coin(0.5);
    const int target = std::uniform_int_distribution<int>(1, opt.max_order)(rng);
    Descriptor d;
    int order = 0;
    for (int attempt = 0; attempt < 64 && order < target; ++attempt) {
        const int left = target - order;
        const int k = kind(rng);
        const int sign = coin(rng) ? 1 : -1;
        if (k == 3) {
            const int cap = std::min(opt.max_nonzero_block, left / 2);
            if (cap < 1) continue;
            const int size = std::uniform_int_distribution<int>(1, cap)(rng);
            d.blocks.push_back(PairBlock{coin(rng) ? Complex(1.0, 2.0) : Complex(-2.0, 1.0), size});
            order += 2 * size;
            continue;
        }
        const int cap = std::min(k == 2 ? opt.max_zero_block : opt.max_nonzero_block, left);
        const int size = std::uniform_int_distribution<int>(1, cap)(rng);
        double lambda = 0.0;
        if (k == 0) lambda = coin(rng) ? 1.0 : 4.0;
        if (k == 1) lambda = coin(rng) ? -1.0 : -3.0;
        d.blocks.push_back(RealBlock{lambda, size, sign});
        order += size;
    }
    if (d.blocks.empty()) d.blocks.push_back(RealBlock{1.0, 1, 1});
    return d;
}

inline std::string to_string(const Descriptor& d) {
    std::string s = "[";
    for (const auto& b : d.blocks) {
        if (const auto* r = std::get_if<RealBlock>(&b))
            s += "(" + std::to_string(r->eigenvalue) + "," + std::to_string(r->size) + "," +
                 std::to_string(r->sign) + ")";
        else {
            const auto& p = std::get<PairBlock>(b);
            s += "(" + std::to_string(p.eigenvalue.real()) + "+" + std::to_string(p.eigenvalue.imag()) + "i," +
                 std::to_string(p.size) + ")";
        }
    }
    return s + "]";
}

}  // namespace hroot::testing
