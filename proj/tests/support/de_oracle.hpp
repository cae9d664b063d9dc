// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Brute-force reference for one DE/rand/1/bin generation written directly
// from the update rules over plain arrays. Shares no code with the engine.

#include <cstddef>
#include <vector>

namespace melodevo::testing {

struct SlotScript {
    std::size_t r1, r2, r3;
    std::size_t forced;          // j_rand
    std::vector<double> rand_j;  // one per component
};

struct OracleGeneration {
    std::vector<std::vector<double>> trials;
    std::vector<std::vector<double>> next;
    std::vector<double> next_fitness;
};

template <typename Objective>
OracleGeneration brute_force_generation(const std::vector<std::vector<double>>& x,
                                        const std::vector<double>& fx, double F, double Cr,
                                        const std::vector<SlotScript>& script, Objective f) {
    OracleGeneration out;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = script[i];
        const std::size_t d = x[i].size();
        std::vector<double> v(d), u(d);
        for (std::size_t j = 0; j < d; ++j)
            v[j] = x[s.r1][j] + F * (x[s.r2][j] - x[s.r3][j]);
        for (std::size_t j = 0; j < d; ++j)
            u[j] = (s.rand_j[j] <= Cr || j == s.forced) ? v[j] : x[i][j];
        const double fu = f(u);
        if (fu <= fx[i]) {
            out.next.push_back(u);
            out.next_fitness.push_back(fu);
        } else {
            out.next.push_back(x[i]);
            out.next_fitness.push_back(fx[i]);
        }
        out.trials.push_back(std::move(u));
    }
    return out;
}

} // namespace melodevo::testing
