// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <deque>
#include <stdexcept>

#include "random.hpp"

namespace melodevo::testing {

// Replays a fixed script of draws; throws when the script runs dry or an
// index is out of range for the request.
class ScriptedSource final : public UniformSource {
public:
    std::deque<double> uniforms;
    std::deque<std::size_t> indices;

    double uniform01() override {
        if (uniforms.empty())
            throw std::runtime_error("scripted source: no uniform draws left");
        double u = uniforms.front();
        uniforms.pop_front();
        return u;
    }

    std::size_t below(std::size_t n) override {
        if (indices.empty())
            throw std::runtime_error("scripted source: no index draws left");
        std::size_t k = indices.front();
        indices.pop_front();
        if (k >= n)
            throw std::runtime_error("scripted source: index out of range");
        return k;
    }

    bool exhausted() const { return uniforms.empty() && indices.empty(); }
};

} // namespace melodevo::testing
