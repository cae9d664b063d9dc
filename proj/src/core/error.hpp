// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace melodevo {

enum class ErrorCode {
    invalid_argument,
    invalid_config,
    not_found,
    scores_pending,
    state_conflict,
    io,
    parse,
    schema_version,
    verification,
    internal,
};

const char* error_code_name(ErrorCode code);

// Single exception type used across the core. `details` carries structured
// extras such as the list of pending candidate ids or violated invariants.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::vector<std::string> details = {})
        : std::runtime_error(message), code_(code), details_(std::move(details)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::vector<std::string>& details() const noexcept { return details_; }

private:
    ErrorCode code_;
    std::vector<std::string> details_;
};

} // namespace melodevo
