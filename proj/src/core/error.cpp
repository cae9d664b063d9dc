// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "error.hpp"

namespace melodevo {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::invalid_config: return "invalid_config";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::scores_pending: return "scores_pending";
    case ErrorCode::state_conflict: return "state_conflict";
    case ErrorCode::io: return "io_error";
    case ErrorCode::parse: return "parse_error";
    case ErrorCode::schema_version: return "schema_version";
    case ErrorCode::verification: return "verification_failed";
    case ErrorCode::internal: return "internal";
    }
    return "internal";
}

} // namespace melodevo
