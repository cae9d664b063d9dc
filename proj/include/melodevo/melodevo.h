/*
 * Copyright 2026 The melodevo Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/*
 * melodevo C API.
 *
 * Interactive differential evolution of melodies. All objects are opaque
 * handles owned by the caller and released with the matching *_free
 * function. Every fallible call returns a melodevo_status; on failure
 * melodevo_last_error() describes the problem for the calling thread until
 * the next API call on that thread.
 *
 * Strings passed in are UTF-8 and NUL terminated. Buffers handed out are
 * released with melodevo_buffer_free.
 */

#ifndef MELODEVO_MELODEVO_H
#define MELODEVO_MELODEVO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MELODEVO_BUILDING)
#    define MELODEVO_API __declspec(dllexport)
#  else
#    define MELODEVO_API __declspec(dllimport)
#  endif
#else
#  define MELODEVO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum melodevo_status {
    MELODEVO_OK = 0,
    MELODEVO_ERR_INVALID_ARGUMENT = 1,
    MELODEVO_ERR_INVALID_CONFIG = 2,
    MELODEVO_ERR_NOT_FOUND = 3,
    MELODEVO_ERR_SCORES_PENDING = 4,
    MELODEVO_ERR_STATE = 5,
    MELODEVO_ERR_IO = 6,
    MELODEVO_ERR_PARSE = 7,
    MELODEVO_ERR_SCHEMA_VERSION = 8,
    MELODEVO_ERR_VERIFICATION = 9,
    MELODEVO_ERR_INTERNAL = 10
} melodevo_status;

typedef struct melodevo_buffer {
    uint8_t* data;
    size_t size;
} melodevo_buffer;

typedef struct melodevo_session melodevo_session;
typedef struct melodevo_server melodevo_server;

MELODEVO_API const char* melodevo_version(void);
MELODEVO_API const char* melodevo_status_name(melodevo_status status);

/* Message for the most recent failure on this thread ("" if none). */
MELODEVO_API const char* melodevo_last_error(void);

/* Frees the data and resets the buffer to empty. Safe on empty buffers. */
MELODEVO_API void melodevo_buffer_free(melodevo_buffer* buffer);

/* ---- sessions ---------------------------------------------------------- */

/* config_json: session config object; NULL or "{}" takes every default. */
MELODEVO_API melodevo_status melodevo_session_create(const char* config_json, const char* session_id,
                                                     melodevo_session** out);
MELODEVO_API melodevo_status melodevo_session_load(const char* path, melodevo_session** out);
MELODEVO_API melodevo_status melodevo_session_load_bytes(const uint8_t* data, size_t size,
                                                         melodevo_session** out);
/* Atomic: a crash never leaves a half-written file at `path`. */
MELODEVO_API melodevo_status melodevo_session_save(const melodevo_session* session, const char* path);
MELODEVO_API melodevo_status melodevo_session_document(const melodevo_session* session, melodevo_buffer* out);
MELODEVO_API void melodevo_session_free(melodevo_session* session);

MELODEVO_API melodevo_status melodevo_session_round(const melodevo_session* session, melodevo_buffer* json_out);
MELODEVO_API melodevo_status melodevo_session_submit_score(melodevo_session* session, const char* candidate_id,
                                                           double score);
/* MELODEVO_ERR_SCORES_PENDING: melodevo_last_error() lists the pending ids. */
MELODEVO_API melodevo_status melodevo_session_advance(melodevo_session* session);
MELODEVO_API melodevo_status melodevo_session_finish(melodevo_session* session, melodevo_buffer* manifest_json);
MELODEVO_API melodevo_status melodevo_session_export_midi(const melodevo_session* session, const char* candidate_id,
                                                          melodevo_buffer* smf_out);

/*
 * Rebuilds the session from its seed, config and score log. Returns
 * MELODEVO_OK when the result matches bit for bit, MELODEVO_ERR_VERIFICATION
 * otherwise; `report` (may be NULL) receives one line per difference.
 */
MELODEVO_API melodevo_status melodevo_session_replay(const melodevo_session* session, melodevo_buffer* report);

/* ---- synthetic runs ---------------------------------------------------- */

typedef enum melodevo_oracle { MELODEVO_ORACLE_SPHERE = 0, MELODEVO_ORACLE_HIDDEN_TARGET = 1 } melodevo_oracle;

typedef struct melodevo_synthetic_options {
    melodevo_oracle oracle;
    size_t dims;
    size_t population_size;
    size_t generations;
    double F;
    double Cr;
    uint64_t seed;
} melodevo_synthetic_options;

MELODEVO_API melodevo_synthetic_options melodevo_synthetic_defaults(void);

/*
 * Runs to completion. `report` receives the text convergence report;
 * `best_midi` (may be NULL) receives the best genome rendered as an SMF,
 * which requires dims to be a multiple of 3.
 */
MELODEVO_API melodevo_status melodevo_evolve_synthetic(const melodevo_synthetic_options* options,
                                                       melodevo_buffer* report, melodevo_buffer* best_midi);

/* ---- HTTP service ------------------------------------------------------ */

/* data_dir / static_dir may be NULL. */
MELODEVO_API melodevo_status melodevo_server_create(const char* data_dir, const char* static_dir,
                                                    melodevo_server** out);
/* Blocks until melodevo_server_stop is called from another thread. */
MELODEVO_API melodevo_status melodevo_server_listen(melodevo_server* server, const char* host, int port);
MELODEVO_API void melodevo_server_stop(melodevo_server* server);
MELODEVO_API void melodevo_server_free(melodevo_server* server);

#ifdef __cplusplus
}
#endif

#endif /* MELODEVO_MELODEVO_H */
