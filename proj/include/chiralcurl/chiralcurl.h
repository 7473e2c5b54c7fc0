/*
 * Copyright 2026 The chiralcurl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CHIRALCURL_H
#define CHIRALCURL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CC_API __declspec(dllexport)
#else
#define CC_API __attribute__((visibility("default")))
#endif

typedef enum cc_status {
    CC_OK = 0,
    CC_INVARIANT_FAILURE = 1,
    CC_CONFIG_ERROR = 2,
    CC_RESOURCE_CAP = 3,
    CC_INVALID_ARGUMENT = 4,
    CC_INTERNAL_ERROR = 5
} cc_status;

typedef struct cc_config cc_config;
typedef struct cc_problem cc_problem;

CC_API const char* cc_version(void);

/* Message of the most recent failure on the calling thread, or "" */
CC_API const char* cc_last_error(void);

CC_API cc_status cc_config_load(const char* path, cc_config** out);
CC_API cc_status cc_config_parse(const char* text, cc_config** out);
CC_API void cc_config_free(cc_config* cfg);
CC_API cc_status cc_config_set_threads(cc_config* cfg, int threads);
CC_API const char* cc_config_output_dir(const cc_config* cfg);

/* Writes 16 hex digits and a terminating NUL; buf must hold 17 bytes */
CC_API cc_status cc_config_hash(const cc_config* cfg, char* buf, size_t size);

CC_API cc_status cc_problem_create(const cc_config* cfg, cc_problem** out);
CC_API void cc_problem_free(cc_problem* p);
CC_API int cc_problem_size(const cc_problem* p);
CC_API int cc_problem_inside_nodes(const cc_problem* p);
CC_API double cc_problem_gamma_star(const cc_problem* p);

/*
 * Runs "verify", "sweep", "analyze" or "nfgep". out_dir may be NULL to use the
 * config's output_dir. On return *report (if report is not NULL) holds a JSON
 * summary that the caller releases with cc_string_free.
 */
CC_API cc_status cc_run(const cc_config* cfg, const char* command, const char* out_dir, char** report);
CC_API void cc_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
