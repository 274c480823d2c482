#ifndef FGEOM_H
#define FGEOM_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(FGEOM_BUILDING)
#    define FGEOM_API __declspec(dllexport)
#  else
#    define FGEOM_API __declspec(dllimport)
#  endif
#else
#  define FGEOM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fgeom_context fgeom_context;

typedef enum fgeom_status {
    FGEOM_OK = 0,
    FGEOM_INVALID_ARGUMENT = 1,
    FGEOM_UNSUPPORTED_Q = 2,
    FGEOM_IO = 3,
    FGEOM_PARSE = 4,
    /* the report was produced and some check failed */
    FGEOM_VERIFICATION = 5,
    FGEOM_INTERNAL = 6,
    /* the report was produced and a search ran out of time */
    FGEOM_TIMEOUT = 7
} fgeom_status;

/* A context caches the geometry of every q it has been asked about. It may
   be shared between threads. */
FGEOM_API fgeom_status fgeom_context_new(fgeom_context** out);
FGEOM_API void fgeom_context_free(fgeom_context* ctx);

/* Runs a pipeline such as "scheme.verify" with options given as a JSON
   object (NULL for defaults). On success and on FGEOM_VERIFICATION or
   FGEOM_TIMEOUT, *report receives a JSON report to be released with
   fgeom_string_free, and *passed (when non-NULL) is 1 iff every check
   passed. Otherwise *report is NULL and fgeom_last_error explains. */
FGEOM_API fgeom_status fgeom_run(fgeom_context* ctx, const char* pipeline, const char* options_json, char** report,
                                 int* passed);

FGEOM_API void fgeom_string_free(char* s);

/* Message of the last failed call on this thread; empty when none. */
FGEOM_API const char* fgeom_last_error(void);

FGEOM_API const char* fgeom_status_string(fgeom_status status);

FGEOM_API size_t fgeom_pipeline_count(void);
/* NULL when index is out of range. */
FGEOM_API const char* fgeom_pipeline_name(size_t index);

/* FGEOM_THREADS when set to a positive integer, else the hardware concurrency. */
FGEOM_API int fgeom_default_threads(void);

FGEOM_API const char* fgeom_version(void);

#ifdef __cplusplus
}
#endif

#endif
