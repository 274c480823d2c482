#include "fgeom/fgeom.h"

#include "fgeom/parallel.hpp"
#include "fgeom/pipelines.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct fgeom_context {
    fgeom::pipe::ContextCache cache;
};

namespace {

thread_local std::string last_error;

fgeom_status fail(fgeom_status s, const std::string& msg)
{
    last_error = msg;
    return s;
}

fgeom_status status_of(fgeom::pipe::ErrorKind k)
{
    using fgeom::pipe::ErrorKind;
    switch (k) {
    case ErrorKind::InvalidArgument:
        return FGEOM_INVALID_ARGUMENT;
    case ErrorKind::UnsupportedQ:
        return FGEOM_UNSUPPORTED_Q;
    case ErrorKind::Io:
        return FGEOM_IO;
    case ErrorKind::Parse:
        return FGEOM_PARSE;
    case ErrorKind::Timeout:
        return FGEOM_TIMEOUT;
    }
    return FGEOM_INTERNAL;
}

char* copy_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

fgeom_status fgeom_context_new(fgeom_context** out)
{
    if (!out)
        return fail(FGEOM_INVALID_ARGUMENT, "out is NULL");
    *out = new (std::nothrow) fgeom_context;
    if (!*out)
        return fail(FGEOM_INTERNAL, "out of memory");
    last_error.clear();
    return FGEOM_OK;
}

void fgeom_context_free(fgeom_context* ctx)
{
    delete ctx;
}

fgeom_status fgeom_run(fgeom_context* ctx, const char* pipeline, const char* options_json, char** report,
                       int* passed)
{
    if (report)
        *report = nullptr;
    if (passed)
        *passed = 0;
    if (!ctx || !pipeline || !report)
        return fail(FGEOM_INVALID_ARGUMENT, "context, pipeline and report must be non-NULL");
    try {
        nlohmann::json opts;
        if (options_json && *options_json) {
            try {
                opts = nlohmann::json::parse(options_json);
            } catch (const nlohmann::json::exception& e) {
                return fail(FGEOM_INVALID_ARGUMENT, std::string("options are not JSON: ") + e.what());
            }
        }
        const auto opt = fgeom::pipe::Options::from_json(opts);
        const auto rep = fgeom::pipe::run(ctx->cache, pipeline, opt);
        const bool ok = rep.at("passed").get<bool>();
        *report = copy_string(rep.dump(2) + "\n");
        if (!*report)
            return fail(FGEOM_INTERNAL, "out of memory");
        if (passed)
            *passed = ok ? 1 : 0;
        last_error.clear();
        if (ok)
            return FGEOM_OK;
        const auto& res = rep.at("results");
        if (res.contains("timeouts") && res.at("timeouts").get<long long>() > 0)
            return fail(FGEOM_TIMEOUT, "a search ran out of time");
        if (res.contains("status") && res.at("status") == "timeout")
            return fail(FGEOM_TIMEOUT, "the search ran out of time");
        return fail(FGEOM_VERIFICATION, "a check failed");
    } catch (const fgeom::pipe::PipelineError& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(FGEOM_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FGEOM_INTERNAL, e.what());
    } catch (...) {
        return fail(FGEOM_INTERNAL, "unknown error");
    }
}

void fgeom_string_free(char* s)
{
    std::free(s);
}

const char* fgeom_last_error(void)
{
    return last_error.c_str();
}

const char* fgeom_status_string(fgeom_status status)
{
    switch (status) {
    case FGEOM_OK:
        return "ok";
    case FGEOM_INVALID_ARGUMENT:
        return "invalid argument";
    case FGEOM_UNSUPPORTED_Q:
        return "unsupported q";
    case FGEOM_IO:
        return "i/o error";
    case FGEOM_PARSE:
        return "parse error";
    case FGEOM_VERIFICATION:
        return "verification failed";
    case FGEOM_INTERNAL:
        return "internal error";
    case FGEOM_TIMEOUT:
        return "timeout";
    }
    return "unknown status";
}

size_t fgeom_pipeline_count(void)
{
    return fgeom::pipe::pipeline_names().size();
}

const char* fgeom_pipeline_name(size_t index)
{
    const auto& names = fgeom::pipe::pipeline_names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

int fgeom_default_threads(void)
{
    return fgeom::default_threads();
}

const char* fgeom_version(void)
{
    return "1.0.0";
}

} // extern "C"
