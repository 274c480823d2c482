#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgeom {
class Context;
}

namespace fgeom::pipe {

enum class ErrorKind { InvalidArgument, UnsupportedQ, Io, Parse, Timeout };

class PipelineError : public std::runtime_error {
public:
    PipelineError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

/// Options shared by every pipeline; each one reads only the fields it needs.
/// Parsed from a JSON object whose keys are the field names.
struct Options {
    int q = 3;
    int threads = 1;
    std::uint64_t seed = 1;
    /// Exhaustive where a sampled mode also exists.
    bool exhaustive = false;
    int samples = 200;
    /// Per-instance wall-clock budget in seconds, 0 for none.
    double timeout = 0;
    std::string in;
    std::string out;
    std::string cache_dir;
    std::string checkpoint;
    /// Index into the U-sets of the base line, -1 for none.
    int uset = -1;
    bool all = false;
    /// Number of seeded random U-sets.
    int random = 0;
    /// Index of the flag point on the base line, -1 for every flag.
    int flag = -1;
    /// Use the U-set stabilizer to reduce root branches.
    bool symmetry = false;
    /// "point" or "line" for the scheme pipelines.
    std::string base = "point";

    static Options from_json(const nlohmann::json& j);
};

using Report = nlohmann::ordered_json;

/// Pipeline names, in the order they are listed by the CLI.
const std::vector<std::string>& pipeline_names();

/// Contexts per q, built once and shared. Thread-safe.
class ContextCache {
public:
    ContextCache();
    ~ContextCache();
    ContextCache(const ContextCache&) = delete;
    ContextCache& operator=(const ContextCache&) = delete;

    /// When `dir` is non-empty the field fixtures (q, xi, w, mu, delta) and
    /// the quadric tables are written there on first use and compared with
    /// the stored copy afterwards; a mismatch throws.
    const Context& get(int q, const std::string& dir);

private:
    std::mutex mu_;
    std::map<int, std::unique_ptr<Context>> ctx_;
};

/// Runs one pipeline. The report has the keys q, pipeline, config, checks
/// (each {id, claim, passed, detail}), results, passed and timing; timing is
/// the only part that varies between identical runs.
Report run(ContextCache& cache, const std::string& pipeline, const Options& opt);

/// Largest q accepted by a pipeline.
int max_q(const std::string& pipeline);

} // namespace fgeom::pipe
