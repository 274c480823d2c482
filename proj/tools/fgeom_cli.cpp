#include "fgeom/fgeom.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Common {
    int q = 3;
    int threads = 1;
    std::uint64_t seed = 1;
    std::string cache_dir;
    std::string report;
    bool quiet = false;
};

// Adds the options every subcommand accepts.
void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--q", c.q, "field order, an odd prime")->required();
    sub->add_option("--threads", c.threads, "worker threads (default: FGEOM_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "seed for sampled checks");
    sub->add_option("--cache-dir", c.cache_dir, "directory for cached geometry fixtures");
    sub->add_option("--report", c.report, "write the JSON report here instead of stdout");
    sub->add_flag("--quiet", c.quiet, "no summary line on stderr");
}

int run_pipeline(const std::string& pipeline, const Common& c, nlohmann::json opts)
{
    opts["q"] = c.q;
    opts["threads"] = c.threads;
    opts["seed"] = c.seed;
    if (!c.cache_dir.empty())
        opts["cache_dir"] = c.cache_dir;

    fgeom_context* ctx = nullptr;
    if (fgeom_context_new(&ctx) != FGEOM_OK) {
        std::cerr << "error: " << fgeom_last_error() << "\n";
        return kExitFailed;
    }
    char* report = nullptr;
    int passed = 0;
    const fgeom_status st = fgeom_run(ctx, pipeline.c_str(), opts.dump().c_str(), &report, &passed);
    const std::string error = fgeom_last_error();
    fgeom_context_free(ctx);

    if (!report) {
        std::cerr << "error (" << fgeom_status_string(st) << "): " << error << "\n";
        return st == FGEOM_INVALID_ARGUMENT || st == FGEOM_UNSUPPORTED_Q ? kExitUsage : kExitFailed;
    }
    const std::string text = report;
    fgeom_string_free(report);
    if (c.report.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(c.report, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) {
            std::cerr << "error: cannot write " << c.report << "\n";
            return kExitFailed;
        }
    }
    if (!c.quiet) {
        const auto j = nlohmann::json::parse(text);
        int total = 0, ok = 0;
        for (const auto& chk : j["checks"]) {
            ++total;
            ok += chk["passed"].get<bool>();
            if (!chk["passed"].get<bool>())
                std::cerr << "  FAILED " << chk["id"].get<std::string>() << ": " << chk["detail"].get<std::string>()
                          << "\n";
        }
        std::cerr << pipeline << " q=" << c.q << ": " << (passed ? "passed" : fgeom_status_string(st)) << " (" << ok
                  << "/" << total << " checks)\n";
    }
    return passed ? kExitOk : kExitFailed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite geometry verification and pseudo-oval search"};
    app.require_subcommand(1);
    app.set_version_flag("--version", fgeom_version());

    Common c;
    c.threads = fgeom_default_threads();
    nlohmann::json opts = nlohmann::json::object();
    std::string pipeline;

    bool exhaustive = false;
    int samples = 200;
    std::string base = "point";
    std::string in, out, checkpoint;
    int uset = -1, flag = -1, random = 0;
    bool all = false, symmetry = false;
    double timeout = 0;

    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, const std::string& id) {
        auto* s = parent->add_subcommand(name, help);
        add_common(s, c);
        s->callback([&pipeline, id] { pipeline = id; });
        return s;
    };

    auto* scheme = app.add_subcommand("scheme", "five-class association scheme")->require_subcommand(1);
    auto* sv = leaf(scheme, "verify", "valencies, intersection numbers and Bose-Mesner identities", "scheme.verify");
    auto* mode = sv->add_option_group("mode");
    mode->add_flag("--exhaustive", exhaustive, "every ordered pair");
    mode->add_option("--samples", samples, "seeded pairs per class")->check(CLI::NonNegativeNumber);
    mode->require_option(0, 1);
    sv->add_option("--base", base, "scheme on points or on lines")->check(CLI::IsMember({"point", "line"}));
    leaf(scheme, "eigen", "eigenmatrices and multiplicities as exact rationals", "scheme.eigen");
    leaf(scheme, "quotient", "quotient graph and the Dickson-matrix map", "scheme.quotient");

    auto* klein = app.add_subcommand("klein", "Klein correspondence")->require_subcommand(1);
    auto* ki = leaf(klein, "intertwine", "relation ids of point and line schemes under rho", "klein.intertwine");
    ki->add_flag("--exhaustive", exhaustive, "every ordered pair");
    ki->add_option("--samples", samples, "seeded pairs (times six)")->check(CLI::NonNegativeNumber);
    auto* kp = leaf(klein, "perspective", "three perspective tests on random and standard triples",
                    "klein.perspective");
    kp->add_option("--samples", samples, "number of random spanning triples")->check(CLI::NonNegativeNumber);

    auto* conic = app.add_subcommand("pseudoconic", "pseudo-conic from the special set")->require_subcommand(1);
    leaf(conic, "build", "construct and verify; optionally write it", "pseudoconic.build")
        ->add_option("--out", out, "output file");
    leaf(conic, "verify", "verify a written pseudo-conic", "pseudoconic.verify")
        ->add_option("--in", in, "input file")
        ->required();

    auto* us = app.add_subcommand("usets", "U-set configurations on the base line")->require_subcommand(1);
    auto* ue = leaf(us, "enumerate", "counts and optional dump", "usets.enumerate");
    ue->add_option("--flag", flag, "index of the flag point on the base line")->check(CLI::NonNegativeNumber);
    ue->add_option("--out", out, "write the U-sets as JSON");
    auto* uv = leaf(us, "verify", "vector identities, sigma criterion and spectral suite", "usets.verify");
    uv->add_flag("--exhaustive", exhaustive, "no sampling at q > 3");
    uv->add_option("--samples", samples, "sample size at q > 3")->check(CLI::NonNegativeNumber);
    uv->add_option("--flag", flag, "restrict to one flag")->check(CLI::NonNegativeNumber);

    auto* se = app.add_subcommand("search", "feasibility search for x M = 2y")->require_subcommand(1);
    auto* sc = leaf(se, "classify", "enumerate every solution and verify it", "search.classify");
    sc->add_option("--timeout", timeout, "seconds, 0 for none")->check(CLI::NonNegativeNumber);
    auto* su = leaf(se, "uset-feasibility", "add sum over U of x = 1 and prove infeasibility",
                    "search.uset-feasibility");
    auto* which = su->add_option_group("selection");
    which->add_option("--uset", uset, "index of one U-set")->check(CLI::NonNegativeNumber);
    which->add_flag("--all", all, "every U-set on the base line");
    which->add_option("--random", random, "this many seeded random U-sets")->check(CLI::PositiveNumber);
    which->require_option(1);
    su->add_option("--timeout", timeout, "seconds per U-set, 0 for none")->check(CLI::NonNegativeNumber);
    su->add_flag("--symmetry", symmetry, "branch on one line per orbit of the U-set stabilizer");
    su->add_option("--checkpoint", checkpoint, "resumable progress file");

    auto* ex = app.add_subcommand("export", "model export")->require_subcommand(1);
    auto* lp = leaf(ex, "lp", "CPLEX LP file of the model", "export.lp");
    lp->add_option("--out", out, "output file")->required();
    lp->add_option("--uset", uset, "add the constraint of this U-set")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    opts["exhaustive"] = exhaustive;
    opts["samples"] = samples;
    opts["base"] = base;
    opts["timeout"] = timeout;
    opts["symmetry"] = symmetry;
    opts["all"] = all;
    opts["random"] = random;
    opts["uset"] = uset;
    opts["flag"] = flag;
    if (!in.empty())
        opts["in"] = in;
    if (!out.empty())
        opts["out"] = out;
    if (!checkpoint.empty())
        opts["checkpoint"] = checkpoint;
    return run_pipeline(pipeline, c, opts);
}
