#include "fgeom/pipelines.hpp"

#include "fgeom/context.hpp"
#include "fgeom/oval.hpp"
#include "fgeom/scheme.hpp"
#include "fgeom/search.hpp"
#include "fgeom/symmetry.hpp"
#include "fgeom/usets.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace fgeom::pipe {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

Options Options::from_json(const json& j)
{
    Options o;
    if (j.is_null())
        return o;
    if (!j.is_object())
        throw PipelineError(ErrorKind::InvalidArgument, "options must be a JSON object");
    static const std::set<std::string> known = {"q",       "threads", "seed",       "exhaustive", "samples",
                                                "timeout", "in",      "out",        "cache_dir",  "checkpoint",
                                                "uset",    "all",     "random",     "flag",       "symmetry",
                                                "base"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw PipelineError(ErrorKind::InvalidArgument, "unknown option '" + it.key() + "'");
    try {
        o.q = j.value("q", o.q);
        o.threads = j.value("threads", o.threads);
        o.seed = j.value("seed", o.seed);
        o.exhaustive = j.value("exhaustive", o.exhaustive);
        o.samples = j.value("samples", o.samples);
        o.timeout = j.value("timeout", o.timeout);
        o.in = j.value("in", o.in);
        o.out = j.value("out", o.out);
        o.cache_dir = j.value("cache_dir", o.cache_dir);
        o.checkpoint = j.value("checkpoint", o.checkpoint);
        o.uset = j.value("uset", o.uset);
        o.all = j.value("all", o.all);
        o.random = j.value("random", o.random);
        o.flag = j.value("flag", o.flag);
        o.symmetry = j.value("symmetry", o.symmetry);
        o.base = j.value("base", o.base);
    } catch (const json::exception& e) {
        throw PipelineError(ErrorKind::InvalidArgument, std::string("bad option type: ") + e.what());
    }
    if (o.threads < 1 || o.samples < 0 || o.timeout < 0 || o.random < 0)
        throw PipelineError(ErrorKind::InvalidArgument, "threads must be positive; samples, timeout, random >= 0");
    if (o.base != "point" && o.base != "line")
        throw PipelineError(ErrorKind::InvalidArgument, "base must be 'point' or 'line'");
    return o;
}

const std::vector<std::string>& pipeline_names()
{
    static const std::vector<std::string> names = {
        "scheme.verify",     "scheme.eigen",   "scheme.quotient", "klein.intertwine",
        "klein.perspective", "pseudoconic.build", "pseudoconic.verify", "usets.enumerate",
        "usets.verify",      "search.classify", "search.uset-feasibility", "export.lp"};
    return names;
}

int max_q(const std::string& pipeline)
{
    if (pipeline.rfind("scheme.", 0) == 0 || pipeline.rfind("klein.", 0) == 0 || pipeline.rfind("usets.", 0) == 0)
        return 5;
    return 7;
}

namespace {

std::string fq2_key(const gf::Field& F, gf::Fq2 x)
{
    return std::to_string(F.c0(x).v) + "." + std::to_string(F.c1(x).v);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw PipelineError(ErrorKind::Io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    const fs::path p(path);
    std::error_code ec;
    if (p.has_parent_path())
        fs::create_directories(p.parent_path(), ec);
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw PipelineError(ErrorKind::Io, "cannot write " + path);
        out << text;
        if (!out)
            throw PipelineError(ErrorKind::Io, "write failed for " + path);
    }
    fs::rename(tmp, p, ec);
    if (ec)
        throw PipelineError(ErrorKind::Io, "cannot write " + path + ": " + ec.message());
}

std::string rat(const cf::Rational& r)
{
    if (r.denominator() == 1)
        return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

template <class Arr>
ordered_json arr(const Arr& a)
{
    auto j = ordered_json::array();
    for (const auto& x : a)
        j.push_back(x);
    return j;
}

class Checks {
public:
    void add(const std::string& id, const std::string& claim, bool passed, const std::string& detail = "")
    {
        ordered_json c;
        c["id"] = id;
        c["claim"] = claim;
        c["passed"] = passed;
        c["detail"] = detail;
        list_.push_back(std::move(c));
        ok_ = ok_ && passed;
    }
    void add(const scheme::Check& c) { add(c.id, c.claim, c.passed, c.detail); }
    bool ok() const { return ok_; }
    ordered_json take() { return std::move(list_); }

private:
    ordered_json list_ = ordered_json::array();
    bool ok_ = true;
};

struct Run {
    const Options& opt;
    const Context& ctx;
    Checks checks;
    ordered_json results = ordered_json::object();
    ordered_json timing = ordered_json::object();
};

long long ipow(long long b, int e)
{
    long long r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

std::string join(const std::vector<long long>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

scheme::Scheme build_scheme(const Context& ctx, const Options& opt)
{
    return opt.base == "point" ? scheme::Scheme::point_scheme(ctx, opt.threads)
                               : scheme::Scheme::line_scheme(ctx, scheme::Route::Transport, opt.threads);
}

// ---------------------------------------------------------------- scheme

void scheme_verify(Run& r)
{
    const int q = r.ctx.q();
    const auto X = build_scheme(r.ctx, r.opt);
    bool regular = false;
    const auto val = X.valencies(&regular);
    const auto want = cf::valencies(q);
    r.results["base"] = r.opt.base;
    r.results["vertices"] = X.size();
    r.results["valencies"] = arr(val);
    r.checks.add("scheme.size", "the scheme has q^5 vertices", X.size() == ipow(q, 5), std::to_string(X.size()));
    r.checks.add("scheme.valencies", "every vertex has valencies eta_0..eta_5 of the closed form",
                 regular && val == want, "computed (" + join({val.begin(), val.end()}) + ")");

    const auto in = scheme::intersection_numbers(X, r.opt.exhaustive, r.opt.samples, r.opt.seed);
    r.results["intersection"] = {{"mode", r.opt.exhaustive ? "exhaustive" : "sampled"},
                                 {"pairs_checked", in.pairs_checked},
                                 {"pairs_per_class", arr(in.pairs_per_class)},
                                 {"deviations", arr(in.deviations)}};
    std::vector<ordered_json> mats;
    for (int i = 1; i < 6; ++i) {
        auto m = ordered_json::array();
        for (int k = 0; k < 6; ++k) {
            auto row = ordered_json::array();
            for (int j = 0; j < 6; ++j)
                row.push_back(in.computed[i][k][j]);
            m.push_back(row);
        }
        mats.push_back(m);
    }
    r.results["intersection"]["L"] = mats;
    r.checks.add("scheme.well_defined", "p^k_ij is the same for every pair in class k", in.well_defined,
                 std::to_string(in.pairs_checked) + " pairs");
    r.checks.add("scheme.intersection_matrices", "L_1..L_5 equal the closed-form intersection matrices",
                 in.matches_closed_form, in.deviations.empty() ? "" : in.deviations.front());

    for (const auto& c : scheme::eigen_closed_form_checks(q))
        r.checks.add(c);
    if (q == 3) {
        for (const auto& c : scheme::bose_mesner_dense(X))
            r.checks.add(c);
        r.results["bose_mesner"] = "dense exact products";
    } else if (r.opt.exhaustive) {
        for (const auto& c : scheme::bose_mesner_from_structure(X, in))
            r.checks.add(c);
        r.results["bose_mesner"] = "exhaustive structure constants and the closed-form algebra";
    } else {
        for (const auto& c : scheme::bose_mesner_probabilistic(X, 8, r.opt.seed))
            r.checks.add(c);
        r.results["bose_mesner"] = "exact products on 8 seeded integer vectors";
    }
}

void scheme_eigen(Run& r)
{
    const int q = r.ctx.q();
    for (const auto& c : scheme::eigen_closed_form_checks(q))
        r.checks.add(c);
    auto mat = [](const cf::RatMat6& M) {
        auto j = ordered_json::array();
        for (const auto& row : M) {
            auto jr = ordered_json::array();
            for (const auto& x : row)
                jr.push_back(rat(x));
            j.push_back(jr);
        }
        return j;
    };
    r.results["P"] = mat(cf::first_eigenmatrix(q));
    r.results["Q"] = mat(cf::second_eigenmatrix(q));
    r.results["multiplicities"] = arr(cf::multiplicities(q));
    r.results["valencies"] = arr(cf::valencies(q));
}

void scheme_quotient(Run& r)
{
    const auto XP = scheme::Scheme::point_scheme(r.ctx, r.opt.threads);
    const auto res = scheme::quotient_scheme(r.ctx, XP);
    const auto want = cf::quotient_srg(r.ctx.q());
    r.results["parameters"] = arr(res.params);
    r.results["expected"] = arr(want);
    r.results["pairs_checked"] = res.pairs_checked;
    r.checks.add("quotient.fibers", "R_0 u R_2 classes are the hyperbolic lines through P minus P", res.fibers_ok);
    r.checks.add("quotient.srg", "the quotient graph is strongly regular with (q^4, (q^2-1)(q+1), 2q^2-q-2, q(q+1))",
                 res.strongly_regular && res.params == want, "(" + join({res.params.begin(), res.params.end()}) + ")");
    r.checks.add("quotient.phi_bijective", "phi is a bijection onto the 2x2 Dickson matrices", res.phi_bijective);
    const long long v = want[0];
    r.checks.add("quotient.phi_adjacency",
                 "adjacent classes go to Dickson matrices whose difference has rank 1, over all ordered pairs",
                 res.adjacency_mismatches == 0 && res.pairs_checked == v * (v - 1),
                 std::to_string(res.adjacency_mismatches) + " mismatches in " + std::to_string(res.pairs_checked));
    r.checks.add("quotient.trace", "adjacency equals Tr h(x, y) = 0 on class representatives",
                 res.trace_mismatches == 0, std::to_string(res.trace_mismatches) + " mismatches");
}

// ---------------------------------------------------------------- klein

void klein_intertwine(Run& r)
{
    const auto& T = r.ctx.tables();
    const auto& K = r.ctx.klein();
    const int l = r.ctx.base_line();
    const auto XP = scheme::Scheme::point_scheme(r.ctx, r.opt.threads);
    const int n = XP.size();

    std::vector<int> image(n);
    for (int i = 0; i < n; ++i)
        image[i] = K.rho_point(XP.vertex(i));
    auto sorted = image;
    std::sort(sorted.begin(), sorted.end());
    r.checks.add("rho.vertices", "rho maps the points not collinear with P onto the generators disjoint from l",
                 sorted == T.disjoint_from(l));

    std::vector<std::pair<int, int>> pairs;
    if (r.opt.exhaustive) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                pairs.emplace_back(a, b);
    } else {
        std::mt19937_64 rng(r.opt.seed);
        for (int k = 0; k < 6 * r.opt.samples; ++k)
            pairs.emplace_back(static_cast<int>(rng() % n), static_cast<int>(rng() % n));
    }
    std::vector<long long> per_class(6, 0);
    long long mismatches = 0;
    std::string first;
    for (auto [a, b] : pairs) {
        const int rp = XP.rel(a, b);
        const int rl = scheme::classify_line_pair(T, l, image[a], image[b]);
        ++per_class[rp];
        if (rp != rl) {
            if (!mismatches)
                first = "points " + std::to_string(XP.vertex(a)) + "," + std::to_string(XP.vertex(b)) + ": " +
                        std::to_string(rp) + " vs " + std::to_string(rl);
            ++mismatches;
        }
    }
    r.results["pairs"] = pairs.size();
    r.results["mode"] = r.opt.exhaustive ? "exhaustive" : "sampled";
    r.results["pairs_per_class"] = per_class;
    r.results["mismatches"] = mismatches;
    r.checks.add("rho.relations", "relation ids of X_P and X_l agree under rho", mismatches == 0,
                 std::to_string(pairs.size()) + " ordered pairs" + (first.empty() ? "" : "; first " + first));
}

void klein_perspective(Run& r)
{
    const auto& T = r.ctx.tables();
    const auto& F = r.ctx.field();
    const auto& K = r.ctx.klein();
    const auto& Q = T.form();
    const int N = T.num_generators();

    // seeded random spanning triples: geometric vs z-based
    std::mt19937_64 rng(r.opt.seed);
    long long agree = 0, disagree = 0, perspective = 0, degenerate = 0, attempts = 0;
    const long long want = std::max(1, r.opt.samples);
    while (agree + disagree < want && attempts < 10000 * want) {
        ++attempts;
        const int a = static_cast<int>(rng() % N), b = static_cast<int>(rng() % N), c = static_cast<int>(rng() % N);
        if (a == b || b == c || a == c || T.concurrent(a, b) || T.concurrent(b, c) || T.concurrent(a, c))
            continue;
        klein::Perspectivity g;
        try {
            g = klein::perspective_classify(Q, T.generator(a), T.generator(b), T.generator(c));
        } catch (const klein::DegenerateConfiguration&) {
            ++degenerate;
            continue;
        }
        if (g == klein::Perspectivity::NotSpanning)
            continue;
        const bool geo = g == klein::Perspectivity::Perspective;
        perspective += geo;
        (geo == klein::perspective_fast(K, a, b, c) ? agree : disagree) += 1;
    }
    r.results["random"] = {{"triples", agree + disagree},
                           {"perspective", perspective},
                           {"disagreements", disagree},
                           {"degenerate_skipped", degenerate}};
    r.checks.add("perspective.random", "geometric and z-based tests agree on seeded random spanning triples",
                 disagree == 0 && agree == want,
                 std::to_string(agree) + " agreements, " + std::to_string(disagree) + " disagreements");

    // standard position: l = L(I,0,0), m = L(0,0,I), all spanning n
    const klein::GenLine lstd{gf::identity(F), gf::zero_poly(), gf::zero_poly()};
    const klein::GenLine mstd{gf::zero_poly(), gf::zero_poly(), gf::identity(F)};
    const int l = T.generator_id(klein::line_space(F, lstd));
    const int m = T.generator_id(klein::line_space(F, mstd));
    long long fixtures = 0, bad = 0, fix_persp = 0;
    for (int n = 0; n < N; ++n) {
        if (n == l || n == m || T.concurrent(n, l) || T.concurrent(n, m))
            continue;
        klein::Perspectivity g;
        try {
            g = klein::perspective_classify(Q, T.generator(l), T.generator(m), T.generator(n));
        } catch (const klein::DegenerateConfiguration&) {
            continue;
        }
        if (g == klein::Perspectivity::NotSpanning)
            continue;
        ++fixtures;
        const bool geo = g == klein::Perspectivity::Perspective;
        const bool alg = klein::perspective_algebraic(F, klein::genline_from_space(F, T.generator(n)));
        const bool z = klein::perspective_fast(K, l, m, n);
        fix_persp += geo;
        if (geo != alg || geo != z)
            ++bad;
    }
    r.results["standard_position"] = {{"triples", fixtures}, {"perspective", fix_persp}, {"disagreements", bad}};
    r.checks.add("perspective.standard_position",
                 "for L(I,0,0), L(0,0,I) and every spanning n the algebraic, geometric and z-based tests agree",
                 bad == 0 && fixtures > 0 && l >= 0 && m >= 0, std::to_string(fixtures) + " triples");
}

// ---------------------------------------------------------------- pseudo-conic

struct ConicFile {
    herm::SpecialSet special;
    std::vector<int> generators;
    bool has_generators = false;
};

void conic_checks(Run& r, const herm::SpecialSet& special, const std::vector<int>* given)
{
    const int q = r.ctx.q();
    const auto& F = r.ctx.field();
    const auto& H = r.ctx.surface();
    const auto& T = r.ctx.tables();
    const auto sr = herm::validate_special_set(H, special);
    r.checks.add("special.size", "the special set has q^2+1 points", sr.sizes_ok,
                 std::to_string(special.points.size()) + " points");
    r.checks.add("special.on_surface", "every point lies on H(3,q^2)", sr.on_surface);
    r.checks.add("special.non_collinear", "the points are pairwise non-collinear", sr.pairwise_noncollinear);
    r.checks.add("special.zero_or_two", "every other point is orthogonal to 0 or 2 of them", sr.passed,
                 std::to_string(sr.violations.size()) + " violations");
    const bool e = sr.on_surface && sr.sizes_ok && herm::all_triples_e(F, special);
    r.checks.add("special.z_e", "z = e on every triple", e);

    std::vector<int> rho;
    bool rho_ok = sr.on_surface;
    if (rho_ok)
        rho = oval::pseudo_conic(r.ctx, special);
    std::vector<int> S = rho;
    if (given) {
        S = *given;
        bool in_range = std::all_of(S.begin(), S.end(), [&](int g) { return g >= 0 && g < T.num_generators(); });
        auto sorted = S;
        std::sort(sorted.begin(), sorted.end());
        r.checks.add("conic.rho_image", "the listed generators are the rho-images of the listed points",
                     in_range && rho_ok && sorted == rho);
        if (!in_range) {
            r.checks.add("conic.generators", "generator ids are valid", false);
            return;
        }
    }
    r.results["generators"] = S;
    const bool has_l = std::find(S.begin(), S.end(), r.ctx.base_line()) != S.end();
    r.checks.add("conic.contains_l", "the set contains l = rho(P)", has_l);
    oval::OvalReport o;
    try {
        o = oval::verify(r.ctx, S, true);
    } catch (const std::invalid_argument& ex) {
        r.checks.add("conic.distinct", "the generators are distinct", false, ex.what());
        return;
    }
    r.results["hyperplane_histogram"] = o.hyperplane_hist;
    r.checks.add("conic.size", "q^2+1 generators", o.size_ok, std::to_string(o.size));
    r.checks.add("conic.zero_or_two", "every non-degenerate hyperplane holds 0 or 2 members", o.zero_or_two);
    r.checks.add("conic.any_three_span", "any three members span the whole space", o.any_three_span,
                 std::to_string(o.non_spanning) + " non-spanning triples");
    r.checks.add("conic.tests_agree", "the two pseudo-oval tests agree", o.tests_agree);
    r.checks.add("conic.perspective", "every triple is in perspective", o.any_three_span && o.non_perspective == 0,
                 std::to_string(o.non_perspective) + " non-perspective triples");
    r.checks.add("conic.clique", "S minus m is a {0,5}-clique of X_m for every m", o.any_three_span && o.clique_bad == 0,
                 std::to_string(o.clique_bad) + " bad pairs");

    if (!has_l)
        return;
    // inner distribution of S' = S minus l in X_l, from the pair relations
    std::vector<int> Sp;
    for (int g : S)
        if (g != r.ctx.base_line())
            Sp.push_back(g);
    std::array<long long, 6> counts{};
    for (int a : Sp)
        for (int b : Sp)
            ++counts[scheme::classify_line_pair(T, r.ctx.base_line(), a, b)];
    scheme::Distribution a;
    for (int i = 0; i < 6; ++i)
        a[i] = cf::Rational(counts[i], static_cast<long long>(Sp.size()));
    const auto b = scheme::macwilliams(q, a);
    std::vector<std::string> as, bs;
    for (int i = 0; i < 6; ++i) {
        as.push_back(rat(a[i]));
        bs.push_back(rat(b[i]));
    }
    r.results["inner_distribution"] = as;
    r.results["macwilliams"] = bs;
    const scheme::Distribution want_a{1, 0, 0, 0, 0, q * q - 1};
    const auto ct = cf::conic_transform(q);
    bool mw = true;
    for (int i = 0; i < 6; ++i)
        mw = mw && b[i] == cf::Rational(ct[i]);
    r.checks.add("conic.inner_distribution", "inner distribution of S minus l is (1,0,0,0,0,q^2-1)", a == want_a);
    r.checks.add("conic.macwilliams", "MacWilliams transform equals the closed form at x = 0", mw,
                 "expected (" + join({ct.begin(), ct.end()}) + ")");
}

void pseudoconic_build(Run& r)
{
    const auto special = herm::build_special_set(r.ctx.field());
    conic_checks(r, special, nullptr);
    if (!r.opt.out.empty()) {
        ordered_json f;
        f["format"] = "fgeom-pseudoconic";
        f["q"] = r.ctx.q();
        f["points"] = ordered_json::parse(herm::special_set_to_json(r.ctx.field(), special));
        f["generators"] = r.results["generators"];
        write_file(r.opt.out, f.dump(1) + "\n");
        r.results["written"] = r.opt.out;
    }
}

void pseudoconic_verify(Run& r)
{
    if (r.opt.in.empty())
        throw PipelineError(ErrorKind::InvalidArgument, "pseudoconic.verify needs an input file");
    const std::string text = read_file(r.opt.in);
    json f;
    try {
        f = json::parse(text);
    } catch (const json::exception& e) {
        throw PipelineError(ErrorKind::Parse, std::string("input is not JSON: ") + e.what());
    }
    if (!f.is_object() || f.value("format", "") != "fgeom-pseudoconic" || !f.contains("points"))
        throw PipelineError(ErrorKind::Parse, "input is not a pseudo-conic file");
    if (f.value("q", -1) != r.ctx.q())
        throw PipelineError(ErrorKind::InvalidArgument, "file was written for a different q");
    herm::SpecialSet special;
    try {
        special = herm::special_set_from_json(r.ctx.field(), f["points"].dump());
    } catch (const std::exception& e) {
        throw PipelineError(ErrorKind::Parse, e.what());
    }
    std::vector<int> gens;
    if (f.contains("generators")) {
        try {
            gens = f["generators"].get<std::vector<int>>();
        } catch (const json::exception& e) {
            throw PipelineError(ErrorKind::Parse, std::string("bad generator list: ") + e.what());
        }
        conic_checks(r, special, &gens);
    } else {
        conic_checks(r, special, nullptr);
    }
}

// ---------------------------------------------------------------- U-sets

std::vector<usets::USet> base_usets(const Context& ctx, const Options& opt)
{
    const auto& T = ctx.tables();
    const int l = ctx.base_line();
    if (opt.flag < 0)
        return usets::usets_on_line(T, l, opt.threads);
    const auto pts = T.generator_points(l);
    if (opt.flag >= static_cast<int>(pts.size()))
        throw PipelineError(ErrorKind::InvalidArgument, "flag index must be below q+1");
    return usets::usets_on_flag(T, {pts[opt.flag], l}, opt.threads);
}

void usets_enumerate(Run& r)
{
    const long long q = r.ctx.q();
    const auto all = base_usets(r.ctx, r.opt);
    const auto X = scheme::Scheme::line_scheme(r.ctx, scheme::Route::Transport, r.opt.threads);
    const auto s = usets::summarize(X, all);
    const long long per_flag = q * q * q * (q - 1) * (q + 1) / 2;
    const long long per_line = (q + 1) * per_flag;
    r.results["per_flag"] = s.per_flag;
    r.results["total"] = s.per_line;
    r.results["distinct_signed_vectors"] = s.distinct_signed;
    r.results["membership"] = {s.membership_min, s.membership_max};
    r.checks.add("usets.per_flag", "q^3(q-1)(q+1)/2 U-sets on each flag",
                 std::all_of(s.per_flag.begin(), s.per_flag.end(), [&](long long c) { return c == per_flag; }),
                 join(s.per_flag));
    if (r.opt.flag < 0) {
        r.checks.add("usets.per_line", "(q+1)/2 q^3 (q^2-1) U-sets on the line", s.per_line == per_line,
                     std::to_string(s.per_line));
        r.checks.add("usets.distinct", "q^3(q-1)(q+1)^2 distinct signed vectors",
                     s.distinct_signed == per_line * 2 && s.distinct_signed == 2 * per_flag * (q + 1),
                     std::to_string(s.distinct_signed));
        r.checks.add("usets.membership", "each generator disjoint from l lies in (q+1)(q^2-1) U-sets",
                     s.membership_min == (q + 1) * (q * q - 1) && s.membership_max == s.membership_min,
                     std::to_string(s.membership_min) + ".." + std::to_string(s.membership_max));
    }
    if (!r.opt.out.empty()) {
        std::string text = "[\n";
        for (std::size_t i = 0; i < all.size(); ++i)
            text += usets::uset_to_json(all[i]) + (i + 1 < all.size() ? ",\n" : "\n");
        text += "]\n";
        write_file(r.opt.out, text);
        r.results["written"] = r.opt.out;
    }
}

void usets_verify(Run& r)
{
    const long long q = r.ctx.q();
    const auto& T = r.ctx.tables();
    const int l = r.ctx.base_line();
    const auto all = base_usets(r.ctx, r.opt);
    const auto X = scheme::Scheme::line_scheme(r.ctx, scheme::Route::Transport, r.opt.threads);

    long long lemma_bad = 0, cor_bad = 0, printed_bad = 0;
    std::string why_lemma, why_cor;
    for (const auto& u : all) {
        const auto labels = usets::classify_partition(T, X, u);
        std::string why;
        if (!usets::lemma_identities(X, u, labels, &why)) {
            if (!lemma_bad++)
                why_lemma = why;
        }
        if (!usets::corollary_identities(X, u, labels, &why)) {
            if (!cor_bad++)
                why_cor = why;
        }
        // the A_5 identity without the chi_V term, for comparison
        printed_bad += !usets::lemma_identities(X, u, labels, nullptr, true);
    }
    r.results["usets"] = all.size();
    r.results["as_printed_A5"] = {{"failing_usets", printed_bad}};
    r.checks.add("usets.lemma", "the five identities for chi_O1 A_i and chi_O2 A_i, with -chi_V in the A_5 one",
                 lemma_bad == 0, std::to_string(lemma_bad) + " failures" + (why_lemma.empty() ? "" : "; " + why_lemma));
    r.checks.add("usets.corollary", "v A_i are the stated combinations of v and chi_J1 - chi_J2", cor_bad == 0,
                 std::to_string(cor_bad) + " failures" + (why_cor.empty() ? "" : "; " + why_cor));

    for (const auto& c : usets::standard_position_checks(T))
        r.checks.add(c);

    // sigma criterion against the z-based perspective test, with flag independence
    const auto& verts = X.vertices();
    long long agree = 0, disagree = 0, undefined = 0, flag_dependent = 0, triples = 0;
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < verts.size(); ++a)
        for (std::size_t b = a + 1; b < verts.size(); ++b)
            pairs.emplace_back(verts[a], verts[b]);
    if (!r.opt.exhaustive && q > 3) {
        std::mt19937_64 rng(r.opt.seed);
        std::shuffle(pairs.begin(), pairs.end(), rng);
        pairs.resize(std::min<std::size_t>(pairs.size(), 20 * static_cast<std::size_t>(r.opt.samples)));
        std::sort(pairs.begin(), pairs.end());
    }
    const auto& F = r.ctx.field();
    for (auto [m, n] : pairs) {
        if (T.concurrent(m, n) || geom::span(F, {T.generator(l), T.generator(m), T.generator(n)}).dim() < 6)
            continue;
        ++triples;
        const bool pf = klein::perspective_fast(r.ctx.klein(), l, m, n);
        std::set<bool> seen;
        for (int B : T.generator_points(l)) {
            const auto s = usets::sigma_criterion(T, l, m, n, B);
            if (!s) {
                ++undefined;
                continue;
            }
            seen.insert(*s);
            (*s == pf ? agree : disagree) += 1;
        }
        flag_dependent += seen.size() > 1;
    }
    r.results["sigma"] = {{"mode", (r.opt.exhaustive || q == 3) ? "exhaustive" : "sampled"},
                          {"triples", triples},
                          {"agreements", agree},
                          {"disagreements", disagree},
                          {"undefined", undefined}};
    r.checks.add("usets.sigma_criterion", "perspective iff the involution of <B, m, n> swaps the cone generators",
                 disagree == 0 && agree > 0, std::to_string(agree) + " flag tests over " + std::to_string(triples) +
                                                 " triples (l, m, n)");
    r.checks.add("usets.flag_independence", "the sigma criterion gives the same answer at every point of l",
                 flag_dependent == 0, std::to_string(flag_dependent) + " triples depend on the flag");

    if (r.opt.flag >= 0)
        return;
    // spectral suite and the pseudo-conic meet counts
    auto conic = oval::pseudo_conic(r.ctx, herm::build_special_set(F));
    std::vector<int> Sp;
    for (int g : conic)
        if (g != l)
            Sp.push_back(g);
    const auto sp = usets::spectral_suite(X, all, r.opt.exhaustive || q == 3 ? 0 : r.opt.samples, q == 3, &Sp);
    r.results["spectral"] = {{"vectors", sp.vectors},
                             {"dual_checked", sp.dual_checked},
                             {"m1_plus_m5", sp.m1_plus_m5},
                             {"stacked_rank", sp.stacked_rank},
                             {"gram_pairs", arr(sp.gram_pairs)},
                             {"gram_expected", arr(sp.gram_expected)}};
    r.checks.add("usets.dual_degree", "every checked v in V_l has dual degree set {1,5}",
                 sp.dual_ok == sp.dual_checked && sp.dual_checked > 0,
                 std::to_string(sp.dual_ok) + "/" + std::to_string(sp.dual_checked));
    bool gram_ok = true;
    for (int c = 0; c < 6; ++c)
        gram_ok = gram_ok && sp.gram_bad[c] == 0 && sp.gram_pairs[c] > 0;
    r.checks.add("usets.gram", "Gram entries equal 2((q-1)(q+1)^2 I - A_1 + q A_3 - (q+1) A_5) on every pair",
                 gram_ok, "pairs per class (" + join({sp.gram_pairs.begin(), sp.gram_pairs.end()}) + ")");
    if (sp.stacked_rank >= 0)
        r.checks.add("usets.span", "V_l spans V_1 + V_5: stacked rank equals m_1 + m_5",
                     sp.stacked_rank == sp.m1_plus_m5 && sp.dual_ok == sp.dual_checked,
                     "rank " + std::to_string(sp.stacked_rank) + " (mod-p lower bound, dual degrees give the upper bound)");
    r.results["size_vs_dimension"] = {{"V_l", sp.vectors},
                                      {"m1_plus_m5", sp.m1_plus_m5},
                                      {"note", "|V_l| exceeds dim(V_1 + V_5); only the span is a dimension claim"}};
    r.checks.add("usets.design_orthogonality", "chi of the pseudo-conic minus l is orthogonal to every v in V_l",
                 sp.orthogonality_bad == 0, std::to_string(sp.orthogonality_bad) + " vectors not orthogonal");

    const auto mc = usets::uset_meet_counts(all, Sp);
    r.results["meet_counts"] = {{"histogram", mc.histogram}, {"average", rat(mc.average)}, {"sum_mu", mc.sum_mu}};
    r.checks.add("usets.meet_zero_or_two", "every U-set meets the pseudo-conic minus l in 0 or 2 lines",
                 mc.zero_or_two, join(mc.histogram));
    r.checks.add("usets.meet_average", "the average pair count equals q+1", mc.average == cf::Rational(q + 1),
                 rat(mc.average));
    r.checks.add("usets.meet_sum", "sum of the meet counts is q^2(q+1)(q^2-1)",
                 mc.sum_mu == q * q * (q + 1) * (q * q - 1), std::to_string(mc.sum_mu));
}

// ---------------------------------------------------------------- search

ordered_json solution_json(const search::Problem& P, const std::vector<int>& x)
{
    auto j = ordered_json::array();
    for (int i : x)
        j.push_back(P.rows[i]);
    return j;
}

void search_classify(Run& r)
{
    const auto& T = r.ctx.tables();
    const auto P = search::build_problem(T, r.ctx.base_line());
    search::SolveOptions so;
    so.mode = search::Mode::All;
    so.timeout = r.opt.timeout;
    so.threads = r.opt.threads;
    const auto rep = search::solve(P, &T, so);
    long long verified = 0, conics = 0;
    for (const auto& x : rep.solutions) {
        const auto v = search::verify_solution(r.ctx, P, x);
        verified += v.passed;
        conics += v.passed && v.pseudo_conic;
    }
    const long long n = static_cast<long long>(rep.solutions.size());
    r.results["rows"] = P.num_rows();
    r.results["columns"] = P.num_cols();
    r.results["status"] = search::to_string(rep.status);
    r.results["solutions"] = n;
    r.results["nodes"] = rep.nodes;
    r.timing["search_seconds"] = rep.seconds;
    r.checks.add("search.complete", "the enumeration finished", rep.status != search::Status::Timeout,
                 search::to_string(rep.status));
    r.checks.add("search.verified", "every solution passes both pseudo-oval tests", verified == n,
                 std::to_string(verified) + "/" + std::to_string(n));
    r.checks.add("search.pseudo_conics", "every solution is a pseudo-conic", conics == n && n > 0,
                 std::to_string(conics) + "/" + std::to_string(n));

    if (r.ctx.q() == 3 && rep.status != search::Status::Timeout) {
        // reduced instance: the pseudo-conic rows plus the lowest ids up to 60 rows
        const auto conic = oval::pseudo_conic(r.ctx, herm::build_special_set(r.ctx.field()));
        std::vector<int> keep;
        for (int g : conic)
            if (P.row_of(g) >= 0)
                keep.push_back(P.row_of(g));
        for (int i = 0; i < P.num_rows() && keep.size() < 60; ++i)
            if (std::find(keep.begin(), keep.end(), i) == keep.end())
                keep.push_back(i);
        std::sort(keep.begin(), keep.end());
        const auto R = search::restrict_rows(P, keep);
        const auto ref = search::reference_enumerate(R);
        const auto got = search::solve(R, &T, so);
        r.results["reduced_instance"] = {{"rows", R.num_rows()}, {"solutions", ref.size()}};
        r.checks.add("search.pruning_sound", "on a 60-row instance the solver finds exactly the plain enumeration's set",
                     got.status == search::Status::Feasible && got.solutions == ref && !ref.empty(),
                     std::to_string(got.solutions.size()) + " vs " + std::to_string(ref.size()));
    }
}

struct Checkpoint {
    std::map<int, std::string> done;
    std::map<int, std::vector<int>> branches;
    bool symmetry = false;
};

Checkpoint load_checkpoint(const std::string& path, int q, bool symmetry)
{
    Checkpoint c;
    c.symmetry = symmetry;
    if (path.empty() || !fs::exists(path))
        return c;
    json j;
    try {
        j = json::parse(read_file(path));
        if (j.at("q").get<int>() != q)
            throw PipelineError(ErrorKind::InvalidArgument, "checkpoint was written for a different q");
        if (j.at("symmetry").get<bool>() != symmetry)
            throw PipelineError(ErrorKind::InvalidArgument, "checkpoint was written with a different symmetry setting");
        for (auto& [k, v] : j.at("done").items())
            c.done[std::stoi(k)] = v.get<std::string>();
        for (auto& [k, v] : j.at("branches").items())
            c.branches[std::stoi(k)] = v.get<std::vector<int>>();
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(ErrorKind::Parse, std::string("bad checkpoint: ") + e.what());
    }
    return c;
}

void save_checkpoint(const std::string& path, int q, const Checkpoint& c)
{
    if (path.empty())
        return;
    ordered_json j;
    j["q"] = q;
    j["symmetry"] = c.symmetry;
    j["done"] = ordered_json::object();
    for (const auto& [k, v] : c.done)
        j["done"][std::to_string(k)] = v;
    j["branches"] = ordered_json::object();
    for (const auto& [k, v] : c.branches)
        j["branches"][std::to_string(k)] = v;
    write_file(path, j.dump() + "\n");
}

std::vector<int> select_usets(const Options& opt, int total)
{
    std::vector<int> ids;
    if (opt.all) {
        ids.resize(total);
        std::iota(ids.begin(), ids.end(), 0);
    } else if (opt.random > 0) {
        std::vector<int> perm(total);
        std::iota(perm.begin(), perm.end(), 0);
        std::mt19937_64 rng(opt.seed);
        for (int i = total - 1; i > 0; --i)
            std::swap(perm[i], perm[rng() % (i + 1)]);
        perm.resize(std::min(total, opt.random));
        std::sort(perm.begin(), perm.end());
        ids = perm;
    } else if (opt.uset >= 0) {
        if (opt.uset >= total)
            throw PipelineError(ErrorKind::InvalidArgument, "U-set index out of range (" + std::to_string(total) + ")");
        ids.push_back(opt.uset);
    } else {
        throw PipelineError(ErrorKind::InvalidArgument, "choose U-sets with uset, all or random");
    }
    return ids;
}

void search_uset_feasibility(Run& r)
{
    const int q = r.ctx.q();
    const auto& T = r.ctx.tables();
    const auto P = search::build_problem(T, r.ctx.base_line());
    const auto all = usets::usets_on_line(T, r.ctx.base_line(), r.opt.threads);
    const auto ids = select_usets(r.opt, static_cast<int>(all.size()));
    Checkpoint cp = load_checkpoint(r.opt.checkpoint, q, r.opt.symmetry);
    std::mutex cp_mu;

    long long infeasible = 0, feasible = 0, timeouts = 0, counterexamples_verified = 0;
    auto list = ordered_json::array();
    auto secs = ordered_json::array();
    for (int id : ids) {
        const auto& u = all[id];
        ordered_json e;
        e["id"] = id;
        e["flag_point"] = u.flag.B;
        e["pole"] = u.pole;
        e["p1"] = u.p1;
        e["p2"] = u.p2;
        if (auto it = cp.done.find(id); it != cp.done.end()) {
            e["status"] = it->second;
            e["from_checkpoint"] = true;
            (it->second == "infeasible" ? infeasible : feasible) += 1;
            list.push_back(e);
            continue;
        }
        auto Pu = P;
        Pu.sides.push_back(search::uset_constraint(P, u.O1, u.O2, "uset" + std::to_string(id)));
        search::SolveOptions so;
        so.mode = search::Mode::ProveInfeasible;
        so.timeout = r.opt.timeout;
        so.threads = r.opt.threads;
        if (r.opt.symmetry) {
            std::vector<int> U = u.O1;
            U.insert(U.end(), u.O2.begin(), u.O2.end());
            for (const auto& orb : sym::uset_orbits(r.ctx, U)) {
                so.root_orbits.emplace_back();
                for (int g : orb)
                    so.root_orbits.back().push_back(P.row_of(g));
            }
            e["orbits"] = so.root_orbits.size();
        }
        so.skip_branches = cp.branches[id];
        so.on_branch_done = [&, id](int b) {
            std::lock_guard<std::mutex> lock(cp_mu);
            cp.branches[id].push_back(b);
            save_checkpoint(r.opt.checkpoint, q, cp);
        };
        const auto rep = search::solve(Pu, &T, so);
        e["status"] = search::to_string(rep.status);
        e["root_branches"] = rep.root_branches;
        e["exhausted_branches"] = rep.exhausted_branches.size();
        e["nodes"] = rep.nodes;
        secs.push_back(rep.seconds);
        if (rep.status == search::Status::Infeasible) {
            ++infeasible;
            cp.done[id] = "infeasible";
            cp.branches.erase(id);
        } else if (rep.status == search::Status::Feasible) {
            ++feasible;
            cp.done[id] = "feasible";
            e["solution"] = solution_json(Pu, rep.solutions.front());
            counterexamples_verified += search::verify_solution(r.ctx, Pu, rep.solutions.front()).passed;
        } else {
            ++timeouts;
        }
        save_checkpoint(r.opt.checkpoint, q, cp);
        list.push_back(e);
    }
    r.results["total_usets"] = all.size();
    r.results["selected"] = ids.size();
    r.results["symmetry"] = r.opt.symmetry;
    r.results["timeout_per_uset"] = r.opt.timeout;
    r.results["infeasible"] = infeasible;
    r.results["feasible"] = feasible;
    r.results["timeouts"] = timeouts;
    r.results["usets"] = list;
    r.timing["uset_seconds"] = secs;
    r.checks.add("search.usets_infeasible",
                 "x M = 2y, sum x = q^2 with sum over U of x = 1 is infeasible for every selected U-set",
                 infeasible == static_cast<long long>(ids.size()),
                 std::to_string(infeasible) + " proven infeasible, " + std::to_string(timeouts) + " timed out, " +
                     std::to_string(feasible) + " feasible (" + std::to_string(counterexamples_verified) +
                     " verified)");
}

void export_lp(Run& r)
{
    if (r.opt.out.empty())
        throw PipelineError(ErrorKind::InvalidArgument, "export.lp needs an output path");
    const auto& T = r.ctx.tables();
    auto P = search::build_problem(T, r.ctx.base_line());
    if (r.opt.uset >= 0) {
        const auto all = usets::usets_on_line(T, r.ctx.base_line(), r.opt.threads);
        if (r.opt.uset >= static_cast<int>(all.size()))
            throw PipelineError(ErrorKind::InvalidArgument, "U-set index out of range");
        const auto& u = all[r.opt.uset];
        P.sides.push_back(search::uset_constraint(P, u.O1, u.O2, "uset" + std::to_string(r.opt.uset)));
    }
    const auto text = search::export_lp(P);
    write_file(r.opt.out, text);
    const auto m = search::parse_lp(read_file(r.opt.out));
    r.results["written"] = r.opt.out;
    r.results["binaries"] = m.binaries;
    r.results["constraints"] = m.columns.size() + 1 + m.sides.size();
    r.checks.add("lp.variables", "one binary per row and per column", m.num_x == P.num_rows() &&
                                                                          m.num_y == P.num_cols() &&
                                                                          m.binaries == P.num_rows() + P.num_cols());
    r.checks.add("lp.constraints", "one equation per column, the cardinality and each side constraint",
                 static_cast<int>(m.columns.size()) == P.num_cols() && m.cardinality == P.cardinality &&
                     m.sides.size() == P.sides.size());
    r.checks.add("lp.objective", "the objective is the constant 0", m.constant_objective);
}

} // namespace

ContextCache::ContextCache() = default;
ContextCache::~ContextCache() = default;

const Context& ContextCache::get(int q, const std::string& dir)
{
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = ctx_[q];
    if (!slot)
        slot = std::make_unique<Context>(q);
    const Context& ctx = *slot;
    if (!dir.empty()) {
        const auto& F = ctx.field();
        const std::string name = "tables-q" + std::to_string(q) + "-xi" + std::to_string(F.xi().v) + "-w" +
                                 fq2_key(F, F.generator()) + "-mu" + fq2_key(F, ctx.mu()) + "-delta" +
                                 fq2_key(F, ctx.delta()) + ".json";
        const fs::path path = fs::path(dir) / name;
        if (fs::exists(path)) {
            std::string why;
            if (!ctx.tables().matches_dump(read_file(path.string()), &why))
                throw PipelineError(ErrorKind::Io, "cached fixtures in " + path.string() + " differ: " + why);
        } else {
            write_file(path.string(), ctx.tables().dump_json(ctx.mu(), ctx.delta()));
        }
    }
    return ctx;
}

Report run(ContextCache& cache, const std::string& pipeline, const Options& opt)
{
    using Fn = void (*)(Run&);
    static const std::map<std::string, Fn> table = {
        {"scheme.verify", scheme_verify},
        {"scheme.eigen", scheme_eigen},
        {"scheme.quotient", scheme_quotient},
        {"klein.intertwine", klein_intertwine},
        {"klein.perspective", klein_perspective},
        {"pseudoconic.build", pseudoconic_build},
        {"pseudoconic.verify", pseudoconic_verify},
        {"usets.enumerate", usets_enumerate},
        {"usets.verify", usets_verify},
        {"search.classify", search_classify},
        {"search.uset-feasibility", search_uset_feasibility},
        {"export.lp", export_lp},
    };
    const auto it = table.find(pipeline);
    if (it == table.end())
        throw PipelineError(ErrorKind::InvalidArgument, "unknown pipeline '" + pipeline + "'");
    if (!gf::is_odd_prime(opt.q) || opt.q > max_q(pipeline))
        throw PipelineError(ErrorKind::UnsupportedQ, "q must be an odd prime at most " +
                                                         std::to_string(max_q(pipeline)) + " for " + pipeline);
    const auto start = Clock::now();
    const Context& ctx = cache.get(opt.q, opt.cache_dir);
    Run r{opt, ctx, Checks{}, ordered_json::object(), ordered_json::object()};
    it->second(r);

    Report rep;
    rep["q"] = opt.q;
    rep["pipeline"] = pipeline;
    rep["config"] = {{"seed", opt.seed},       {"exhaustive", opt.exhaustive}, {"samples", opt.samples},
                     {"timeout", opt.timeout}, {"symmetry", opt.symmetry},     {"base", opt.base}};
    rep["checks"] = r.checks.take();
    rep["results"] = std::move(r.results);
    rep["passed"] = r.checks.ok();
    r.timing["seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
    rep["timing"] = std::move(r.timing);
    return rep;
}

} // namespace fgeom::pipe
