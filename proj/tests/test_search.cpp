#include "fgeom/oval.hpp"
#include "fgeom/search.hpp"
#include "fgeom/symmetry.hpp"
#include "fgeom/usets.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace fgeom;
using namespace fgeom::search;

namespace {

const Problem& P3()
{
    static const Problem P = build_problem(fixtures::context(3).tables(), fixtures::context(3).base_line());
    return P;
}

const SearchReport& all3()
{
    static const SearchReport r = [] {
        SolveOptions so;
        so.mode = Mode::All;
        return solve(P3(), &fixtures::context(3).tables(), so);
    }();
    return r;
}

std::vector<int> conic_rows(const Context& ctx, const Problem& P)
{
    std::vector<int> x;
    for (int g : oval::pseudo_conic(ctx, herm::build_special_set(ctx.field())))
        if (P.row_of(g) >= 0)
            x.push_back(P.row_of(g));
    std::sort(x.begin(), x.end());
    return x;
}

std::vector<int> with_l(const Problem& P, const std::vector<int>& x)
{
    std::vector<int> S{P.l};
    for (int i : x)
        S.push_back(P.rows[i]);
    std::sort(S.begin(), S.end());
    return S;
}

} // namespace

TEST_CASE("model dimensions")
{
    const auto& T = fixtures::context(3).tables();
    const auto& P = P3();
    CHECK(P.num_rows() == 243);
    CHECK(P.num_cols() == 216);
    CHECK(P.cardinality == 9);
    const auto& form = T.form();
    // column j holds the rows lying in the hyperplane: check against b-hat directly
    for (int j = 0; j < P.num_cols(); j += 11) {
        std::vector<int> rows;
        for (int i = 0; i < P.num_rows(); ++i) {
            bool inside = true;
            for (const auto& b : T.generator(P.rows[i]).basis())
                inside = inside && form.bhat(T.pole(P.cols[j]), b).v == 0;
            if (inside)
                rows.push_back(i);
        }
        CHECK(P.col_rows[j] == rows);
        CHECK_FALSE(T.in_hyperplane(P.cols[j], P.l));
    }
    const auto& c5 = fixtures::context(5);
    const auto P5 = build_problem(c5.tables(), c5.base_line());
    CHECK(P5.num_rows() == 3125);
    CHECK(P5.num_cols() == 3000);
}

TEST_CASE("every solution at q = 3 is a pseudo-conic")
{
    const auto& ctx = fixtures::context(3);
    const auto& rep = all3();
    REQUIRE(rep.status == Status::Feasible);
    REQUIRE_FALSE(rep.solutions.empty());
    for (const auto& x : rep.solutions) {
        CHECK(satisfies(P3(), x));
        const auto v = verify_solution(ctx, P3(), x);
        CHECK(v.passed);
        CHECK(v.pseudo_conic);
    }
    const auto conic = conic_rows(ctx, P3());
    CHECK(std::binary_search(rep.solutions.begin(), rep.solutions.end(), conic));
}

TEST_CASE("solutions do not depend on the thread count")
{
    SolveOptions so;
    so.mode = Mode::All;
    so.threads = 3;
    const auto r = solve(P3(), &fixtures::context(3).tables(), so);
    CHECK(r.solutions == all3().solutions);
}

TEST_CASE("pruning rules keep every solution on a reduced instance")
{
    const auto& ctx = fixtures::context(3);
    std::vector<int> keep = conic_rows(ctx, P3());
    for (int i = 0; i < P3().num_rows() && keep.size() < 60; ++i)
        if (std::find(keep.begin(), keep.end(), i) == keep.end())
            keep.push_back(i);
    std::sort(keep.begin(), keep.end());
    const Problem R = restrict_rows(P3(), keep);
    CHECK(R.num_rows() == 60);
    const auto ref = reference_enumerate(R);
    REQUIRE_FALSE(ref.empty());
    for (bool span : {false, true})
        for (bool lh : {false, true}) {
            SolveOptions so;
            so.mode = Mode::All;
            so.span_pruning = span;
            so.l_hyperplanes = lh;
            const auto got = solve(R, span ? &ctx.tables() : nullptr, so);
            CHECK(got.solutions == ref);
        }
}

TEST_CASE("empty problem")
{
    Problem P;
    P.q = 3;
    SolveOptions so;
    so.mode = Mode::First;
    const auto r = solve(P, nullptr, so);
    CHECK(r.status == Status::Feasible);
    REQUIRE(r.solutions.size() == 1);
    CHECK(r.solutions[0].empty());
}

TEST_CASE("every U-set constraint makes the problem infeasible")
{
    const auto& ctx = fixtures::context(3);
    const auto& T = ctx.tables();
    const auto all = usets::usets_on_line(T, ctx.base_line());
    std::mt19937 rng(4);
    for (int t = 0; t < 12; ++t) {
        const auto& u = all[rng() % all.size()];
        Problem P = P3();
        P.sides.push_back(uset_constraint(P, u.O1, u.O2, "U"));
        SolveOptions so;
        so.mode = Mode::ProveInfeasible;
        const auto plain = solve(P, &T, so);
        CHECK(plain.status == Status::Infeasible);
        CHECK_FALSE(plain.orbits_used);

        std::vector<int> U = u.O1;
        U.insert(U.end(), u.O2.begin(), u.O2.end());
        for (const auto& orbit : sym::uset_orbits(ctx, U)) {
            std::vector<int> rows;
            for (int g : orbit)
                rows.push_back(P.row_of(g));
            so.root_orbits.push_back(rows);
        }
        const auto reduced = solve(P, &T, so);
        CHECK(reduced.status == Status::Infeasible);
        CHECK(reduced.orbits_used);
        CHECK(reduced.root_branches <= plain.root_branches);
    }
}

TEST_CASE("orbits that do not partition the root candidates are ignored")
{
    const auto& ctx = fixtures::context(3);
    const auto all = usets::usets_on_line(ctx.tables(), ctx.base_line());
    const auto& u = all.front();
    Problem P = P3();
    P.sides.push_back(uset_constraint(P, u.O1, u.O2, "U"));
    SolveOptions so;
    so.mode = Mode::ProveInfeasible;
    so.root_orbits = {{P.row_of(u.O1[0])}};
    const auto r = solve(P, &ctx.tables(), so);
    CHECK_FALSE(r.orbits_used);
    CHECK(r.status == Status::Infeasible);
}

TEST_CASE("skipped root branches resume a search")
{
    const auto& ctx = fixtures::context(3);
    const auto all = usets::usets_on_line(ctx.tables(), ctx.base_line());
    const auto& u = all[5];
    Problem P = P3();
    P.sides.push_back(uset_constraint(P, u.O1, u.O2, "U"));
    SolveOptions so;
    so.mode = Mode::ProveInfeasible;
    std::vector<int> done;
    so.on_branch_done = [&](int b) { done.push_back(b); };
    const auto first = solve(P, &ctx.tables(), so);
    REQUIRE(first.status == Status::Infeasible);
    CHECK(static_cast<int>(done.size()) == first.root_branches);

    SolveOptions resume;
    resume.mode = Mode::ProveInfeasible;
    resume.skip_branches.assign(done.begin(), done.begin() + static_cast<long>(done.size() / 2));
    const auto second = solve(P, &ctx.tables(), resume);
    CHECK(second.status == Status::Infeasible);
    CHECK(second.nodes < first.nodes);

    resume.skip_branches = done;
    const auto third = solve(P, &ctx.tables(), resume);
    CHECK(third.status == Status::Infeasible);
}

TEST_CASE("time limit")
{
    const auto& ctx = fixtures::context(5);
    const auto& T = ctx.tables();
    const Problem base = build_problem(T, ctx.base_line());
    const auto all = usets::usets_on_flag(T, usets::Flag{T.generator_points(ctx.base_line())[0], ctx.base_line()});
    Problem P = base;
    P.sides.push_back(uset_constraint(P, all[0].O1, all[0].O2, "U"));
    SolveOptions so;
    so.mode = Mode::ProveInfeasible;
    so.timeout = 0.5;
    const auto r = solve(P, &T, so);
    CHECK(r.status == Status::Timeout);
}

TEST_CASE("solution checks")
{
    const auto& ctx = fixtures::context(3);
    const auto& T = ctx.tables();
    const auto& P = P3();
    const auto x = conic_rows(ctx, P);
    const auto good = verify_solution(ctx, P, x);
    CHECK(good.passed);
    CHECK(good.spans);
    CHECK(good.zero_or_two);
    CHECK(good.pseudo_conic);

    // replace a member by a line meeting it
    const int m = P.rows[x[0]];
    const std::set<int> members(x.begin(), x.end());
    int replaced = 0;
    for (int i = 0; i < P.num_rows() && replaced < 5; ++i) {
        if (members.count(i) || !T.concurrent(P.rows[i], m))
            continue;
        auto y = x;
        y[0] = i;
        std::sort(y.begin(), y.end());
        const auto bad = verify_solution(ctx, P, y);
        CHECK_FALSE(bad.spans);
        CHECK_FALSE(bad.passed);
        CHECK_FALSE(satisfies(P, y));
        ++replaced;
    }
    CHECK(replaced == 5);
}

TEST_CASE("the two pseudo-oval tests agree")
{
    const auto& ctx = fixtures::context(3);
    const auto& P = P3();
    std::mt19937 rng(8);
    int tested = 0, positive = 0;
    for (const auto& x : all3().solutions) {
        const auto r = oval::verify(ctx, with_l(P, x), false);
        CHECK(r.tests_agree);
        CHECK(r.any_three_span);
        ++tested;
        ++positive;
        // single swaps of a member
        for (int t = 0; t < 3; ++t) {
            auto y = x;
            y[rng() % y.size()] = static_cast<int>(rng() % P.num_rows());
            std::sort(y.begin(), y.end());
            if (std::adjacent_find(y.begin(), y.end()) != y.end())
                continue;
            const auto s = oval::verify(ctx, with_l(P, y), false);
            CHECK(s.tests_agree);
            CHECK(s.any_three_span == s.zero_or_two);
            ++tested;
        }
        if (tested > 1000)
            break;
    }
    CHECK(positive > 0);
}

TEST_CASE("LP export round trip")
{
    const auto& ctx = fixtures::context(3);
    const auto all = usets::usets_on_line(ctx.tables(), ctx.base_line());
    const auto& u = all.front();
    Problem P = P3();
    const std::string plain = export_lp(P);
    const auto m = parse_lp(plain);
    CHECK(m.num_x == 243);
    CHECK(m.num_y == 216);
    CHECK(m.binaries == 243 + 216);
    CHECK(m.columns.size() == 216);
    CHECK(m.cardinality == 9);
    CHECK(m.constant_objective);
    CHECK(m.sides.empty());
    CHECK(plain.find("Maximize") != std::string::npos);

    const Problem back = problem_from_lp(m, 3);
    SolveOptions so;
    so.mode = Mode::All;
    CHECK(solve(back, nullptr, so).solutions == all3().solutions);

    P.sides.push_back(uset_constraint(P, u.O1, u.O2, "U"));
    const auto mu = parse_lp(export_lp(P));
    REQUIRE(mu.sides.size() == 1);
    CHECK(mu.sides[0].support.size() == 18);
    so.mode = Mode::ProveInfeasible;
    CHECK(solve(problem_from_lp(mu, 3), nullptr, so).status == Status::Infeasible);

    CHECK_THROWS_AS(parse_lp("this is not a model"), std::runtime_error);
    CHECK_THROWS_AS(parse_lp(plain.substr(0, plain.size() / 2)), std::runtime_error);
}
