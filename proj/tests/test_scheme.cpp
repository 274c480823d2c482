#include "fgeom/oval.hpp"
#include "fgeom/scheme.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace fgeom;
using namespace fgeom::scheme;

namespace {

std::array<long long, 6> valency_formula(long long q)
{
    return {1, (q * q - 1) * (q + 1), q - 1, (q * q - 1) * (q * q - 1), (q * q * q - q) * (q - 1) * (q - 1),
            (q * q * q - q) * (q - 1)};
}

int point_of(const Context& ctx, const herm::Vec4& v)
{
    return ctx.surface().point_id(herm::normalize(ctx.field(), v));
}

const Scheme& XP3()
{
    static const Scheme S = Scheme::point_scheme(fixtures::context(3));
    return S;
}

const Scheme& Xl3()
{
    static const Scheme S = Scheme::line_scheme(fixtures::context(3), Route::Geometric);
    return S;
}

} // namespace

TEST_CASE("point pair relations")
{
    const auto& ctx = fixtures::context(3);
    const auto& F = ctx.field();
    const auto& H = ctx.surface();
    const int P = ctx.base_point(), Q = ctx.opposite_point();
    const auto o = F.one(), z = F.zero();
    CHECK(classify_point_pair(H, P, Q, point_of(ctx, {o, z, z, F.theta()})) == 2);
    CHECK(classify_point_pair(H, P, Q, point_of(ctx, {o, o, o, o})) == 5);
    CHECK(classify_point_pair(H, P, Q, Q) == 0);
    const auto& S = XP3();
    for (int i = 0; i < S.size(); i += 5)
        for (int j = 0; j < S.size(); j += 3)
            CHECK(S.rel(i, j) == S.rel(j, i));
}

TEST_CASE("valencies")
{
    bool regular = false;
    CHECK(XP3().valencies(&regular) == valency_formula(3));
    CHECK(regular);
    CHECK(XP3().valencies() == (std::array<long long, 6>{1, 32, 2, 64, 96, 48}));
    CHECK(Xl3().valencies() == valency_formula(3));
    for (long long q : {3, 5, 7})
        CHECK(cf::valencies(q) == valency_formula(q));
}

TEST_CASE("closed-form intersection numbers")
{
    for (long long q : {3, 5, 7}) {
        CHECK(cf::intersection_matrix(1, q)[1][1] == q * q - 2);
        CHECK(cf::intersection_matrix(2, q)[1][3] == q - 1);
        CHECK(cf::intersection_matrix(5, q)[5][5] == q * q * q - 2 * q * q + q + 1);
        // row k of L_i sums to the valency eta_i
        const auto eta = cf::valencies(q);
        for (int i = 0; i < 6; ++i)
            for (int k = 0; k < 6; ++k) {
                long long s = 0;
                for (int j = 0; j < 6; ++j)
                    s += cf::intersection_matrix(i, q)[k][j];
                CHECK(s == eta[i]);
            }
    }
    CHECK(cf::intersection_matrix(5, 3)[5][5] == 13);
}

TEST_CASE("exhaustive intersection numbers at q = 3")
{
    for (const Scheme* S : {&XP3(), &Xl3()}) {
        const auto res = intersection_numbers(*S, true, 0, 1);
        CHECK(res.pairs_checked == 243LL * 243);
        CHECK(res.well_defined);
        CHECK(res.matches_closed_form);
        CHECK(res.deviations.empty());
        std::mt19937 rng(2);
        for (int t = 0; t < 40; ++t) {
            const int x = rng() % 243, y = rng() % 243;
            const int k = S->rel(x, y);
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j)
                    CHECK(naive_intersection(*S, x, y, i, j) == res.computed[i][k][j]);
        }
    }
}

TEST_CASE("sampled intersection numbers at q = 5")
{
    const Scheme S = Scheme::point_scheme(fixtures::context(5));
    const auto res = intersection_numbers(S, false, 20, 3);
    CHECK(res.well_defined);
    CHECK(res.matches_closed_form);
    for (long long c : res.pairs_per_class)
        CHECK(c >= 20);
}

TEST_CASE("geometric and transported line schemes coincide")
{
    const Scheme T = Scheme::line_scheme(fixtures::context(3), Route::Transport);
    const Scheme& G = Xl3();
    REQUIRE(T.vertices() == G.vertices());
    long long bad = 0;
    for (int i = 0; i < G.size(); ++i)
        for (int j = 0; j < G.size(); ++j)
            bad += T.rel(i, j) != G.rel(i, j);
    CHECK(bad == 0);
}

TEST_CASE("eigenmatrices")
{
    CHECK(cf::multiplicities(3) == (std::array<long long, 6>{1, 32, 54, 48, 36, 72}));
    for (long long q : {3, 5, 7}) {
        const auto P = cf::first_eigenmatrix(q);
        const auto eta = valency_formula(q);
        for (int j = 0; j < 6; ++j)
            CHECK(P[0][j] == Rational(eta[j]));
        const auto m = cf::multiplicities(q);
        long long s = 0;
        for (auto x : m)
            s += x;
        CHECK(s == q * q * q * q * q);
        for (const auto& c : eigen_closed_form_checks(static_cast<int>(q)))
            CHECK_MESSAGE(c.passed, c.id);
    }
}

TEST_CASE("idempotent ranks at q = 3")
{
    const auto m = cf::multiplicities(3);
    for (int i = 0; i < 6; ++i) {
        const auto E = idempotent(XP3(), i);
        CHECK(rank_mod_p(E.num, E.n) == m[i]);
    }
    for (const auto& c : bose_mesner_dense(XP3()))
        CHECK_MESSAGE(c.passed, c.id);
}

TEST_CASE("structural and sampled Bose-Mesner checks")
{
    for (const auto& c : bose_mesner_probabilistic(Xl3(), 3, 4))
        CHECK_MESSAGE(c.passed, c.id);
    const auto res = intersection_numbers(Xl3(), true, 0, 1);
    for (const auto& c : bose_mesner_from_structure(Xl3(), res))
        CHECK_MESSAGE(c.passed, c.id);
    const auto partial = intersection_numbers(Xl3(), false, 5, 1);
    bool any_failed = false;
    for (const auto& c : bose_mesner_from_structure(Xl3(), partial))
        any_failed = any_failed || !c.passed;
    CHECK(any_failed);
}

TEST_CASE("rank modulo a prime")
{
    CHECK(rank_mod_p({1, 2, 2, 4}, 2) == 1);
    CHECK(rank_mod_p({1, 0, 0, 0, 1, 0, 0, 0, 1}, 3) == 3);
    CHECK(rank_mod_p({0, 0, 0, 0}, 2) == 0);
    CHECK(rank_mod_p({2, 1, 1, 4, 2, 2}, 3) == 1);
}

TEST_CASE("pseudo-conic as a clique and a design")
{
    const auto& ctx = fixtures::context(3);
    const auto& X = Xl3();
    const auto S = oval::pseudo_conic(ctx, herm::build_special_set(ctx.field()));
    REQUIRE(std::binary_search(S.begin(), S.end(), ctx.base_line()));
    std::vector<int> Y;
    for (int g : S)
        if (g != ctx.base_line())
            Y.push_back(X.index_of(g));
    REQUIRE(Y.size() == 9);
    const auto a = inner_distribution(X, Y);
    CHECK(a == (Distribution{1, 0, 0, 0, 0, 8}));
    const long long q = 3;
    const auto b = macwilliams(3, a);
    const std::array<long long, 6> want{q * q, 0, q * q * q * (q - 1), q * q * (q * q - 1),
                                        q * q * q * (q - 1) * (q - 1), 0};
    for (int j = 0; j < 6; ++j)
        CHECK(b[j] == Rational(want[j]));
    CHECK(cf::conic_transform(q) == want);
    CHECK(is_M_clique(X, Y, {0, 5}));
    CHECK(is_M_clique(X, Y, {0, 4, 5}));
    CHECK(is_T_design(X, Y, {1, 5}));
    CHECK(is_T_design(X, Y, {1}));
    CHECK_FALSE(is_T_design(X, Y, {1, 2}));

    // a zero of the transform at j means chi_Y E_j = 0
    std::vector<long long> chi(X.size(), 0);
    for (int y : Y)
        chi[y] = 1;
    const auto proj = projections(X, chi);
    for (int j = 0; j < 6; ++j) {
        const bool zero = std::all_of(proj[j].begin(), proj[j].end(), [](long long v) { return v == 0; });
        CHECK(zero == (b[j] == Rational(0)));
    }
}

TEST_CASE("designs of the whole vertex set and of a single vertex")
{
    const auto& X = Xl3();
    std::vector<int> all(X.size());
    std::iota(all.begin(), all.end(), 0);
    CHECK(is_T_design(X, all, {1, 2, 3, 4, 5}));
    std::vector<long long> e(X.size(), 0);
    e[7] = 1;
    CHECK(dual_degree_set(X, e) == std::set<int>{1, 2, 3, 4, 5});
    CHECK(dual_degree_set(X, std::vector<long long>(X.size(), 1)).empty());
    CHECK_THROWS_AS(inner_distribution(X, {}), std::invalid_argument);
}

TEST_CASE("quotient graph at q = 3")
{
    const auto res = quotient_scheme(fixtures::context(3), XP3());
    CHECK(res.params == (std::array<long long, 4>{81, 32, 13, 12}));
    CHECK(cf::quotient_srg(3) == res.params);
    const auto [v, k, lambda, mu] = res.params;
    CHECK(k * (k - lambda - 1) == (v - k - 1) * mu);
    CHECK(res.strongly_regular);
    CHECK(res.fibers_ok);
    CHECK(res.phi_bijective);
    CHECK(res.pairs_checked == 81 * 80);
    CHECK(res.adjacency_mismatches == 0);
    CHECK(res.trace_mismatches == 0);
}
