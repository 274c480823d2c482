#include "fgeom/oval.hpp"
#include "fgeom/usets.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace fgeom;
using namespace fgeom::usets;

namespace {

const Scheme& Xl3()
{
    static const Scheme S = Scheme::line_scheme(fixtures::context(3), scheme::Route::Geometric);
    return S;
}

const std::vector<USet>& all3()
{
    static const auto all = usets_on_line(fixtures::context(3).tables(), fixtures::context(3).base_line());
    return all;
}

std::vector<long long> indicator(const Scheme& X, const std::vector<Part>& labels, Part p)
{
    std::vector<long long> v(X.size(), 0);
    for (int i = 0; i < X.size(); ++i)
        v[i] = labels[i] == p;
    return v;
}

} // namespace

TEST_CASE("cone generators and the involution")
{
    const auto& ctx = fixtures::context(3);
    const auto& T = ctx.tables();
    const int l = ctx.base_line();
    for (int B : T.generator_points(l)) {
        const Flag f{B, l};
        const auto poles = flag_poles(T, f);
        CHECK(poles.size() == 27 * 2);
        for (int pole : poles) {
            const auto cone = cone_generators(T, B, pole);
            REQUIRE(cone.size() == 4);
            for (int g : cone) {
                CHECK(T.in_hyperplane(pole, g));
                CHECK(T.generator(g).contains(T.field(), T.point(B)));
            }
            const auto inv = involution(T, f, pole, cone);
            for (int k = 0; k < 4; ++k) {
                CHECK(inv[k] != k);
                CHECK(inv[inv[k]] == k);
            }
            const auto sigma = sigma_line(T, f, pole);
            CHECK(sigma.dim() == 2);
            CHECK(sigma.contains(T.field(), T.point(B)));
        }
    }
}

TEST_CASE("standard position")
{
    for (int q : {3, 5})
        for (const auto& c : standard_position_checks(fixtures::context(q).tables()))
            CHECK_MESSAGE(c.passed, c.id << ": " << c.detail);
}

TEST_CASE("U-set shape")
{
    const auto& T = fixtures::context(3).tables();
    const int l = fixtures::context(3).base_line();
    const auto disjoint = T.disjoint_from(l);
    const std::set<int> X(disjoint.begin(), disjoint.end());
    for (const auto& u : all3()) {
        CHECK(u.O1.size() == 9);
        CHECK(u.O2.size() == 9);
        std::vector<int> common;
        std::set_intersection(u.O1.begin(), u.O1.end(), u.O2.begin(), u.O2.end(), std::back_inserter(common));
        CHECK(common.empty());
        for (int g : u.O1)
            CHECK(X.count(g));
        for (int g : u.O2)
            CHECK(X.count(g));
        CHECK(u.O1 < u.O2);
    }
}

TEST_CASE("swapping p1 and p2 negates the signed vector")
{
    const auto& T = fixtures::context(3).tables();
    const auto& u = all3().front();
    USet w = build_uset(T, u.flag, u.pole, u.p2);
    CHECK(w.O1 == u.O2);
    CHECK(w.O2 == u.O1);
    const auto a = signed_vector(Xl3(), u), b = signed_vector(Xl3(), w);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i] == -b[i]);
    canonicalize(w);
    CHECK(w.O1 == u.O1);
    CHECK(w.p1 == u.p1);
}

TEST_CASE("counts")
{
    const auto& T = fixtures::context(3).tables();
    const int l = fixtures::context(3).base_line();
    const auto& all = all3();
    CHECK(all.size() == 432);
    const auto s = summarize(Xl3(), all);
    CHECK(s.per_flag == std::vector<long long>(4, 108));
    CHECK(s.per_line == 432);
    CHECK(s.signed_vectors == 864);
    CHECK(s.distinct_signed == 864);
    CHECK(s.membership_min == 32);
    CHECK(s.membership_max == 32);
    CHECK(usets_on_flag(T, Flag{T.generator_points(l)[0], l}).size() == 108);
}

TEST_CASE("partition labels and the vector identities")
{
    const auto& T = fixtures::context(3).tables();
    const auto& X = Xl3();
    for (std::size_t k = 0; k < all3().size(); k += 9) {
        const auto& u = all3()[k];
        const auto labels = classify_partition(T, X, u);
        REQUIRE(labels.size() == 243);
        std::array<int, kParts> count{};
        for (auto p : labels)
            ++count[static_cast<int>(p)];
        CHECK(count[static_cast<int>(Part::O1)] == 9);
        CHECK(count[static_cast<int>(Part::O2)] == 9);
        std::string why;
        CHECK_MESSAGE(lemma_identities(X, u, labels, &why), why);
        CHECK_MESSAGE(corollary_identities(X, u, labels, &why), why);
        CHECK_FALSE(lemma_identities(X, u, labels, nullptr, true));

        // the A_5 identity without the V term is off by exactly chi_V
        const long long q = 3;
        const auto out = X.apply_all(indicator(X, labels, Part::O1));
        auto chi = [&](Part p) { return indicator(X, labels, p); };
        const auto o1 = chi(Part::O1), o2 = chi(Part::O2), j1 = chi(Part::J1), j2 = chi(Part::J2), w = chi(Part::W),
                   z = chi(Part::Z), v = chi(Part::V);
        for (int i = 0; i < X.size(); ++i) {
            const long long printed =
                1 - o1[i] + (q * q - q - 1) * o2[i] - j1[i] - j2[i] + (q - 1) * w[i] + (q - 2) * z[i];
            CHECK(printed - out[5][i] == v[i]);
        }

        // v A_5 = -(q^2 - q) v
        const auto sv = signed_vector(X, u);
        const auto a5 = X.apply_all(sv)[5];
        for (int i = 0; i < X.size(); ++i)
            CHECK(a5[i] == -(q * q - q) * sv[i]);
    }
}

TEST_CASE("sigma criterion matches the z-based perspective test")
{
    const auto& ctx = fixtures::context(3);
    const auto& T = ctx.tables();
    const int l = ctx.base_line();
    const auto D = T.disjoint_from(l);
    std::mt19937 rng(21);
    int tested = 0;
    while (tested < 300) {
        const int m = D[rng() % D.size()], n = D[rng() % D.size()];
        if (m == n || T.concurrent(m, n))
            continue;
        if (geom::span(T.field(), {T.generator(l), T.generator(m), T.generator(n)}).dim() != 6)
            continue;
        const bool pf = klein::perspective_fast(ctx.klein(), l, m, n);
        for (int B : T.generator_points(l)) {
            const auto s = sigma_criterion(T, l, m, n, B);
            REQUIRE(s.has_value());
            CHECK(*s == pf);
        }
        ++tested;
    }
}

TEST_CASE("spectral suite")
{
    const auto& ctx = fixtures::context(3);
    const auto conic = oval::pseudo_conic(ctx, herm::build_special_set(ctx.field()));
    std::vector<int> Sp;
    for (int g : conic)
        if (g != ctx.base_line())
            Sp.push_back(g);
    const auto r = spectral_suite(Xl3(), all3(), 0, true, &Sp);
    CHECK(r.vectors == 864);
    CHECK(r.dual_checked == 864);
    CHECK(r.dual_ok == 864);
    CHECK(r.m1_plus_m5 == 104);
    CHECK(r.stacked_rank == 104);
    CHECK(r.gram_expected == (std::array<long long, 6>{64, -2, 0, 6, 0, -8}));
    for (int c = 0; c < 6; ++c) {
        CHECK(r.gram_bad[c] == 0);
        CHECK(r.gram_pairs[c] >= 100);
    }
    CHECK(r.orthogonality_bad == 0);
}

TEST_CASE("meet counts with the pseudo-conic")
{
    const auto& ctx = fixtures::context(3);
    const auto conic = oval::pseudo_conic(ctx, herm::build_special_set(ctx.field()));
    std::vector<int> Sp;
    for (int g : conic)
        if (g != ctx.base_line())
            Sp.push_back(g);
    const auto m = uset_meet_counts(all3(), Sp);
    CHECK(m.zero_or_two);
    CHECK(m.histogram.size() >= 3);
    CHECK(m.histogram[1] == 0);
    for (std::size_t k = 3; k < m.histogram.size(); ++k)
        CHECK(m.histogram[k] == 0);
    CHECK(m.average == cf::Rational(4));
    CHECK(m.sum_mu == 9LL * 4 * 8);

    // swapping one member for another line of X breaks the 0-or-2 pattern
    const auto& T = ctx.tables();
    for (int g : T.disjoint_from(ctx.base_line())) {
        if (std::binary_search(Sp.begin(), Sp.end(), g))
            continue;
        auto other = Sp;
        other[0] = g;
        std::sort(other.begin(), other.end());
        const auto mo = uset_meet_counts(all3(), other);
        CHECK_FALSE(mo.zero_or_two);
        CHECK(mo.average != cf::Rational(4));
        break;
    }
}

TEST_CASE("degenerate hyperplanes are rejected")
{
    const auto& ctx = fixtures::context(3);
    const auto& T = ctx.tables();
    const int l = ctx.base_line();
    const int B = T.generator_points(l)[0];
    for (int pole = 0; pole < T.num_poles(); ++pole)
        if (T.form().bhat(T.pole(pole), T.point(B)).v != 0) {
            CHECK_THROWS_AS(cone_generators(T, B, pole), DegenerateHyperplane);
            break;
        }
}
