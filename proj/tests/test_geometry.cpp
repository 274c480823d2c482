#include "fgeom/geometry.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace fgeom;
using namespace fgeom::geom;

namespace {

int md(long long v, int q) { return static_cast<int>(((v % q) + q) % q); }

// Q-hat written out on the six GF(q) coordinates: x = a0 + a1 theta etc.,
// x z^q + x^q z = 2(a0 c0 - xi a1 c1) and y^(q+1) = b0^2 - xi b1^2.
int qhat_oracle(int q, int xi, const Vec6& v)
{
    const long long a0 = v[0], a1 = v[1], b0 = v[2], b1 = v[3], c0 = v[4], c1 = v[5];
    return md(b0 * b0 - xi * b1 * b1 - 2 * (a0 * c0 - xi * a1 * c1), q);
}

int bhat_oracle(int q, int xi, const Vec6& u, const Vec6& v)
{
    Vec6 s;
    for (int k = 0; k < 6; ++k)
        s[k] = static_cast<std::uint8_t>((u[k] + v[k]) % q);
    return md(qhat_oracle(q, xi, s) - qhat_oracle(q, xi, u) - qhat_oracle(q, xi, v), q);
}

std::vector<Vec6> projective_points(int q)
{
    std::vector<Vec6> out;
    const int total = q * q * q * q * q * q;
    for (int c = 1; c < total; ++c) {
        const Vec6 v = decode(q, static_cast<std::uint32_t>(c));
        for (int k = 0; k < 6; ++k)
            if (v[k] != 0) {
                if (v[k] == 1)
                    out.push_back(v);
                break;
            }
    }
    return out;
}

} // namespace

TEST_CASE("Q-hat and b-hat on small vectors")
{
    Field F(3);
    QuadricForm Q(F);
    const Fq2 z = F.zero(), o = F.one(), t = F.theta();
    CHECK(Q.qhat(HatVector{o, z, z}).v == 0);
    CHECK(Q.qhat(HatVector{z, o, z}).v == 1);
    CHECK(Q.qhat(HatVector{o, z, t}).v == 0);
    CHECK(Q.bhat(HatVector{o, z, z}, HatVector{z, z, o}) == F.fq(-2));
    CHECK(Q.bhat(HatVector{o, z, z}, HatVector{o, z, z}).v == 0);
}

TEST_CASE("Q-hat matches the coordinate formula and b-hat polarizes it")
{
    for (int q : {3, 5}) {
        Field F(q);
        QuadricForm Q(F);
        const int xi = F.xi().v;
        std::mt19937 rng(7);
        std::uniform_int_distribution<int> c(0, q - 1);
        for (int trial = 0; trial < 500; ++trial) {
            Vec6 u, v;
            for (int k = 0; k < 6; ++k) {
                u[k] = static_cast<std::uint8_t>(c(rng));
                v[k] = static_cast<std::uint8_t>(c(rng));
            }
            CHECK(Q.qhat(u).v == qhat_oracle(q, xi, u));
            CHECK(Q.bhat(u, v).v == bhat_oracle(q, xi, u, v));
            CHECK(Q.bhat(u, u).v == md(2 * qhat_oracle(q, xi, u), q));
            CHECK(Q.bhat(from_coords(F, u), from_coords(F, v)) == Q.bhat(u, v));
            CHECK(to_coords(F, from_coords(F, u)) == u);
        }
    }
}

TEST_CASE("orthogonal complements")
{
    Field F(3);
    QuadricForm Q(F);
    const Subspace V = Subspace::whole(F);
    CHECK(V.dim() == 6);
    CHECK(Q.perp(V).dim() == 0);
    QuadricTables T(F);
    for (int g = 0; g < T.num_generators(); g += 7) {
        const Subspace& l = T.generator(g);
        const Subspace lp = Q.perp(l);
        CHECK(lp.dim() == 4);
        CHECK(lp.contains(F, l));
        CHECK(Q.perp(lp) == l);
    }
}

TEST_CASE("span and meet")
{
    Field F(3);
    QuadricTables T(F);
    const Subspace& l = T.generator(0);
    CHECK(meet(F, l, l) == l);
    CHECK(span(F, l, l) == l);
    for (int m : T.disjoint_from(0)) {
        CHECK(span(F, l, T.generator(m)).dim() == 4);
        CHECK(meet(F, l, T.generator(m)).dim() == 0);
    }
    for (int g = 1; g < T.num_generators(); ++g) {
        const Subspace& m = T.generator(g);
        CHECK(span(F, l, m).dim() + meet(F, l, m).dim() == 4);
        CHECK(annihilator(F, annihilator(F, m)) == m);
    }
}

TEST_CASE("counts of points, generators and non-degenerate hyperplanes")
{
    for (int q : {3, 5}) {
        Field F(q);
        QuadricTables T(F);
        const long long q2 = q * q, q3 = q2 * q;
        CHECK(T.num_points() == (q + 1) * (q3 + 1));
        CHECK(T.num_generators() == (q2 + 1) * (q3 + 1));
        CHECK(T.num_poles() == q2 * (q3 + 1));
        CHECK(static_cast<long long>(T.disjoint_from(0).size()) == q3 * q2);
    }
}

TEST_CASE("tables agree with a brute-force enumeration at q = 3")
{
    const int q = 3;
    Field F(q);
    QuadricTables T(F);
    const int xi = F.xi().v;
    std::vector<Vec6> singular;
    int nonsingular = 0;
    for (const Vec6& v : projective_points(q)) {
        if (qhat_oracle(q, xi, v) == 0) {
            singular.push_back(v);
            CHECK(T.point_id(v) >= 0);
        } else {
            ++nonsingular;
            CHECK(T.pole_id(v) >= 0);
            CHECK(T.point_id(v) == -1);
        }
    }
    CHECK(singular.size() == 112);
    CHECK(nonsingular == 252);

    // each totally singular line holds C(q+1, 2) unordered pairs of its points
    long long pairs = 0;
    for (std::size_t a = 0; a < singular.size(); ++a)
        for (std::size_t b = a + 1; b < singular.size(); ++b)
            if (bhat_oracle(q, xi, singular[a], singular[b]) == 0) {
                ++pairs;
                const Vec6 both[2] = {singular[a], singular[b]};
                CHECK(T.generator_id(Subspace::span_of(F, both)) >= 0);
            }
    CHECK(pairs == 280LL * (q + 1) * q / 2);
}

TEST_CASE("incidences with points and hyperplanes")
{
    const int q = 3;
    Field F(q);
    QuadricTables T(F);
    const int xi = F.xi().v;
    for (int g = 0; g < T.num_generators(); g += 13) {
        const auto pts = T.generator_points(g);
        CHECK(pts.size() == static_cast<std::size_t>(q + 1));
        for (int p : pts) {
            CHECK(T.generator(g).contains(F, T.point(p)));
            const auto through = T.generators_through(p);
            CHECK(through.size() == static_cast<std::size_t>(q * q + 1));
            CHECK(std::find(through.begin(), through.end(), g) != through.end());
        }
        for (int p = 0; p < T.num_poles(); ++p) {
            bool inside = true;
            for (const Vec6& b : T.generator(g).basis())
                inside = inside && bhat_oracle(q, xi, T.pole(p), b) == 0;
            CHECK(T.in_hyperplane(p, g) == inside);
        }
        CHECK(T.hyperplanes_containing(g).size() == 36);
    }
}

TEST_CASE("disjoint generators lie in q + 1 common non-degenerate hyperplanes")
{
    Field F(3);
    QuadricTables T(F);
    const auto Hl = T.hyperplanes_containing(0);
    const std::set<int> hl(Hl.begin(), Hl.end());
    for (int m : T.disjoint_from(0)) {
        int common = 0;
        for (int p : T.hyperplanes_containing(m))
            common += hl.count(p);
        CHECK(common == 4);
        CHECK_FALSE(T.concurrent(0, m));
    }
}

TEST_CASE("table dumps round-trip and detect edits")
{
    Field F(3);
    QuadricTables T(F);
    const std::string dump = T.dump_json(F.one(), F.one());
    CHECK(T.matches_dump(dump));
    std::string edited = dump;
    const auto pos = edited.find("\"points\"");
    REQUIRE(pos != std::string::npos);
    const auto digit = edited.find_first_of("012", pos);
    edited[digit] = edited[digit] == '0' ? '1' : '0';
    std::string why;
    CHECK_FALSE(T.matches_dump(edited, &why));
    CHECK_FALSE(why.empty());
}
