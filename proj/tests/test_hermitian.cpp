#include "fgeom/hermitian.hpp"

#include <doctest.h>

#include <random>

using namespace fgeom::herm;

namespace {

std::vector<Vec4> projective_points(const Field& F)
{
    std::vector<Vec4> out;
    const auto el = F.elements();
    for (Fq2 a : el)
        for (Fq2 b : el)
            for (Fq2 c : el)
                for (Fq2 d : el) {
                    const Vec4 v{a, b, c, d};
                    if (!is_zero(v) && normalize(F, v) == v)
                        out.push_back(v);
                }
    return out;
}

Vec4 random_point(const HermitianSurface& H, std::mt19937& rng)
{
    return H.point(std::uniform_int_distribution<int>(0, H.num_points() - 1)(rng));
}

} // namespace

TEST_CASE("hermitian form values")
{
    Field F(3);
    const Fq2 z = F.zero(), o = F.one();
    CHECK(herm(F, Vec4{z, z, z, o}, Vec4{o, z, z, z}) == o);
    CHECK(herm(F, Vec4{o, o, o, o}, Vec4{o, o, o, o}).id == 0);
    const auto el = F.elements();
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(el.size()) - 1);
    for (int t = 0; t < 300; ++t) {
        Vec4 x, y;
        for (int k = 0; k < 4; ++k) {
            x[k] = el[pick(rng)];
            y[k] = el[pick(rng)];
        }
        CHECK(herm(F, y, x) == F.frob(herm(F, x, y)));
        CHECK(F.in_base(herm(F, x, x)));
    }
}

TEST_CASE("points and lines of H(3, q^2)")
{
    for (int q : {3, 5}) {
        Field F(q);
        HermitianSurface H(F);
        const int q2 = q * q, q3 = q2 * q;
        CHECK(H.num_points() == (q2 + 1) * (q3 + 1));
        CHECK(H.num_lines() == (q3 + 1) * (q + 1));
        for (int l = 0; l < H.num_lines(); l += 5) {
            const auto& pts = H.line_points(l);
            CHECK(pts.size() == static_cast<std::size_t>(q2 + 1));
            for (int a : pts)
                for (int b : pts)
                    CHECK(herm(F, H.point(a), H.point(b)).id == 0);
        }
        for (int p = 0; p < H.num_points(); p += 7)
            CHECK(H.lines_through(p).size() == static_cast<std::size_t>(q + 1));
    }
}

TEST_CASE("every isotropic point of PG(3, 9) is listed")
{
    Field F(3);
    HermitianSurface H(F);
    int isotropic = 0;
    for (const Vec4& v : projective_points(F)) {
        const bool iso = herm(F, v, v).id == 0;
        isotropic += iso;
        CHECK((H.point_id(v) >= 0) == iso);
    }
    CHECK(isotropic == 280);
}

TEST_CASE("z-class examples")
{
    Field F(3);
    HermitianSurface H(F);
    const Fq2 z = F.zero(), o = F.one();
    const Vec4 P{z, z, z, o}, Q{o, z, z, z};
    int seen = 0;
    for (int id = 0; id < H.num_points(); ++id) {
        const Vec4& R = H.point(id);
        if (R[0] != o || R[3].id == 0)
            continue;
        ++seen;
        const ZClass c = zclass(F, P, Q, R);
        CHECK(c.label == F.coset_label(F.frob(R[3])));
        if (F.in_base(R[3]))
            CHECK(c.kind == ZKind::E);
    }
    CHECK(seen > 0);

    for (Fq2 r2 : F.elements()) {
        if (F.norm(r2).v != 2)
            continue;
        const Vec4 R{o, o, r2, F.theta()};
        REQUIRE(herm(F, R, R).id == 0);
        CHECK(zclass(F, P, Q, R).kind == ZKind::T);
    }
}

TEST_CASE("degenerate planes are exactly the z-class t triples")
{
    for (int q : {3, 5}) {
        Field F(q);
        HermitianSurface H(F);
        std::mt19937 rng(11);
        int tested = 0, degenerate = 0;
        while (tested < 2000) {
            const Vec4 a = random_point(H, rng), b = random_point(H, rng), c = random_point(H, rng);
            if (herm(F, a, b).id == 0 || herm(F, b, c).id == 0 || herm(F, c, a).id == 0)
                continue;
            ++tested;
            const bool deg = degenerate_span(F, a, b, c);
            degenerate += deg;
            CHECK(deg == (zclass(F, a, b, c).kind == ZKind::T));
        }
        CHECK(degenerate > 0);
    }
    Field F(3);
    HermitianSurface H(F);
    const auto& pts = H.line_points(0);
    CHECK_THROWS_AS(degenerate_span(F, H.point(pts[0]), H.point(pts[1]), H.point(H.num_points() - 1)),
                    std::invalid_argument);
}

TEST_CASE("points on a hyperbolic line")
{
    Field F(3);
    HermitianSurface H(F);
    const Fq2 z = F.zero(), o = F.one();
    const Vec4 P{z, z, z, o}, Q{o, z, z, z};
    int on_line = 0;
    for (int id = 0; id < H.num_points(); ++id) {
        const Vec4& R = H.point(id);
        if (R[1].id != 0 || R[2].id != 0 || R == P || R == Q)
            continue;
        ++on_line;
        CHECK(zclass(F, P, Q, R).kind == ZKind::T);
    }
    CHECK(on_line == 3 - 1);
}

TEST_CASE("special set construction")
{
    Field F3(3);
    CHECK(special_nu(F3).v == 1);
    CHECK(special_delta(F3) == F3.one());
    HermitianSurface H3(F3);
    const auto S3 = build_special_set(F3);
    CHECK(S3.points.size() == 10);

    Field F5(5);
    CHECK_FALSE(F5.is_square(special_nu(F5)));
    CHECK_FALSE(F5.is_square(F5.neg(special_nu(F5))));
    const auto S5 = build_special_set(F5);
    CHECK(S5.points.size() == 26);

    for (const auto* pr : {&S3}) {
        const auto rep = validate_special_set(H3, *pr);
        CHECK(rep.passed);
        CHECK(rep.violations.empty());
        CHECK(all_triples_e(F3, *pr));
    }
    HermitianSurface H5(F5);
    CHECK(validate_special_set(H5, S5).passed);
    CHECK(all_triples_e(F5, S5));
}

TEST_CASE("a special set with a collinear replacement fails")
{
    Field F(3);
    HermitianSurface H(F);
    auto S = build_special_set(F);
    const int a = H.point_id(S.points[0]);
    REQUIRE(a >= 0);
    for (int line : H.lines_through(a)) {
        for (int b : H.line_points(line)) {
            if (b == a)
                continue;
            auto T = S;
            T.points[1] = H.point(b);
            if (std::find(S.points.begin(), S.points.end(), H.point(b)) != S.points.end())
                continue;
            const auto rep = validate_special_set(H, T);
            CHECK_FALSE(rep.pairwise_noncollinear);
            CHECK_FALSE(rep.passed);
        }
    }
}

TEST_CASE("special set json round trip")
{
    Field F(5);
    const auto S = build_special_set(F);
    const auto back = special_set_from_json(F, special_set_to_json(F, S));
    CHECK(back.points == S.points);
    CHECK_THROWS(special_set_from_json(F, "{not json"));
    CHECK_THROWS(special_set_from_json(F, "[[1,2,3]]"));
}
