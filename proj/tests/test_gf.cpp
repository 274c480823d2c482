#include "fgeom/gf.hpp"

#include <doctest.h>

#include <set>

using namespace fgeom::gf;

namespace {

// Schoolbook product in GF(q)(theta), theta^2 = xi, on coefficient pairs.
std::pair<int, int> slow_mul(int q, int xi, std::pair<int, int> a, std::pair<int, int> b)
{
    const int c0 = (a.first * b.first + xi * a.second * b.second) % q;
    const int c1 = (a.first * b.second + a.second * b.first) % q;
    return {c0, c1};
}

std::pair<int, int> parts(const Field& F, Fq2 x) { return {F.c0(x).v, F.c1(x).v}; }

int slow_nonsquare(int q)
{
    std::set<int> squares;
    for (int x = 1; x < q; ++x)
        squares.insert(x * x % q);
    for (int x = 1; x < q; ++x)
        if (!squares.count(x))
            return x;
    return -1;
}

} // namespace

TEST_CASE("smallest non-square")
{
    CHECK(find_nonsquare(3).v == 2);
    CHECK(find_nonsquare(5).v == 2);
    CHECK(find_nonsquare(7).v == 3);
    for (int q : {3, 5, 7, 11, 13})
        CHECK(find_nonsquare(q).v == slow_nonsquare(q));
}

TEST_CASE("field orders")
{
    CHECK(is_odd_prime(3));
    CHECK(is_odd_prime(7));
    CHECK_FALSE(is_odd_prime(2));
    CHECK_FALSE(is_odd_prime(9));
    CHECK_THROWS_AS(Field(4), FieldError);
    CHECK_THROWS_AS(Field(2), FieldError);
}

TEST_CASE("multiplication agrees with the schoolbook product")
{
    for (int q : {3, 5, 7}) {
        Field F(q);
        const int xi = F.xi().v;
        for (Fq2 a : F.elements())
            for (Fq2 b : F.elements()) {
                CHECK(parts(F, F.mul(a, b)) == slow_mul(q, xi, parts(F, a), parts(F, b)));
                if (b.id != 0)
                    CHECK(F.mul(F.div(a, b), b) == a);
            }
    }
}

TEST_CASE("trace and norm of theta")
{
    for (int q : {3, 5, 7}) {
        Field F(q);
        CHECK(F.trace(F.theta()).v == 0);
        CHECK(F.norm(F.theta()) == F.neg(F.xi()));
    }
    Field F3(3);
    CHECK(F3.norm(F3.theta()).v == 1);
}

TEST_CASE("frobenius is x^q and fixes exactly GF(q)")
{
    Field F(5);
    int fixed = 0;
    for (Fq2 x : F.elements()) {
        CHECK(F.frob(x) == F.pow(x, 5));
        CHECK(F.frob(F.frob(x)) == x);
        fixed += F.frob(x) == x;
        CHECK(F.in_base(F.embed(F.trace(x))));
    }
    CHECK(fixed == 5);
}

TEST_CASE("generator has order q^2 - 1")
{
    for (int q : {3, 5, 7}) {
        Field F(q);
        std::set<std::uint16_t> powers;
        Fq2 x = F.one();
        for (int k = 0; k < q * q - 1; ++k) {
            CHECK(F.log(x) == k);
            powers.insert(x.id);
            x = F.mul(x, F.generator());
        }
        CHECK(x == F.one());
        CHECK(powers.size() == static_cast<std::size_t>(q * q - 1));
    }
}

TEST_CASE("q-polynomial composition")
{
    Field F(3);
    const QPoly I = identity(F), K = frobenius_poly(F);
    for (Fq2 a : F.elements())
        for (Fq2 b : F.elements())
            CHECK(compose(F, QPoly{a, b}, I) == (QPoly{a, b}));
    CHECK(compose(F, K, K) == I);

    const QPoly T{F.theta(), F.zero()};
    const QPoly G{F.zero(), F.one()};
    const QPoly GT = compose(F, G, T);
    CHECK(GT == (QPoly{F.zero(), F.neg(F.theta())}));
    for (Fq2 x : F.elements()) {
        CHECK(evaluate(F, GT, x) == evaluate(F, G, evaluate(F, T, x)));
        CHECK(evaluate(F, compose(F, T, G), x) == evaluate(F, T, evaluate(F, G, x)));
    }
}

TEST_CASE("adjoint for the trace form")
{
    Field F(3);
    for (Fq2 a : F.elements())
        for (Fq2 b : F.elements()) {
            const QPoly P{a, b};
            const QPoly Pa = adjoint(F, P);
            CHECK(Pa == (QPoly{a, F.frob(b)}));
            for (Fq2 x : F.elements())
                for (Fq2 y : F.elements())
                    CHECK(F.trace(F.mul(evaluate(F, P, x), y)) == F.trace(F.mul(x, evaluate(F, Pa, y))));
        }
}

TEST_CASE("inversion")
{
    Field F(5);
    CHECK(invert(F, identity(F)) == identity(F));
    CHECK_THROWS_AS(invert(F, (QPoly{F.one(), F.one()})), SingularPolynomial);
    for (Fq2 a : F.elements())
        for (Fq2 b : F.elements()) {
            const QPoly P{a, b};
            std::set<std::uint16_t> image;
            for (Fq2 x : F.elements())
                image.insert(evaluate(F, P, x).id);
            const bool bijective = image.size() == static_cast<std::size_t>(F.order2());
            CHECK(invertible(F, P) == bijective);
            if (bijective) {
                CHECK(compose(F, invert(F, P), P) == identity(F));
                CHECK(compose(F, P, invert(F, P)) == identity(F));
            } else {
                CHECK_THROWS_AS(invert(F, P), SingularPolynomial);
            }
        }
}
