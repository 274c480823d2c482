#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgeom::gf {

/// Largest field order for which the arithmetic tables are built.
inline constexpr int kMaxFieldOrder = 31;

/// Element of GF(q), canonical representative 0..q-1.
struct Fq {
    std::uint8_t v = 0;
    friend constexpr bool operator==(Fq, Fq) = default;
    friend constexpr auto operator<=>(Fq, Fq) = default;
};

/// Element a0 + a1*theta of GF(q^2), stored as the lexicographic index a0*q + a1.
struct Fq2 {
    std::uint16_t id = 0;
    friend constexpr bool operator==(Fq2, Fq2) = default;
    friend constexpr auto operator<=>(Fq2, Fq2) = default;
};

class FieldError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SingularPolynomial : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// GF(q) and its quadratic extension GF(q^2) = GF(q)(theta), theta^2 = xi.
///
/// q must be an odd prime. xi is the smallest non-square of GF(q) and w the
/// smallest primitive element of GF(q^2) in lexicographic order, so every
/// derived fixture is reproducible.
class Field {
public:
    explicit Field(int q);

    int q() const { return q_; }
    int order2() const { return q_ * q_; }

    Fq xi() const { return xi_; }
    Fq2 theta() const { return make(0, 1); }
    Fq2 generator() const { return w_; }
    Fq2 zero() const { return {}; }
    Fq2 one() const { return make(1, 0); }

    // GF(q)
    Fq fq(long long v) const { return Fq{static_cast<std::uint8_t>(((v % q_) + q_) % q_)}; }
    Fq add(Fq a, Fq b) const { return Fq{static_cast<std::uint8_t>((a.v + b.v) % q_)}; }
    Fq sub(Fq a, Fq b) const { return Fq{static_cast<std::uint8_t>((a.v + q_ - b.v) % q_)}; }
    Fq neg(Fq a) const { return Fq{static_cast<std::uint8_t>((q_ - a.v) % q_)}; }
    Fq mul(Fq a, Fq b) const { return Fq{static_cast<std::uint8_t>((a.v * b.v) % q_)}; }
    Fq inv(Fq a) const;
    Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }
    bool is_square(Fq a) const { return square_[a.v] != 0; }

    // GF(q^2)
    Fq2 make(int a0, int a1) const
    {
        return Fq2{static_cast<std::uint16_t>(mod(a0) * q_ + mod(a1))};
    }
    Fq2 embed(Fq a) const { return make(a.v, 0); }
    Fq c0(Fq2 x) const { return Fq{static_cast<std::uint8_t>(x.id / q_)}; }
    Fq c1(Fq2 x) const { return Fq{static_cast<std::uint8_t>(x.id % q_)}; }
    bool in_base(Fq2 x) const { return x.id % q_ == 0; }

    Fq2 add(Fq2 a, Fq2 b) const { return Fq2{add_[a.id * n2_ + b.id]}; }
    Fq2 sub(Fq2 a, Fq2 b) const { return add(a, neg(b)); }
    Fq2 neg(Fq2 a) const { return Fq2{neg_[a.id]}; }
    Fq2 mul(Fq2 a, Fq2 b) const { return Fq2{mul_[a.id * n2_ + b.id]}; }
    Fq2 inv(Fq2 a) const;
    Fq2 div(Fq2 a, Fq2 b) const { return mul(a, inv(b)); }
    Fq2 frob(Fq2 a) const { return Fq2{frob_[a.id]}; }
    Fq2 pow(Fq2 a, long long e) const;

    /// x + x^q, as an element of GF(q).
    Fq trace(Fq2 x) const { return c0(add(x, frob(x))); }
    /// x^(q+1), as an element of GF(q).
    Fq norm(Fq2 x) const { return c0(mul(x, frob(x))); }

    /// Discrete logarithm to base generator(); x must be nonzero.
    int log(Fq2 x) const;
    /// Label of the coset x*GF(q)^* in GF(q^2)^*/GF(q)^*, an integer mod q+1.
    int coset_label(Fq2 x) const { return log(x) % (q_ + 1); }

    /// All elements of GF(q^2) in canonical order.
    std::vector<Fq2> elements() const;

    std::string to_string(Fq2 x) const;

private:
    int mod(int v) const { return ((v % q_) + q_) % q_; }

    int q_;
    int n2_;
    Fq xi_;
    Fq2 w_;
    std::vector<std::uint8_t> square_;
    std::vector<std::uint8_t> inv_q_;
    std::vector<std::uint16_t> add_;
    std::vector<std::uint16_t> mul_;
    std::vector<std::uint16_t> neg_;
    std::vector<std::uint16_t> frob_;
    std::vector<std::uint16_t> inv_;
    std::vector<int> log_;
};

/// Smallest non-square of GF(q) for an odd prime q.
Fq find_nonsquare(int q);

bool is_odd_prime(int q);

/// F(x) = a x + b x^q, a GF(q)-linear map of GF(q^2).
struct QPoly {
    Fq2 a;
    Fq2 b;
    friend constexpr bool operator==(const QPoly&, const QPoly&) = default;
    friend constexpr auto operator<=>(const QPoly&, const QPoly&) = default;
};

/// The identity I(x) = x.
QPoly identity(const Field& F);
/// K(x) = x^q.
QPoly frobenius_poly(const Field& F);
inline QPoly zero_poly() { return {}; }

Fq2 evaluate(const Field& F, const QPoly& P, Fq2 x);
QPoly compose(const Field& F, const QPoly& outer, const QPoly& inner);
QPoly add(const Field& F, const QPoly& P, const QPoly& R);
QPoly negate(const Field& F, const QPoly& P);
QPoly scale(const Field& F, Fq2 c, const QPoly& P);
/// Adjoint with respect to (x, y) -> Tr(xy): (a, b) -> (a, b^q).
QPoly adjoint(const Field& F, const QPoly& P);
/// Dickson determinant a^(q+1) - b^(q+1); P is invertible iff it is nonzero.
Fq dickson_det(const Field& F, const QPoly& P);
bool invertible(const Field& F, const QPoly& P);
/// Compositional inverse; throws SingularPolynomial when dickson_det vanishes.
QPoly invert(const Field& F, const QPoly& P);

} // namespace fgeom::gf
