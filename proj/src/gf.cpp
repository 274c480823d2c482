#include "fgeom/gf.hpp"

#include <sstream>

namespace fgeom::gf {

bool is_odd_prime(int q)
{
    if (q < 3 || q % 2 == 0)
        return false;
    for (int d = 3; d * d <= q; d += 2)
        if (q % d == 0)
            return false;
    return true;
}

Fq find_nonsquare(int q)
{
    if (!is_odd_prime(q))
        throw FieldError("field order must be an odd prime, got " + std::to_string(q));
    std::vector<bool> square(q, false);
    for (int x = 1; x < q; ++x)
        square[(x * x) % q] = true;
    for (int v = 2; v < q; ++v)
        if (!square[v])
            return Fq{static_cast<std::uint8_t>(v)};
    throw FieldError("no non-square found");
}

Field::Field(int q) : q_(q), n2_(q * q)
{
    if (q % 2 == 0)
        throw FieldError("even characteristic is not supported (q = " + std::to_string(q) + ")");
    if (!is_odd_prime(q))
        throw FieldError("q must be an odd prime, got " + std::to_string(q));
    if (q > kMaxFieldOrder)
        throw FieldError("q = " + std::to_string(q) + " exceeds the supported bound "
                         + std::to_string(kMaxFieldOrder));

    square_.assign(q, 0);
    for (int x = 1; x < q; ++x)
        square_[(x * x) % q] = 1;
    xi_ = find_nonsquare(q);
    inv_q_.assign(q, 0);
    for (int x = 1; x < q; ++x)
        for (int y = 1; y < q; ++y)
            if ((x * y) % q == 1)
                inv_q_[x] = static_cast<std::uint8_t>(y);

    const int xi = xi_.v;
    add_.resize(static_cast<std::size_t>(n2_) * n2_);
    mul_.resize(static_cast<std::size_t>(n2_) * n2_);
    neg_.resize(n2_);
    frob_.resize(n2_);
    for (int i = 0; i < n2_; ++i) {
        const int a0 = i / q, a1 = i % q;
        neg_[i] = static_cast<std::uint16_t>(mod(-a0) * q + mod(-a1));
        // theta^q = -theta
        frob_[i] = static_cast<std::uint16_t>(a0 * q + mod(-a1));
        for (int j = 0; j < n2_; ++j) {
            const int b0 = j / q, b1 = j % q;
            add_[i * n2_ + j] = static_cast<std::uint16_t>(mod(a0 + b0) * q + mod(a1 + b1));
            const int m0 = mod(a0 * b0 + xi * a1 * b1);
            const int m1 = mod(a0 * b1 + a1 * b0);
            mul_[i * n2_ + j] = static_cast<std::uint16_t>(m0 * q + m1);
        }
    }

    inv_.assign(n2_, 0);
    for (int i = 1; i < n2_; ++i)
        for (int j = 1; j < n2_; ++j)
            if (mul_[i * n2_ + j] == one().id) {
                inv_[i] = static_cast<std::uint16_t>(j);
                break;
            }

    // smallest element of multiplicative order q^2 - 1
    const int group = n2_ - 1;
    log_.assign(n2_, -1);
    for (int g = 1; g < n2_; ++g) {
        int order = 0;
        std::uint16_t x = one().id;
        do {
            x = mul_[x * n2_ + g];
            ++order;
        } while (x != one().id);
        if (order == group) {
            w_ = Fq2{static_cast<std::uint16_t>(g)};
            break;
        }
    }
    std::uint16_t x = one().id;
    for (int e = 0; e < group; ++e) {
        log_[x] = e;
        x = mul_[x * n2_ + w_.id];
    }
}

Fq Field::inv(Fq a) const
{
    if (a.v == 0)
        throw std::domain_error("inverse of zero in GF(q)");
    return Fq{inv_q_[a.v]};
}

Fq2 Field::inv(Fq2 a) const
{
    if (a.id == 0)
        throw std::domain_error("inverse of zero in GF(q^2)");
    return Fq2{inv_[a.id]};
}

Fq2 Field::pow(Fq2 a, long long e) const
{
    if (a.id == 0)
        return e == 0 ? one() : zero();
    const long long group = n2_ - 1;
    long long k = (static_cast<long long>(log_[a.id]) * (((e % group) + group) % group)) % group;
    Fq2 r = one();
    Fq2 base = w_;
    while (k > 0) {
        if (k & 1)
            r = mul(r, base);
        base = mul(base, base);
        k >>= 1;
    }
    return r;
}

int Field::log(Fq2 x) const
{
    if (x.id == 0)
        throw std::domain_error("logarithm of zero");
    return log_[x.id];
}

std::vector<Fq2> Field::elements() const
{
    std::vector<Fq2> out(n2_);
    for (int i = 0; i < n2_; ++i)
        out[i] = Fq2{static_cast<std::uint16_t>(i)};
    return out;
}

std::string Field::to_string(Fq2 x) const
{
    std::ostringstream os;
    os << '[' << int(c0(x).v) << ',' << int(c1(x).v) << ']';
    return os.str();
}

QPoly identity(const Field& F) { return {F.one(), F.zero()}; }
QPoly frobenius_poly(const Field& F) { return {F.zero(), F.one()}; }

Fq2 evaluate(const Field& F, const QPoly& P, Fq2 x)
{
    return F.add(F.mul(P.a, x), F.mul(P.b, F.frob(x)));
}

QPoly compose(const Field& F, const QPoly& outer, const QPoly& inner)
{
    // (a x + b x^q) o (c x + d x^q) = (ac + b d^q) x + (ad + b c^q) x^q  mod x^(q^2) - x
    const auto& [a, b] = outer;
    const auto& [c, d] = inner;
    return {F.add(F.mul(a, c), F.mul(b, F.frob(d))), F.add(F.mul(a, d), F.mul(b, F.frob(c)))};
}

QPoly add(const Field& F, const QPoly& P, const QPoly& R)
{
    return {F.add(P.a, R.a), F.add(P.b, R.b)};
}

QPoly negate(const Field& F, const QPoly& P) { return {F.neg(P.a), F.neg(P.b)}; }

QPoly scale(const Field& F, Fq2 c, const QPoly& P) { return {F.mul(c, P.a), F.mul(c, P.b)}; }

QPoly adjoint(const Field& F, const QPoly& P) { return {P.a, F.frob(P.b)}; }

Fq dickson_det(const Field& F, const QPoly& P) { return F.sub(F.norm(P.a), F.norm(P.b)); }

bool invertible(const Field& F, const QPoly& P) { return dickson_det(F, P).v != 0; }

QPoly invert(const Field& F, const QPoly& P)
{
    const Fq det = dickson_det(F, P);
    if (det.v == 0)
        throw SingularPolynomial("q-polynomial is not invertible (Dickson determinant vanishes)");
    // Dickson matrix inverse: [[a, b], [b^q, a^q]]^-1 = det^-1 [[a^q, -b], [-b^q, a]]
    const Fq2 d = F.inv(F.embed(det));
    return {F.mul(d, F.frob(P.a)), F.mul(d, F.neg(P.b))};
}

} // namespace fgeom::gf
