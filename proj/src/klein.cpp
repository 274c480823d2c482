#include "fgeom/klein.hpp"

#include <algorithm>

namespace fgeom::klein {

using geom::from_coords;
using geom::HatVector;
using geom::to_coords;

namespace {

QPoly from_values(const Field& F, Fq2 at_one, Fq2 at_theta)
{
    // a + b = F(1), (a - b) theta = F(theta)
    const Fq2 half = F.inv(F.make(2, 0));
    const Fq2 d = F.div(at_theta, F.theta());
    return {F.mul(half, F.add(at_one, d)), F.mul(half, F.sub(at_one, d))};
}

} // namespace

Subspace line_space(const Field& F, const GenLine& l)
{
    Vec6 rows[2];
    const Fq2 xs[2] = {F.one(), F.theta()};
    for (int k = 0; k < 2; ++k) {
        const HatVector v{gf::evaluate(F, l.F0, xs[k]), gf::evaluate(F, l.F1, xs[k]), gf::evaluate(F, l.F2, xs[k])};
        rows[k] = to_coords(F, v);
    }
    return Subspace::span_of(F, rows);
}

GenLine genline_from_space(const Field& F, const Subspace& S)
{
    if (S.dim() != 2)
        throw std::invalid_argument("a line needs a 2-dimensional subspace");
    const HatVector u = from_coords(F, S.row(0));
    const HatVector v = from_coords(F, S.row(1));
    return {from_values(F, u.x, v.x), from_values(F, u.y, v.y), from_values(F, u.z, v.z)};
}

GenLine canonical(const Field& F, const GenLine& l) { return genline_from_space(F, line_space(F, l)); }

bool totally_singular(const Field& F, const GenLine& l)
{
    const auto [f0, g0] = l.F0;
    const auto [f1, g1] = l.F1;
    const auto [f2, g2] = l.F2;
    // coefficient of x^2
    const Fq2 lhs = F.add(F.mul(f2, F.frob(g0)), F.mul(f0, F.frob(g2)));
    if (lhs != F.mul(f1, F.frob(g1)))
        return false;
    // coefficient of x^(q+1)
    const Fq n = F.add(F.norm(f1), F.norm(g1));
    const Fq t = F.trace(F.add(F.mul(f0, F.frob(f2)), F.mul(g0, F.frob(g2))));
    return n == t;
}

Subspace solid_space(const Field& F, const Solid& T)
{
    std::vector<Vec6> functionals(2);
    for (int k = 0; k < 6; ++k) {
        Vec6 e{};
        e[k] = 1;
        const HatVector X = from_coords(F, e);
        Fq2 s = gf::evaluate(F, T.H0, X.x);
        s = F.add(s, gf::evaluate(F, T.H1, X.y));
        s = F.add(s, gf::evaluate(F, T.H2, X.z));
        functionals[0][k] = F.c0(s).v;
        functionals[1][k] = F.c1(s).v;
    }
    return geom::annihilator(F, Subspace::span_of(F, functionals));
}

Solid solid_from_space(const Field& F, const Subspace& S)
{
    if (S.dim() != 4)
        throw std::invalid_argument("a solid needs a 4-dimensional subspace");
    const Subspace ann = geom::annihilator(F, S);
    // phi(X) = sum phi0 x0 + phi1 x1 = sum Tr(c X) with c = phi0/2 + theta phi1/(2 xi)
    const Fq2 half = F.inv(F.make(2, 0));
    const Fq2 half_xi = F.inv(F.make(2 * F.xi().v, 0));
    auto coeff = [&](const Vec6& phi, int i) {
        return F.add(F.mul(half, F.make(phi[2 * i], 0)), F.mul(F.theta(), F.mul(half_xi, F.make(phi[2 * i + 1], 0))));
    };
    QPoly H[3];
    for (int i = 0; i < 3; ++i) {
        const Fq2 c = coeff(ann.row(0), i);
        const Fq2 d = coeff(ann.row(1), i);
        H[i] = {F.add(c, F.mul(F.theta(), d)), F.add(F.frob(c), F.mul(F.theta(), F.frob(d)))};
    }
    return {H[0], H[1], H[2]};
}

bool solid_contains(const Field& F, const Solid& T, const GenLine& l)
{
    QPoly s = gf::compose(F, T.H0, l.F0);
    s = gf::add(F, s, gf::compose(F, T.H1, l.F1));
    s = gf::add(F, s, gf::compose(F, T.H2, l.F2));
    return s == gf::zero_poly();
}

Fq2 find_mu(const Field& F)
{
    const Fq minus_one = F.neg(Fq{1});
    for (auto x : F.elements())
        if (x.id != 0 && F.norm(x) == minus_one)
            return x;
    throw std::logic_error("norm map is not surjective");
}

KleinMap::KleinMap(const geom::QuadricTables& T, const herm::HermitianSurface& H)
    : T_(T), H_(H), mu_(find_mu(T.field()))
{
    const int nl = H.num_lines();
    line_image_.resize(nl);
    for (int i = 0; i < nl; ++i) {
        const auto& b = H.line_basis(i);
        line_image_[i] = T.point_id(rho_line(b[0], b[1]));
        if (line_image_[i] < 0)
            throw std::logic_error("image of an isotropic line is not singular");
    }
    const Field& F = T.field();
    point_image_.resize(H.num_points());
    preimage_.assign(T.num_generators(), -1);
    for (int p = 0; p < H.num_points(); ++p) {
        const auto& through = H.lines_through(p);
        const Vec6 rows[2] = {T.point(line_image_[through[0]]), T.point(line_image_[through[1]])};
        const int g = T.generator_id(Subspace::span_of(F, rows));
        if (g < 0)
            throw std::logic_error("lines through a point do not map onto a generator");
        point_image_[p] = g;
        if (preimage_[g] >= 0)
            throw std::logic_error("rho is not injective on points");
        preimage_[g] = p;
    }
}

Vec6 KleinMap::rho_line(const herm::Vec4& a, const herm::Vec4& b) const
{
    const Field& F = T_.field();
    if (herm::herm(F, a, a).id != 0 || herm::herm(F, b, b).id != 0 || herm::herm(F, a, b).id != 0)
        throw NotIsotropic("rho is only defined on totally isotropic lines");
    auto p = [&](int i, int j) { return F.sub(F.mul(a[i], b[j]), F.mul(a[j], b[i])); };
    const Fq2 mq = F.frob(mu_);
    std::array<Fq2, 6> Y{p(0, 1), F.neg(F.mul(mq, p(0, 2))), p(0, 3), F.neg(F.mul(mq, p(1, 2))), p(1, 3),
                         F.mul(mq, p(2, 3))};
    if (std::all_of(Y.begin(), Y.end(), [](Fq2 x) { return x.id == 0; }))
        throw NotIsotropic("rho needs two independent vectors");
    for (auto lambda : F.elements()) {
        if (lambda.id == 0)
            continue;
        bool ok = true;
        for (int k = 0; k < 3 && ok; ++k)
            ok = F.frob(F.mul(lambda, Y[2 * k])) == F.mul(lambda, Y[2 * k + 1]);
        if (ok)
            return geom::normalize(F, to_coords(F, {F.mul(lambda, Y[0]), F.mul(lambda, Y[2]), F.mul(lambda, Y[4])}));
    }
    throw std::logic_error("Plucker image does not rescale into V-hat");
}

const char* to_string(Perspectivity p)
{
    switch (p) {
    case Perspectivity::NotSpanning: return "not-spanning";
    case Perspectivity::Neither: return "neither";
    case Perspectivity::SemiPerspective: return "semi-perspective";
    case Perspectivity::Perspective: return "perspective";
    }
    return "?";
}

Perspectivity perspective_classify(const geom::QuadricForm& Q, const Subspace& l1, const Subspace& l2,
                                   const Subspace& l3)
{
    const Field& F = Q.field();
    if (l1 == l2 || l2 == l3 || l1 == l3)
        throw std::invalid_argument("perspective_classify needs three distinct generators");
    if (geom::span(F, {l1, l2, l3}).dim() < 6)
        return Perspectivity::NotSpanning;
    const Subspace* l[3] = {&l1, &l2, &l3};
    Subspace T[3];
    for (int i = 0; i < 3; ++i)
        T[i] = Q.perp(*l[i]);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && geom::meet(F, T[i], *l[j]).dim() != 0)
                throw DegenerateConfiguration("a tangent solid meets another line");
    Subspace sigma[3];
    for (int k = 0; k < 3; ++k) {
        const Subspace s = geom::meet(F, T[(k + 1) % 3], T[(k + 2) % 3]);
        sigma[k] = geom::span(F, s, *l[k]);
    }
    const int d = geom::meet(F, geom::meet(F, sigma[0], sigma[1]), sigma[2]).dim();
    if (d == 0)
        return Perspectivity::Neither;
    if (d == 1)
        return Perspectivity::SemiPerspective;
    return Perspectivity::Perspective;
}

bool perspective_algebraic(const Field& F, const GenLine& n)
{
    const auto [f0, g0] = n.F0;
    const auto [f2, g2] = n.F2;
    return F.in_base(F.add(F.mul(F.frob(f0), f2), F.mul(g0, F.frob(g2))));
}

bool perspective_fast(const KleinMap& K, int g1, int g2, int g3)
{
    const auto& H = K.surface();
    const Field& F = H.field();
    const int p[3] = {K.rho_inverse(g1), K.rho_inverse(g2), K.rho_inverse(g3)};
    return herm::zclass(F, H.point(p[0]), H.point(p[1]), H.point(p[2])).kind == herm::ZKind::E;
}

} // namespace fgeom::klein
