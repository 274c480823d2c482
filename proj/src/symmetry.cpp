#include "fgeom/symmetry.hpp"

#include "fgeom/scheme.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>

namespace fgeom::sym {

using gf::Field;
using gf::Fq2;
using Mat4 = std::array<Vec4, 4>;

namespace {

Vec4 frob(const Field& F, Vec4 v)
{
    for (auto& x : v)
        x = F.frob(x);
    return v;
}

// Matrix with the given vectors as columns.
Mat4 columns(const std::array<Vec4, 4>& v)
{
    Mat4 m{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m[i][j] = v[j][i];
    return m;
}

std::optional<Mat4> inverse(const Field& F, Mat4 m)
{
    Mat4 inv{};
    for (int i = 0; i < 4; ++i)
        inv[i][i] = F.one();
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        while (piv < 4 && m[piv][c].id == 0)
            ++piv;
        if (piv == 4)
            return std::nullopt;
        std::swap(m[c], m[piv]);
        std::swap(inv[c], inv[piv]);
        const Fq2 s = F.inv(m[c][c]);
        for (int j = 0; j < 4; ++j) {
            m[c][j] = F.mul(m[c][j], s);
            inv[c][j] = F.mul(inv[c][j], s);
        }
        for (int r = 0; r < 4; ++r) {
            if (r == c || m[r][c].id == 0)
                continue;
            const Fq2 f = m[r][c];
            for (int j = 0; j < 4; ++j) {
                m[r][j] = F.sub(m[r][j], F.mul(f, m[c][j]));
                inv[r][j] = F.sub(inv[r][j], F.mul(f, inv[c][j]));
            }
        }
    }
    return inv;
}

Vec4 mul(const Field& F, const Mat4& m, const Vec4& v)
{
    Vec4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out[i] = F.add(out[i], F.mul(m[i][j], v[j]));
    return out;
}

Mat4 mul(const Field& F, const Mat4& a, const Mat4& b)
{
    Mat4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                out[i][j] = F.add(out[i][j], F.mul(a[i][k], b[k][j]));
    return out;
}

// Five points in general position: every four are independent.
bool general_position(const Field& F, const std::array<Vec4, 5>& p)
{
    for (int skip = 0; skip < 5; ++skip) {
        std::vector<std::vector<Fq2>> rows;
        for (int i = 0; i < 5; ++i)
            if (i != skip)
                rows.emplace_back(p[i].begin(), p[i].end());
        if (herm::rank(F, rows) < 4)
            return false;
    }
    return true;
}

// The projectivity sending the frame src to dst, when both are frames.
std::optional<Mat4> frame_map(const Field& F, const std::array<Vec4, 5>& src, const std::array<Vec4, 5>& dst)
{
    const auto Si = inverse(F, columns({src[0], src[1], src[2], src[3]}));
    const auto D = columns({dst[0], dst[1], dst[2], dst[3]});
    const auto Di = inverse(F, D);
    if (!Si || !Di)
        return std::nullopt;
    const Vec4 a = mul(F, *Si, src[4]);
    const Vec4 b = mul(F, *Di, dst[4]);
    Mat4 scaled = D;
    for (int j = 0; j < 4; ++j) {
        if (a[j].id == 0 || b[j].id == 0)
            return std::nullopt;
        const Fq2 c = F.div(b[j], a[j]);
        for (int i = 0; i < 4; ++i)
            scaled[i][j] = F.mul(scaled[i][j], c);
    }
    return mul(F, scaled, *Si);
}

// h(Ax, Ay) = lambda h(x, y)^phi on the standard basis.
bool preserves_form(const Field& F, const Collineation& g)
{
    std::array<Vec4, 4> img;
    for (int j = 0; j < 4; ++j) {
        Vec4 e{};
        e[j] = F.one();
        img[j] = apply(F, g, e);
    }
    std::optional<Fq2> lambda;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Vec4 ei{}, ej{};
            ei[i] = F.one();
            ej[j] = F.one();
            Fq2 J = herm::herm(F, ei, ej);
            if (g.frobenius)
                J = F.frob(J);
            const Fq2 M = herm::herm(F, img[i], img[j]);
            if (J.id == 0) {
                if (M.id != 0)
                    return false;
                continue;
            }
            const Fq2 l = F.div(M, J);
            if (l.id == 0 || (lambda && *lambda != l))
                return false;
            lambda = l;
        }
    return true;
}

int find(std::vector<int>& parent, int x)
{
    while (parent[x] != x)
        x = parent[x] = parent[parent[x]];
    return x;
}

} // namespace

Vec4 apply(const Field& F, const Collineation& g, const Vec4& x)
{
    return mul(F, g.A, g.frobenius ? frob(F, x) : x);
}

std::vector<Collineation> setwise_stabilizer(const herm::HermitianSurface& H, int P, const std::vector<int>& X)
{
    const Field& F = H.field();
    const int n = static_cast<int>(X.size());
    std::vector<int> rel(static_cast<std::size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            rel[a * n + b] = scheme::classify_point_pair(H, P, X[a], X[b]);
    std::vector<char> member(H.num_points(), 0);
    for (int x : X)
        member[x] = 1;

    // source frame P, X[f1..f4]
    std::array<int, 4> f{-1, -1, -1, -1};
    bool have = false;
    for (int a = 0; a < n && !have; ++a)
        for (int b = a + 1; b < n && !have; ++b)
            for (int c = b + 1; c < n && !have; ++c)
                for (int d = c + 1; d < n && !have; ++d)
                    if (general_position(F, {H.point(P), H.point(X[a]), H.point(X[b]), H.point(X[c]), H.point(X[d])})) {
                        f = {a, b, c, d};
                        have = true;
                    }
    if (!have)
        return {};

    std::vector<Collineation> out;
    std::set<std::vector<int>> seen;
    for (int phi = 0; phi < 2; ++phi) {
        auto src_vec = [&](int id) { return phi ? frob(F, H.point(id)) : H.point(id); };
        const std::array<Vec4, 5> src{src_vec(P), src_vec(X[f[0]]), src_vec(X[f[1]]), src_vec(X[f[2]]),
                                      src_vec(X[f[3]])};
        std::array<int, 4> v{};
        auto consistent = [&](int depth) {
            for (int i = 0; i < depth; ++i)
                if (v[i] == v[depth] || rel[v[i] * n + v[depth]] != rel[f[i] * n + f[depth]])
                    return false;
            return true;
        };
        auto rec = [&](auto&& self, int depth) -> void {
            if (depth == 4) {
                const std::array<Vec4, 5> dst{H.point(P), H.point(X[v[0]]), H.point(X[v[1]]), H.point(X[v[2]]),
                                              H.point(X[v[3]])};
                const auto A = frame_map(F, src, dst);
                if (!A)
                    return;
                Collineation g{*A, phi == 1};
                if (!preserves_form(F, g))
                    return;
                std::vector<int> perm(n);
                for (int i = 0; i < n; ++i) {
                    const int img = H.point_id(herm::normalize(F, apply(F, g, H.point(X[i]))));
                    if (img < 0 || !member[img])
                        return;
                    perm[i] = img;
                }
                if (seen.insert(perm).second)
                    out.push_back(g);
                return;
            }
            for (int c = 0; c < n; ++c) {
                v[depth] = c;
                if (consistent(depth))
                    self(self, depth + 1);
            }
        };
        rec(rec, 0);
    }
    return out;
}

std::vector<std::vector<int>> orbits(const herm::HermitianSurface& H, const std::vector<Collineation>& gens,
                                     const std::vector<int>& X)
{
    const Field& F = H.field();
    const int n = static_cast<int>(X.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<int> pos(H.num_points(), -1);
    for (int i = 0; i < n; ++i)
        pos[X[i]] = i;
    for (const auto& g : gens)
        for (int i = 0; i < n; ++i) {
            const int img = H.point_id(herm::normalize(F, apply(F, g, H.point(X[i]))));
            if (img < 0 || pos[img] < 0)
                throw std::logic_error("collineation does not fix the set");
            parent[find(parent, i)] = find(parent, pos[img]);
        }
    std::vector<std::vector<int>> out;
    std::vector<int> slot(n, -1);
    for (int i = 0; i < n; ++i) {
        const int r = find(parent, i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[slot[r]].push_back(i);
    }
    return out;
}

std::vector<std::vector<int>> uset_orbits(const Context& ctx, const std::vector<int>& U)
{
    const auto& K = ctx.klein();
    std::vector<int> pts;
    for (int g : U)
        pts.push_back(K.rho_inverse(g));
    const auto gens = setwise_stabilizer(ctx.surface(), ctx.base_point(), pts);
    auto orb = orbits(ctx.surface(), gens, pts);
    for (auto& o : orb)
        for (auto& i : o)
            i = U[i];
    return orb;
}

} // namespace fgeom::sym
