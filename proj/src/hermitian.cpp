#include "fgeom/hermitian.hpp"

#include <json.hpp>

#include <algorithm>

namespace fgeom::herm {

Fq2 herm(const Field& F, const Vec4& x, const Vec4& y)
{
    Fq2 r = F.mul(x[0], F.frob(y[3]));
    r = F.sub(r, F.mul(x[1], F.frob(y[1])));
    r = F.sub(r, F.mul(x[2], F.frob(y[2])));
    return F.add(r, F.mul(x[3], F.frob(y[0])));
}

bool is_zero(const Vec4& v)
{
    return std::all_of(v.begin(), v.end(), [](Fq2 x) { return x.id == 0; });
}

Vec4 normalize(const Field& F, Vec4 v)
{
    for (auto x : v)
        if (x.id != 0)
            return scale(F, F.inv(x), v);
    return v;
}

Vec4 add(const Field& F, const Vec4& a, const Vec4& b)
{
    return {F.add(a[0], b[0]), F.add(a[1], b[1]), F.add(a[2], b[2]), F.add(a[3], b[3])};
}

Vec4 scale(const Field& F, Fq2 c, const Vec4& a)
{
    return {F.mul(c, a[0]), F.mul(c, a[1]), F.mul(c, a[2]), F.mul(c, a[3])};
}

std::uint64_t encode(const Field& F, const Vec4& v)
{
    std::uint64_t code = 0;
    for (auto x : v)
        code = code * F.order2() + x.id;
    return code;
}

int rank(const Field& F, std::vector<std::vector<Fq2>> m)
{
    if (m.empty())
        return 0;
    const std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][c].id == 0)
            ++piv;
        if (piv == m.size())
            continue;
        std::swap(m[r], m[piv]);
        const Fq2 inv = F.inv(m[r][c]);
        for (auto& x : m[r])
            x = F.mul(x, inv);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c].id == 0)
                continue;
            const Fq2 f = m[i][c];
            for (std::size_t k = 0; k < cols; ++k)
                m[i][k] = F.sub(m[i][k], F.mul(f, m[r][k]));
        }
        ++r;
    }
    return static_cast<int>(r);
}

ZClass zclass(const Field& F, const Vec4& p, const Vec4& q, const Vec4& r)
{
    const Fq2 w = F.mul(F.mul(herm(F, p, q), herm(F, q, r)), herm(F, r, p));
    if (w.id == 0)
        return {};
    const int label = F.coset_label(w);
    if (label == 0)
        return {ZKind::E, label};
    if (2 * label == F.q() + 1)
        return {ZKind::T, label};
    return {ZKind::Gamma, label};
}

const char* to_string(ZKind k)
{
    switch (k) {
    case ZKind::Zero: return "zero";
    case ZKind::E: return "e";
    case ZKind::T: return "t";
    case ZKind::Gamma: return "gamma";
    }
    return "?";
}

bool degenerate_span(const Field& F, const Vec4& p, const Vec4& q, const Vec4& r)
{
    if (herm(F, p, q).id == 0 || herm(F, q, r).id == 0 || herm(F, r, p).id == 0)
        throw std::invalid_argument("degenerate_span needs pairwise non-collinear points");
    const Vec4* v[3] = {&p, &q, &r};
    std::vector<std::vector<Fq2>> gram(3, std::vector<Fq2>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            gram[i][j] = herm(F, *v[i], *v[j]);
    return rank(F, gram) < 3;
}

HermitianSurface::HermitianSurface(const Field& F) : F_(F)
{
    const int n = F.order2();
    // canonical vectors: zeros, then a 1, then anything
    for (int lead = 0; lead < 4; ++lead) {
        const int free = 3 - lead;
        long long total = 1;
        for (int k = 0; k < free; ++k)
            total *= n;
        for (long long c = 0; c < total; ++c) {
            Vec4 v{};
            v[lead] = F.one();
            long long t = c;
            for (int k = 3; k > lead; --k) {
                v[k] = Fq2{static_cast<std::uint16_t>(t % n)};
                t /= n;
            }
            if (herm(F, v, v).id == 0)
                points_.push_back(v);
        }
    }
    std::sort(points_.begin(), points_.end(),
              [&](const Vec4& a, const Vec4& b) { return encode(F, a) < encode(F, b); });
    codes_.reserve(points_.size());
    for (const auto& p : points_)
        codes_.push_back(encode(F, p));

    through_.assign(points_.size(), {});
    const auto elems = F.elements();
    for (int i = 0; i < num_points(); ++i) {
        const Vec4& P = points_[i];
        // P^perp is the kernel of x -> h(x, P), with coefficients c
        const Vec4 c{F.frob(P[3]), F.neg(F.frob(P[1])), F.neg(F.frob(P[2])), F.frob(P[0])};
        int k = 0;
        while (c[k].id == 0)
            ++k;
        std::vector<Vec4> kernel;
        for (int j = 0; j < 4; ++j) {
            if (j == k)
                continue;
            Vec4 e{};
            e[j] = F.one();
            e[k] = F.neg(F.div(c[j], c[k]));
            kernel.push_back(e);
        }
        // complete P to a basis (P, u, v) of P^perp
        std::vector<Vec4> comp;
        for (const auto& e : kernel) {
            std::vector<std::vector<Fq2>> rows{{P.begin(), P.end()}};
            for (const auto& x : comp)
                rows.emplace_back(x.begin(), x.end());
            rows.emplace_back(e.begin(), e.end());
            if (rank(F, rows) == static_cast<int>(rows.size()))
                comp.push_back(e);
            if (comp.size() == 2)
                break;
        }
        // lines through P are <P, a u + b v> with a u + b v isotropic
        std::vector<Vec4> dirs;
        dirs.push_back(comp[0]);
        for (auto a : elems)
            dirs.push_back(add(F, scale(F, a, comp[0]), comp[1]));
        for (const auto& w : dirs) {
            if (herm(F, w, w).id != 0)
                continue;
            std::vector<int> pts{i};
            for (auto t : elems)
                pts.push_back(point_id(add(F, w, scale(F, t, P))));
            std::sort(pts.begin(), pts.end());
            if (pts[0] != i)
                continue;
            const int line = num_lines();
            line_basis_.push_back({P, normalize(F, w)});
            for (int p : pts)
                through_[p].push_back(line);
            line_points_.push_back(std::move(pts));
        }
    }
}

int HermitianSurface::point_id(const Vec4& v) const
{
    if (is_zero(v))
        return -1;
    const auto code = encode(F_, normalize(F_, v));
    auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
    if (it == codes_.end() || *it != code)
        return -1;
    return static_cast<int>(it - codes_.begin());
}

bool HermitianSurface::collinear(int a, int b) const
{
    return herm(F_, points_[a], points_[b]).id == 0;
}

Fq special_nu(const Field& F)
{
    if (F.q() % 4 == 3)
        return Fq{1};
    return F.xi();
}

Fq2 special_delta(const Field& F)
{
    const Fq nu = special_nu(F);
    if (nu.v == 1)
        return F.one();
    for (auto d : F.elements())
        if (d.id != 0 && F.norm(d) == nu)
            return d;
    throw ConstructionFailure("no element of the required norm");
}

SpecialSet build_special_set(const Field& F)
{
    const int q = F.q();
    const Fq2 delta = special_delta(F);
    std::vector<Vec4> pts;
    for (int x0 = 0; x0 < q; ++x0)
        for (int x1 = 0; x1 < q; ++x1)
            for (int x2 = 0; x2 < q; ++x2)
                for (int x3 = 0; x3 < q; ++x3) {
                    Vec4 v{F.make(x0, 0), F.make(x1, 0), F.mul(delta, F.make(x2, 0)), F.make(x3, 0)};
                    if (is_zero(v) || herm(F, v, v).id != 0)
                        continue;
                    v = normalize(F, v);
                    if (std::find(pts.begin(), pts.end(), v) == pts.end())
                        pts.push_back(v);
                }
    if (static_cast<int>(pts.size()) != q * q + 1)
        throw ConstructionFailure("special set has " + std::to_string(pts.size()) + " points, expected "
                                  + std::to_string(q * q + 1));
    std::sort(pts.begin(), pts.end(), [&](const Vec4& a, const Vec4& b) { return encode(F, a) < encode(F, b); });
    return {std::move(pts), true};
}

SpecialSetReport validate_special_set(const HermitianSurface& H, const SpecialSet& S)
{
    const Field& F = H.field();
    const int q = F.q();
    SpecialSetReport rep;
    rep.sizes_ok = static_cast<int>(S.points.size()) == q * q + 1;
    std::vector<int> ids;
    rep.on_surface = true;
    for (const auto& p : S.points) {
        const int id = H.point_id(p);
        if (id < 0)
            rep.on_surface = false;
        else
            ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        rep.sizes_ok = false;
    rep.pairwise_noncollinear = true;
    for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b)
            if (H.collinear(ids[a], ids[b]))
                rep.pairwise_noncollinear = false;
    for (int x = 0; x < H.num_points(); ++x) {
        if (std::binary_search(ids.begin(), ids.end(), x))
            continue;
        int count = 0;
        for (int s : ids)
            if (H.collinear(x, s))
                ++count;
        if (count != 0 && count != 2)
            rep.violations.push_back(x);
    }
    rep.passed = rep.sizes_ok && rep.on_surface && rep.pairwise_noncollinear && rep.violations.empty();
    return rep;
}

bool all_triples_e(const Field& F, const SpecialSet& S)
{
    const auto& P = S.points;
    for (std::size_t a = 0; a < P.size(); ++a)
        for (std::size_t b = a + 1; b < P.size(); ++b)
            for (std::size_t c = b + 1; c < P.size(); ++c)
                if (zclass(F, P[a], P[b], P[c]).kind != ZKind::E)
                    return false;
    return true;
}

std::string special_set_to_json(const Field& F, const SpecialSet& S)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& p : S.points) {
        auto row = nlohmann::ordered_json::array();
        for (auto x : p)
            row.push_back({int(F.c0(x).v), int(F.c1(x).v)});
        j.push_back(row);
    }
    return j.dump();
}

SpecialSet special_set_from_json(const Field& F, const std::string& text)
{
    SpecialSet S;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("special set is not valid JSON: ") + e.what());
    }
    if (!j.is_array())
        throw std::runtime_error("special set must be a JSON array");
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != 4)
            throw std::runtime_error("each point needs four coordinates");
        Vec4 v;
        for (int k = 0; k < 4; ++k) {
            const auto& c = row[k];
            if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer())
                throw std::runtime_error("coordinates are [a0, a1] integer pairs");
            const int a0 = c[0].get<int>(), a1 = c[1].get<int>();
            if (a0 < 0 || a0 >= F.q() || a1 < 0 || a1 >= F.q())
                throw std::runtime_error("coordinate out of range for q = " + std::to_string(F.q()));
            v[k] = F.make(a0, a1);
        }
        if (is_zero(v))
            throw std::runtime_error("zero vector is not a point");
        S.points.push_back(normalize(F, v));
    }
    return S;
}

} // namespace fgeom::herm
