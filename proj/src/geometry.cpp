#include "fgeom/geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace fgeom::geom {

namespace {

int pow_int(int b, int e)
{
    int r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

// In-place reduced row echelon form; returns the rank.
int rref(const Field& F, std::vector<Vec6>& m)
{
    const int q = F.q();
    int rank = 0;
    for (int col = 0; col < 6 && rank < static_cast<int>(m.size()); ++col) {
        int piv = -1;
        for (int r = rank; r < static_cast<int>(m.size()); ++r)
            if (m[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(m[rank], m[piv]);
        const int inv = F.inv(Fq{m[rank][col]}).v;
        for (auto& x : m[rank])
            x = static_cast<std::uint8_t>((x * inv) % q);
        for (int r = 0; r < static_cast<int>(m.size()); ++r) {
            if (r == rank || m[r][col] == 0)
                continue;
            const int f = m[r][col];
            for (int k = 0; k < 6; ++k)
                m[r][k] = static_cast<std::uint8_t>((m[r][k] + (q - f) * m[rank][k]) % q);
        }
        ++rank;
    }
    m.resize(rank);
    return rank;
}

} // namespace

Vec6 to_coords(const Field& F, const HatVector& v)
{
    return {F.c0(v.x).v, F.c1(v.x).v, F.c0(v.y).v, F.c1(v.y).v, F.c0(v.z).v, F.c1(v.z).v};
}

HatVector from_coords(const Field& F, const Vec6& c)
{
    return {F.make(c[0], c[1]), F.make(c[2], c[3]), F.make(c[4], c[5])};
}

Vec6 vec_add(const Field& F, const Vec6& a, const Vec6& b)
{
    Vec6 r;
    for (int k = 0; k < 6; ++k)
        r[k] = F.add(Fq{a[k]}, Fq{b[k]}).v;
    return r;
}

Vec6 vec_scale(const Field& F, Fq c, const Vec6& a)
{
    Vec6 r;
    for (int k = 0; k < 6; ++k)
        r[k] = F.mul(c, Fq{a[k]}).v;
    return r;
}

bool is_zero(const Vec6& v)
{
    return std::all_of(v.begin(), v.end(), [](std::uint8_t x) { return x == 0; });
}

std::uint32_t encode(int q, const Vec6& v)
{
    std::uint32_t code = 0;
    for (auto x : v)
        code = code * q + x;
    return code;
}

Vec6 decode(int q, std::uint32_t code)
{
    Vec6 v;
    for (int k = 5; k >= 0; --k) {
        v[k] = static_cast<std::uint8_t>(code % q);
        code /= q;
    }
    return v;
}

Vec6 normalize(const Field& F, Vec6 v)
{
    for (auto x : v)
        if (x != 0)
            return vec_scale(F, F.inv(Fq{x}), v);
    return v;
}

Subspace Subspace::span_of(const Field& F, std::span<const Vec6> vectors)
{
    std::vector<Vec6> m(vectors.begin(), vectors.end());
    Subspace S;
    S.dim_ = rref(F, m);
    std::copy(m.begin(), m.end(), S.rows_.begin());
    return S;
}

Subspace Subspace::whole(const Field&)
{
    Subspace S;
    S.dim_ = 6;
    for (int k = 0; k < 6; ++k)
        S.rows_[k][k] = 1;
    return S;
}

bool Subspace::contains(const Field& F, const Vec6& v) const
{
    // reduce v against the pivots
    Vec6 r = v;
    for (int i = 0; i < dim_; ++i) {
        int piv = 0;
        while (rows_[i][piv] == 0)
            ++piv;
        const Fq f{r[piv]};
        if (f.v == 0)
            continue;
        for (int k = 0; k < 6; ++k)
            r[k] = F.sub(Fq{r[k]}, F.mul(f, Fq{rows_[i][k]})).v;
    }
    return is_zero(r);
}

bool Subspace::contains(const Field& F, const Subspace& S) const
{
    for (const auto& v : S.basis())
        if (!contains(F, v))
            return false;
    return true;
}

std::vector<Vec6> Subspace::points(const Field& F) const
{
    const int q = F.q();
    std::vector<Vec6> out;
    const int total = pow_int(q, dim_);
    for (int c = 1; c < total; ++c) {
        int t = c;
        Vec6 v{};
        bool lead_one = false;
        bool seen = false;
        // coefficients in row order, most significant first
        std::array<int, 6> coef{};
        for (int i = dim_ - 1; i >= 0; --i) {
            coef[i] = t % q;
            t /= q;
        }
        for (int i = 0; i < dim_; ++i) {
            if (!seen && coef[i] != 0) {
                seen = true;
                lead_one = coef[i] == 1;
            }
            if (coef[i] != 0)
                v = vec_add(F, v, vec_scale(F, Fq{static_cast<std::uint8_t>(coef[i])}, rows_[i]));
        }
        // rows are in echelon form, so the leading coefficient is the leading coordinate
        if (lead_one)
            out.push_back(v);
    }
    return out;
}

Subspace span(const Field& F, const Subspace& A, const Subspace& B)
{
    std::vector<Vec6> m(A.basis().begin(), A.basis().end());
    m.insert(m.end(), B.basis().begin(), B.basis().end());
    return Subspace::span_of(F, m);
}

Subspace span(const Field& F, std::initializer_list<Subspace> parts)
{
    std::vector<Vec6> m;
    for (const auto& S : parts)
        m.insert(m.end(), S.basis().begin(), S.basis().end());
    return Subspace::span_of(F, m);
}

Subspace annihilator(const Field& F, const Subspace& S)
{
    std::array<int, 6> pivot_of_col;
    pivot_of_col.fill(-1);
    for (int i = 0; i < S.dim(); ++i) {
        int piv = 0;
        while (S.row(i)[piv] == 0)
            ++piv;
        pivot_of_col[piv] = i;
    }
    std::vector<Vec6> null;
    for (int f = 0; f < 6; ++f) {
        if (pivot_of_col[f] >= 0)
            continue;
        Vec6 v{};
        v[f] = 1;
        for (int c = 0; c < 6; ++c)
            if (pivot_of_col[c] >= 0)
                v[c] = F.neg(Fq{S.row(pivot_of_col[c])[f]}).v;
        null.push_back(v);
    }
    return Subspace::span_of(F, null);
}

Subspace meet(const Field& F, const Subspace& A, const Subspace& B)
{
    return annihilator(F, span(F, annihilator(F, A), annihilator(F, B)));
}

QuadricForm::QuadricForm(const Field& F) : F_(F)
{
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            Vec6 a{}, b{};
            a[i] = 1;
            b[j] = 1;
            gram_[i][j] = bhat(from_coords(F, a), from_coords(F, b)).v;
        }
}

Fq QuadricForm::qhat(const HatVector& v) const
{
    // -x z^q - x^q z + y^(q+1)
    return F_.sub(F_.norm(v.y), F_.trace(F_.mul(v.x, F_.frob(v.z))));
}

Fq QuadricForm::bhat(const HatVector& u, const HatVector& v) const
{
    const Fq xz = F_.trace(F_.mul(u.x, F_.frob(v.z)));
    const Fq yy = F_.trace(F_.mul(u.y, F_.frob(v.y)));
    const Fq zx = F_.trace(F_.mul(u.z, F_.frob(v.x)));
    return F_.sub(yy, F_.add(xz, zx));
}

Fq QuadricForm::qhat(const Vec6& v) const { return qhat(from_coords(F_, v)); }

Fq QuadricForm::bhat(const Vec6& u, const Vec6& v) const
{
    const int q = F_.q();
    int acc = 0;
    for (int i = 0; i < 6; ++i) {
        if (u[i] == 0)
            continue;
        int row = 0;
        for (int j = 0; j < 6; ++j)
            row += gram_[i][j] * v[j];
        acc += u[i] * (row % q);
    }
    return F_.fq(acc);
}

Subspace QuadricForm::perp(const Subspace& S) const
{
    std::vector<Vec6> images;
    for (const auto& r : S.basis()) {
        Vec6 g{};
        for (int j = 0; j < 6; ++j) {
            int acc = 0;
            for (int i = 0; i < 6; ++i)
                acc += r[i] * gram_[i][j];
            g[j] = F_.fq(acc).v;
        }
        images.push_back(g);
    }
    return annihilator(F_, Subspace::span_of(F_, images));
}

Subspace QuadricForm::perp(const Vec6& v) const
{
    const Vec6 one[1] = {v};
    return perp(Subspace::span_of(F_, one));
}

std::uint64_t line_key(int q, const Subspace& S)
{
    const std::uint64_t base = static_cast<std::uint64_t>(pow_int(q, 6));
    std::uint64_t k = 0;
    for (int i = 0; i < 2; ++i)
        k = k * base + (i < S.dim() ? encode(q, S.row(i)) : 0);
    return k;
}

QuadricTables::QuadricTables(const Field& F) : F_(F), form_(F)
{
    const int q = F.q();
    if (q > kMaxTableOrder)
        throw std::length_error("quadric tables are limited to q <= " + std::to_string(kMaxTableOrder));
    const int total = pow_int(q, 6);
    point_of_code_.assign(total, -1);
    pole_of_code_.assign(total, -1);
    for (int code = 1; code < total; ++code) {
        const Vec6 v = decode(q, code);
        if (normalize(F, v) != v)
            continue;
        if (form_.qhat(v).v == 0)
            points_.push_back(v);
        else
            poles_.push_back(v);
    }
    for (int i = 0; i < num_points(); ++i)
        point_of_code_[encode(q, points_[i])] = i;
    for (int i = 0; i < num_poles(); ++i)
        pole_of_code_[encode(q, poles_[i])] = i;

    // a generator is found once, from its two smallest points
    struct Found {
        std::uint64_t key;
        Subspace space;
        std::vector<int> pts;
    };
    std::vector<Found> found;
    const int np = num_points();
    for (int i = 0; i < np; ++i) {
        for (int j = i + 1; j < np; ++j) {
            if (form_.bhat(points_[i], points_[j]).v != 0)
                continue;
            std::vector<int> pts{i};
            for (int t = 0; t < q; ++t) {
                const Vec6 v = vec_add(F, points_[j], vec_scale(F, Fq{static_cast<std::uint8_t>(t)}, points_[i]));
                pts.push_back(point_id(v));
            }
            std::sort(pts.begin(), pts.end());
            if (pts[0] != i || pts[1] != j)
                continue;
            const Vec6 basis[2] = {points_[i], points_[j]};
            Subspace S = Subspace::span_of(F, basis);
            found.push_back({line_key(q, S), S, std::move(pts)});
        }
    }
    std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) { return a.key < b.key; });
    through_.assign(np, {});
    for (std::size_t g = 0; g < found.size(); ++g) {
        gen_key_.push_back(found[g].key);
        gen_space_.push_back(found[g].space);
        for (int p : found[g].pts) {
            gen_points_.push_back(p);
            through_[p].push_back(static_cast<int>(g));
        }
    }
}

std::span<const int> QuadricTables::generator_points(int id) const
{
    const int k = q() + 1;
    return {gen_points_.data() + static_cast<std::size_t>(id) * k, static_cast<std::size_t>(k)};
}

int QuadricTables::point_id(const Vec6& v) const
{
    if (is_zero(v))
        return -1;
    return point_of_code_[encode(q(), normalize(F_, v))];
}

int QuadricTables::pole_id(const Vec6& v) const
{
    if (is_zero(v))
        return -1;
    return pole_of_code_[encode(q(), normalize(F_, v))];
}

int QuadricTables::generator_id(const Subspace& S) const
{
    if (S.dim() != 2)
        return -1;
    const auto key = line_key(q(), S);
    auto it = std::lower_bound(gen_key_.begin(), gen_key_.end(), key);
    if (it == gen_key_.end() || *it != key)
        return -1;
    return static_cast<int>(it - gen_key_.begin());
}

bool QuadricTables::concurrent(int g, int h) const
{
    auto a = generator_points(g);
    auto b = generator_points(h);
    // both lists are sorted
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j])
            return true;
        if (a[i] < b[j])
            ++i;
        else
            ++j;
    }
    return false;
}

bool QuadricTables::in_hyperplane(int pole, int g) const
{
    const auto& S = gen_space_[g];
    return form_.bhat(poles_[pole], S.row(0)).v == 0 && form_.bhat(poles_[pole], S.row(1)).v == 0;
}

std::vector<int> QuadricTables::disjoint_from(int g) const
{
    std::vector<char> hit(num_generators(), 0);
    for (int p : generator_points(g))
        for (int h : through_[p])
            hit[h] = 1;
    std::vector<int> out;
    for (int h = 0; h < num_generators(); ++h)
        if (!hit[h])
            out.push_back(h);
    return out;
}

std::vector<int> QuadricTables::hyperplanes_containing(int g) const
{
    std::vector<int> out;
    for (int p = 0; p < num_poles(); ++p)
        if (in_hyperplane(p, g))
            out.push_back(p);
    return out;
}

namespace {

nlohmann::ordered_json vec_json(const Vec6& v)
{
    auto a = nlohmann::ordered_json::array();
    for (auto x : v)
        a.push_back(int(x));
    return a;
}

} // namespace

std::string QuadricTables::dump_json(Fq2 mu, Fq2 delta) const
{
    nlohmann::ordered_json j;
    j["format"] = "fgeom-quadric-tables";
    j["version"] = 1;
    j["q"] = q();
    j["xi"] = int(F_.xi().v);
    j["w"] = {int(F_.c0(F_.generator()).v), int(F_.c1(F_.generator()).v)};
    j["mu"] = {int(F_.c0(mu).v), int(F_.c1(mu).v)};
    j["delta"] = {int(F_.c0(delta).v), int(F_.c1(delta).v)};
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : points_)
        pts.push_back(vec_json(p));
    j["points"] = std::move(pts);
    auto gens = nlohmann::ordered_json::array();
    for (const auto& S : gen_space_)
        gens.push_back({vec_json(S.row(0)), vec_json(S.row(1))});
    j["generators"] = std::move(gens);
    auto poles = nlohmann::ordered_json::array();
    for (const auto& p : poles_)
        poles.push_back(vec_json(p));
    j["poles"] = std::move(poles);
    return j.dump();
}

bool QuadricTables::matches_dump(const std::string& text, std::string* why) const
{
    auto fail = [&](const std::string& msg) {
        if (why)
            *why = msg;
        return false;
    };
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        return fail(std::string("unreadable table dump: ") + e.what());
    }
    if (j.value("format", "") != "fgeom-quadric-tables" || j.value("version", 0) != 1)
        return fail("unknown table dump format");
    if (j.value("q", 0) != q() || j.value("xi", -1) != int(F_.xi().v))
        return fail("table dump was written for another field");
    auto read = [&](const nlohmann::json& a) {
        Vec6 v{};
        for (int k = 0; k < 6; ++k)
            v[k] = static_cast<std::uint8_t>(a.at(k).get<int>());
        return v;
    };
    try {
        const auto& P = j.at("points");
        if (P.size() != points_.size())
            return fail("point count differs");
        for (std::size_t i = 0; i < P.size(); ++i)
            if (read(P[i]) != points_[i])
                return fail("point " + std::to_string(i) + " differs");
        const auto& G = j.at("generators");
        if (G.size() != gen_space_.size())
            return fail("generator count differs");
        for (std::size_t i = 0; i < G.size(); ++i)
            if (read(G[i].at(0)) != gen_space_[i].row(0) || read(G[i].at(1)) != gen_space_[i].row(1))
                return fail("generator " + std::to_string(i) + " differs");
        const auto& H = j.at("poles");
        if (H.size() != poles_.size())
            return fail("pole count differs");
        for (std::size_t i = 0; i < H.size(); ++i)
            if (read(H[i]) != poles_[i])
                return fail("pole " + std::to_string(i) + " differs");
    } catch (const std::exception& e) {
        return fail(std::string("malformed table dump: ") + e.what());
    }
    return true;
}

} // namespace fgeom::geom
