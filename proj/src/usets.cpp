#include "fgeom/usets.hpp"

#include "fgeom/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace fgeom::usets {

using geom::Vec6;
using gf::Fq2;

namespace {

Subspace point_space(const gf::Field& F, const Vec6& v)
{
    const Vec6 rows[1] = {v};
    return Subspace::span_of(F, rows);
}

bool in_sorted(const std::vector<int>& v, int x) { return std::binary_search(v.begin(), v.end(), x); }

// Characteristic vectors of the seven parts, as 0/1 integers per vertex.
struct Indicators {
    std::array<std::vector<long long>, kParts> chi;
    explicit Indicators(const std::vector<Part>& labels)
    {
        for (auto& c : chi)
            c.assign(labels.size(), 0);
        for (std::size_t x = 0; x < labels.size(); ++x)
            chi[static_cast<int>(labels[x])][x] = 1;
    }
    long long at(Part p, std::size_t x) const { return chi[static_cast<int>(p)][x]; }
};

bool compare(const std::vector<long long>& got, const std::vector<long long>& want, const std::string& name,
             std::string* why)
{
    for (std::size_t x = 0; x < got.size(); ++x)
        if (got[x] != want[x]) {
            if (why) {
                std::ostringstream os;
                os << name << " differs at vertex " << x << ": " << got[x] << " vs " << want[x];
                *why = os.str();
            }
            return false;
        }
    return true;
}

} // namespace

std::vector<int> flag_poles(const QuadricTables& T, const Flag& f)
{
    const auto& Q = T.form();
    const Vec6& b = T.point(f.B);
    std::vector<int> out;
    for (int p = 0; p < T.num_poles(); ++p)
        if (Q.bhat(T.pole(p), b).v == 0 && !T.in_hyperplane(p, f.l))
            out.push_back(p);
    return out;
}

std::vector<int> cone_generators(const QuadricTables& T, int B, int pole)
{
    if (T.form().bhat(T.pole(pole), T.point(B)).v != 0)
        throw DegenerateHyperplane("the point is not in the hyperplane");
    std::vector<int> out;
    for (int g : T.generators_through(B))
        if (T.in_hyperplane(pole, g))
            out.push_back(g);
    std::sort(out.begin(), out.end());
    if (static_cast<int>(out.size()) != T.q() + 1)
        throw std::logic_error("cone over a conic with the wrong number of generators");
    return out;
}

Subspace sigma_line(const QuadricTables& T, const Flag& f, int pole)
{
    const auto& F = T.field();
    const Subspace P = point_space(F, T.pole(pole));
    return geom::meet(F, geom::span(F, T.generator(f.l), P), T.form().perp(P));
}

std::vector<int> involution(const QuadricTables& T, const Flag& f, int pole, const std::vector<int>& cone)
{
    const auto& F = T.field();
    const Subspace sigma = sigma_line(T, f, pole);
    if (sigma.dim() != 2 || !sigma.contains(F, T.point(f.B)))
        throw std::logic_error("sigma is not a line through B");
    std::vector<int> partner(cone.size(), -1);
    for (std::size_t k = 0; k < cone.size(); ++k) {
        const Subspace plane = geom::span(F, T.generator(cone[k]), sigma);
        if (plane.dim() != 3)
            throw std::logic_error("sigma lies on a cone generator");
        for (std::size_t j = 0; j < cone.size(); ++j) {
            if (j == k || !plane.contains(F, T.generator(cone[j])))
                continue;
            if (partner[k] >= 0)
                throw std::logic_error("plane through sigma holds three cone generators");
            partner[k] = static_cast<int>(j);
        }
        if (partner[k] < 0)
            throw std::logic_error("sigma is tangent to the cone");
    }
    return partner;
}

USet build_uset(const QuadricTables& T, const Flag& f, int pole, int p1)
{
    const auto cone = cone_generators(T, f.B, pole);
    const auto it = std::find(cone.begin(), cone.end(), p1);
    if (it == cone.end())
        throw std::invalid_argument("p1 is not a cone generator");
    const auto partner = involution(T, f, pole, cone);
    USet u;
    u.flag = f;
    u.pole = pole;
    u.p1 = p1;
    u.p2 = cone[partner[it - cone.begin()]];
    for (int side = 0; side < 2; ++side) {
        const int p = side == 0 ? u.p1 : u.p2;
        auto& O = side == 0 ? u.O1 : u.O2;
        for (int x : T.generator_points(p)) {
            if (x == f.B)
                continue;
            for (int g : T.generators_through(x))
                if (g != p && T.in_hyperplane(pole, g))
                    O.push_back(g);
        }
        std::sort(O.begin(), O.end());
        if (static_cast<int>(O.size()) != T.q() * T.q())
            throw std::logic_error("a U-set half does not have q^2 lines");
    }
    return u;
}

void canonicalize(USet& u)
{
    if (u.O2 < u.O1) {
        std::swap(u.O1, u.O2);
        std::swap(u.p1, u.p2);
    }
}

std::vector<USet> usets_on_flag(const QuadricTables& T, const Flag& f, int threads)
{
    const auto poles = flag_poles(T, f);
    std::vector<std::vector<USet>> per_pole(poles.size());
    parallel_for(static_cast<int>(poles.size()), threads, [&](int b, int e) {
        for (int k = b; k < e; ++k) {
            const auto cone = cone_generators(T, f.B, poles[k]);
            const auto partner = involution(T, f, poles[k], cone);
            for (std::size_t j = 0; j < cone.size(); ++j) {
                if (partner[j] < static_cast<int>(j))
                    continue;
                USet u = build_uset(T, f, poles[k], cone[j]);
                canonicalize(u);
                per_pole[k].push_back(std::move(u));
            }
        }
    });
    std::vector<USet> out;
    for (auto& v : per_pole)
        for (auto& u : v)
            out.push_back(std::move(u));
    return out;
}

std::vector<USet> usets_on_line(const QuadricTables& T, int l, int threads)
{
    std::vector<USet> out;
    for (int B : T.generator_points(l)) {
        auto part = usets_on_flag(T, {B, l}, threads);
        std::move(part.begin(), part.end(), std::back_inserter(out));
    }
    return out;
}

const char* to_string(Part p)
{
    static const char* names[] = {"O1", "O2", "V", "J1", "J2", "W", "Z"};
    return names[static_cast<int>(p)];
}

std::vector<Part> classify_partition(const QuadricTables& T, const Scheme& X, const USet& u)
{
    const auto cone = cone_generators(T, u.flag.B, u.pole);
    std::vector<Part> out(X.size());
    for (int i = 0; i < X.size(); ++i) {
        const int m = X.vertex(i);
        if (T.in_hyperplane(u.pole, m)) {
            out[i] = in_sorted(u.O1, m) ? Part::O1 : in_sorted(u.O2, m) ? Part::O2 : Part::V;
            continue;
        }
        if (T.concurrent(m, u.p1))
            out[i] = Part::J1;
        else if (T.concurrent(m, u.p2))
            out[i] = Part::J2;
        else if (std::any_of(cone.begin(), cone.end(), [&](int g) { return T.concurrent(m, g); }))
            out[i] = Part::W;
        else
            out[i] = Part::Z;
    }
    return out;
}

std::vector<long long> signed_vector(const Scheme& X, const USet& u)
{
    std::vector<long long> v(X.size(), 0);
    for (int g : u.O1)
        v[X.index_of(g)] = 1;
    for (int g : u.O2)
        v[X.index_of(g)] = -1;
    return v;
}

bool lemma_identities(const Scheme& X, const USet& u, const std::vector<Part>& labels, std::string* why,
                      bool as_printed)
{
    const long long q = X.q();
    const Indicators I(labels);
    const int n = X.size();
    for (int side = 0; side < 2; ++side) {
        const Part O = side == 0 ? Part::O1 : Part::O2;
        const Part Oo = side == 0 ? Part::O2 : Part::O1;
        const Part J = side == 0 ? Part::J1 : Part::J2;
        const Part Jo = side == 0 ? Part::J2 : Part::J1;
        std::vector<long long> chi(n, 0);
        for (int g : side == 0 ? u.O1 : u.O2)
            chi[X.index_of(g)] = 1;
        const auto got = X.apply_all(chi);
        std::array<std::vector<long long>, 6> want;
        for (auto& w : want)
            w.assign(n, 0);
        for (int x = 0; x < n; ++x) {
            const long long o = I.at(O, x), oo = I.at(Oo, x), v = I.at(Part::V, x), j = I.at(J, x),
                            jo = I.at(Jo, x), w = I.at(Part::W, x), z = I.at(Part::Z, x);
            want[1][x] = 1 + (q - 2) * o + (q - 1) * (oo + v + j) - (jo + w);
            want[2][x] = 1 - o - oo - v - jo - w - z;
            want[3][x] = 1 + (q * q - q - 1) * o - (oo + v) + (q * q - q - 2) * j + (q - 1) * (jo + w) + (q - 2) * z;
            want[4][x] = (q * q - 1) * (1 - o - oo - j) - (q - 1) * (jo + v + 2 * z) - (2 * q - 1) * w;
            // A_5 also vanishes on V; the printed version lacks that term
            want[5][x] = 1 - o - (as_printed ? 0 : v) + (q * q - q - 1) * oo - j - jo + (q - 1) * w + (q - 2) * z;
        }
        for (int i = 1; i <= 5; ++i)
            if (!compare(got[i], want[i], std::string("chi_") + to_string(O) + " A" + std::to_string(i), why))
                return false;
    }
    return true;
}

bool corollary_identities(const Scheme& X, const USet& u, const std::vector<Part>& labels, std::string* why)
{
    const long long q = X.q();
    const Indicators I(labels);
    const int n = X.size();
    const auto v = signed_vector(X, u);
    const auto got = X.apply_all(v);
    std::array<std::vector<long long>, 6> want;
    for (auto& w : want)
        w.assign(n, 0);
    for (int x = 0; x < n; ++x) {
        const long long d = I.at(Part::J1, x) - I.at(Part::J2, x);
        want[1][x] = -v[x] + q * d;
        want[2][x] = d;
        want[3][x] = q * (q - 1) * v[x] + (q * q - 2 * q - 1) * d;
        want[4][x] = -(q * q - q) * d;
        want[5][x] = -(q * q - q) * v[x];
    }
    for (int i = 1; i <= 5; ++i)
        if (!compare(got[i], want[i], "v A" + std::to_string(i), why))
            return false;
    return true;
}

klein::GenLine standard_ly(const gf::Field& F, Fq2 y)
{
    const Fq2 two_xi = F.embed(F.mul(F.fq(2), F.xi()));
    const Fq2 ny = F.embed(F.norm(y));
    const Fq2 c = F.mul(F.make(2, 0), F.mul(F.theta(), y));
    return {{F.sub(two_xi, ny), F.add(two_xi, ny)}, {c, F.neg(c)}, {two_xi, F.neg(two_xi)}};
}

Flag standard_flag(const QuadricTables& T)
{
    const auto& F = T.field();
    const int B = T.point_id(geom::normalize(F, geom::to_coords(F, {F.one(), F.zero(), F.zero()})));
    const klein::GenLine l{gf::identity(F), gf::zero_poly(), gf::zero_poly()};
    return {B, T.generator_id(klein::line_space(F, l))};
}

std::vector<Check> standard_position_checks(const QuadricTables& T)
{
    const auto& F = T.field();
    const int q = T.q();
    const Flag f = standard_flag(T);
    const auto poles = flag_poles(T, f);
    long long count_bad = 0, cone_bad = 0, inv_bad = 0, fixed_bad = 0, singular_bad = 0, remark_bad = 0;
    for (int p : poles) {
        const auto h = geom::from_coords(F, T.pole(p));
        // rescale to third coordinate theta
        const Fq2 c = F.div(F.theta(), h.z);
        const Fq2 alpha = F.mul(c, h.x), beta = F.mul(c, h.y);
        const Fq2 konst = F.mul(F.theta(), F.sub(F.frob(alpha), alpha));
        auto eq10 = [&](Fq2 y) {
            const Fq2 lin = F.embed(F.trace(F.mul(F.frob(beta), y)));
            return F.add(F.sub(F.embed(F.norm(y)), lin), konst).id == 0;
        };
        std::vector<Fq2> ys;
        for (auto y : F.elements())
            if (eq10(y))
                ys.push_back(y);
        if (static_cast<int>(ys.size()) != q + 1)
            ++count_bad;
        if (eq10(beta))
            ++fixed_bad;
        const auto cone = cone_generators(T, f.B, p);
        const auto partner = involution(T, f, p, cone);
        std::vector<int> closed;
        for (auto y : ys) {
            const auto ly = standard_ly(F, y);
            if (!klein::totally_singular(F, ly))
                ++singular_bad;
            closed.push_back(T.generator_id(klein::line_space(F, ly)));
        }
        auto sorted = closed;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != cone) {
            ++cone_bad;
            continue;
        }
        for (std::size_t k = 0; k < ys.size(); ++k) {
            const Fq2 image = F.sub(F.add(beta, beta), ys[k]);
            const int want = T.generator_id(klein::line_space(F, standard_ly(F, image)));
            const int at = static_cast<int>(std::find(cone.begin(), cone.end(), closed[k]) - cone.begin());
            if (cone[partner[at]] != want)
                ++inv_bad;
        }
        // the other hyperplanes whose pole is on <B, pole>
        const Subspace sigma = sigma_line(T, f, p);
        for (int lam = 1; lam < q; ++lam) {
            const Vec6 w = geom::normalize(F, geom::vec_add(F, T.pole(p), geom::vec_scale(F, F.fq(lam), T.point(f.B))));
            const int p2 = T.pole_id(w);
            if (p2 < 0 || cone_generators(T, f.B, p2) != cone || involution(T, f, p2, cone) != partner ||
                !(sigma_line(T, f, p2) == sigma))
                ++remark_bad;
        }
    }
    auto mk = [](std::string id, std::string claim, long long bad, long long total) {
        std::ostringstream os;
        os << bad << " failures over " << total << " hyperplanes";
        return Check{std::move(id), std::move(claim), bad == 0, os.str()};
    };
    const long long n = static_cast<long long>(poles.size());
    std::vector<Check> out;
    out.push_back(Check{"usets.standard.hyperplanes", "q^3(q-1) non-degenerate hyperplanes through B avoid l",
                        n == static_cast<long long>(q) * q * q * (q - 1), std::to_string(n) + " hyperplanes"});
    out.push_back(mk("usets.standard.solutions", "y^{q+1} - (beta^q y + beta y^q) + theta(alpha^q - alpha) = 0 has q+1 roots",
                     count_bad, n));
    out.push_back(mk("usets.standard.ly-singular", "every l_y is totally singular", singular_bad, n));
    out.push_back(mk("usets.standard.cone", "cone generators through B in Pi are the lines l_y", cone_bad, n));
    out.push_back(mk("usets.standard.involution", "sigma-tilde maps l_y to l_{2 beta - y}", inv_bad, n));
    out.push_back(mk("usets.standard.fixed-point-free", "y = beta is never a root", fixed_bad, n));
    out.push_back(mk("usets.standard.same-involution",
                     "all q hyperplanes sharing B^perp meet Pi give the same sigma and involution", remark_bad, n));
    return out;
}

std::optional<bool> sigma_criterion(const QuadricTables& T, int li, int lj, int lk, int B)
{
    const auto& F = T.field();
    const Subspace Pi = geom::span(F, {point_space(F, T.point(B)), T.generator(lj), T.generator(lk)});
    if (Pi.dim() != 5)
        return std::nullopt;
    const Subspace P = T.form().perp(Pi);
    const int pole = T.pole_id(P.row(0));
    if (pole < 0)
        return std::nullopt;
    const Flag f{B, li};
    const auto cone = cone_generators(T, B, pole);
    int a = -1, b = -1;
    for (std::size_t k = 0; k < cone.size(); ++k) {
        if (T.concurrent(cone[k], lj))
            a = static_cast<int>(k);
        if (T.concurrent(cone[k], lk))
            b = static_cast<int>(k);
    }
    if (a < 0 || b < 0)
        throw std::logic_error("no generator through B meets the other lines");
    return involution(T, f, pole, cone)[a] == b;
}

EnumerationSummary summarize(const Scheme& X, const std::vector<USet>& all)
{
    EnumerationSummary s;
    std::vector<int> flags;
    for (const auto& u : all) {
        auto it = std::find(flags.begin(), flags.end(), u.flag.B);
        if (it == flags.end()) {
            flags.push_back(u.flag.B);
            s.per_flag.push_back(0);
            it = flags.end() - 1;
        }
        ++s.per_flag[it - flags.begin()];
    }
    s.per_line = static_cast<long long>(all.size());
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    std::vector<long long> member(X.size(), 0);
    for (const auto& u : all) {
        seen.insert({u.O1, u.O2});
        seen.insert({u.O2, u.O1});
        for (const auto* O : {&u.O1, &u.O2})
            for (int g : *O)
                ++member[X.index_of(g)];
    }
    s.signed_vectors = 2 * s.per_line;
    s.distinct_signed = static_cast<long long>(seen.size());
    if (!member.empty()) {
        s.membership_min = *std::min_element(member.begin(), member.end());
        s.membership_max = *std::max_element(member.begin(), member.end());
    }
    return s;
}

MeetCounts uset_meet_counts(const std::vector<USet>& all, const std::vector<int>& S_prime)
{
    auto S = S_prime;
    std::sort(S.begin(), S.end());
    MeetCounts m;
    m.zero_or_two = true;
    for (const auto& u : all) {
        long long mu = 0;
        for (const auto* O : {&u.O1, &u.O2})
            for (int g : *O)
                mu += in_sorted(S, g);
        if (static_cast<long long>(m.histogram.size()) <= mu)
            m.histogram.resize(mu + 1, 0);
        ++m.histogram[mu];
        m.sum_mu += mu;
        m.sum_mu_pairs += mu * (mu - 1);
        if (mu != 0 && mu != 2)
            m.zero_or_two = false;
    }
    const long long s = static_cast<long long>(S.size());
    m.average = s > 1 ? cf::Rational(m.sum_mu_pairs, s * (s - 1)) : cf::Rational(0);
    return m;
}

std::string uset_to_json(const USet& u)
{
    nlohmann::ordered_json j;
    j["flag"] = {{"B", u.flag.B}, {"l", u.flag.l}};
    j["pole"] = u.pole;
    j["p1"] = u.p1;
    j["p2"] = u.p2;
    j["O1"] = u.O1;
    j["O2"] = u.O2;
    return j.dump();
}

SpectralReport spectral_suite(const Scheme& X, const std::vector<USet>& all, long long dual_samples, bool rank,
                              const std::vector<int>* design)
{
    SpectralReport r;
    const int n = X.size();
    const long long q = X.q();
    const auto m = cf::multiplicities(q);
    r.m1_plus_m5 = m[1] + m[5];
    r.vectors = 2 * static_cast<long long>(all.size());

    std::vector<std::vector<std::pair<int, int>>> sparse;
    sparse.reserve(all.size());
    for (const auto& u : all) {
        std::vector<std::pair<int, int>> s;
        for (int g : u.O1)
            s.emplace_back(X.index_of(g), 1);
        for (int g : u.O2)
            s.emplace_back(X.index_of(g), -1);
        sparse.push_back(std::move(s));
    }

    // v and -v have the same dual degree set, so one sign is projected
    const long long total = static_cast<long long>(all.size());
    const long long stride = dual_samples > 0 && dual_samples < total ? total / dual_samples : 1;
    for (long long k = 0; k < total; k += stride) {
        std::vector<long long> v(n, 0);
        for (auto [i, s] : sparse[k])
            v[i] = s;
        r.dual_checked += 2;
        if (scheme::dual_degree_set(X, v) == std::set<int>{1, 5})
            r.dual_ok += 2;
    }

    std::vector<int> gram(static_cast<std::size_t>(n) * n, 0);
    for (const auto& s : sparse)
        for (auto [i, a] : s)
            for (auto [j, b] : s)
                gram[static_cast<std::size_t>(i) * n + j] += 2 * a * b;
    const long long diag = 2 * (q - 1) * (q + 1) * (q + 1);
    r.gram_expected = {diag, -2, 0, 2 * q, 0, -2 * (q + 1)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int c = X.rel(i, j);
            ++r.gram_pairs[c];
            if (gram[static_cast<std::size_t>(i) * n + j] != r.gram_expected[c])
                ++r.gram_bad[c];
        }

    if (rank) {
        std::vector<long long> rows(static_cast<std::size_t>(total) * n, 0);
        for (long long k = 0; k < total; ++k)
            for (auto [i, s] : sparse[k])
                rows[static_cast<std::size_t>(k) * n + i] = s;
        r.stacked_rank = scheme::rank_mod_p(std::move(rows), n);
    }

    if (design) {
        std::vector<char> in(n, 0);
        for (int g : *design) {
            const int i = X.index_of(g);
            if (i >= 0)
                in[i] = 1;
        }
        r.orthogonality_bad = 0;
        for (const auto& s : sparse) {
            long long dot = 0;
            for (auto [i, a] : s)
                dot += in[i] * a;
            r.orthogonality_bad += dot != 0 ? 2 : 0;
        }
    }
    return r;
}

} // namespace fgeom::usets
