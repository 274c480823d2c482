#include "fgeom/oval.hpp"

#include "fgeom/scheme.hpp"

#include <algorithm>
#include <stdexcept>

namespace fgeom::oval {

long long non_spanning_triples(const geom::QuadricTables& T, const std::vector<int>& S)
{
    const auto& F = T.field();
    const int n = static_cast<int>(S.size());
    long long bad = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            const auto ab = geom::span(F, T.generator(S[a]), T.generator(S[b]));
            if (ab.dim() < 4) {
                bad += n - b - 1;
                continue;
            }
            for (int c = b + 1; c < n; ++c)
                if (geom::span(F, ab, T.generator(S[c])).dim() < 6)
                    ++bad;
        }
    return bad;
}

std::vector<long long> hyperplane_histogram(const geom::QuadricTables& T, const std::vector<int>& S)
{
    std::vector<long long> hist(S.size() + 1, 0);
    for (int p = 0; p < T.num_poles(); ++p) {
        int k = 0;
        for (int g : S)
            k += T.in_hyperplane(p, g);
        ++hist[k];
    }
    return hist;
}

long long non_perspective_triples(const klein::KleinMap& K, const std::vector<int>& S)
{
    const int n = static_cast<int>(S.size());
    long long bad = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                bad += !klein::perspective_fast(K, S[a], S[b], S[c]);
    return bad;
}

long long clique_violations(const geom::QuadricTables& T, const std::vector<int>& S)
{
    long long bad = 0;
    for (int m : S)
        for (int a : S)
            for (int b : S) {
                if (a >= b || a == m || b == m)
                    continue;
                if (T.concurrent(a, m) || T.concurrent(b, m) || scheme::classify_line_pair(T, m, a, b) != 5)
                    ++bad;
            }
    return bad;
}

OvalReport verify(const Context& ctx, const std::vector<int>& S, bool conic_tests)
{
    const auto& T = ctx.tables();
    const int q = ctx.q();
    auto sorted = S;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("repeated generator");
    OvalReport r;
    r.size = static_cast<int>(S.size());
    r.size_ok = r.size == q * q + 1;
    r.non_spanning = non_spanning_triples(T, S);
    r.any_three_span = r.non_spanning == 0;
    r.hyperplane_hist = hyperplane_histogram(T, S);
    r.zero_or_two = true;
    for (std::size_t k = 0; k < r.hyperplane_hist.size(); ++k)
        if (k != 0 && k != 2 && r.hyperplane_hist[k] != 0)
            r.zero_or_two = false;
    r.tests_agree = !r.size_ok || r.any_three_span == r.zero_or_two;
    if (conic_tests && r.any_three_span) {
        r.non_perspective = non_perspective_triples(ctx.klein(), S);
        r.clique_bad = clique_violations(T, S);
        r.pseudo_conic = r.size_ok && r.non_perspective == 0;
        r.conic_tests_agree = (r.non_perspective == 0) == (r.clique_bad == 0);
    }
    return r;
}

std::vector<int> pseudo_conic(const Context& ctx, const herm::SpecialSet& special)
{
    const auto& H = ctx.surface();
    std::vector<int> out;
    for (const auto& p : special.points) {
        const int id = H.point_id(p);
        if (id < 0)
            throw std::invalid_argument("special set point is not on the surface");
        out.push_back(ctx.klein().rho_point(id));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace fgeom::oval
