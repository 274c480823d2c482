#pragma once

#include "fgeom/closed_forms.hpp"
#include "fgeom/context.hpp"

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace fgeom::scheme {

using cf::Rational;

enum class Base { Point, Line };
/// How relations on generators are obtained: from subspace algebra, or by
/// pulling back the point relations through rho.
enum class Route { Geometric, Transport };

/// Relation of two points Q, R not collinear with the base point P.
int classify_point_pair(const herm::HermitianSurface& H, int P, int Q, int R);
/// Relation of two generators m, n disjoint from the base generator l.
int classify_line_pair(const geom::QuadricTables& T, int l, int m, int n);

/// A materialized five-class scheme on q^5 vertices.
class Scheme {
public:
    /// X_P for P = <(0,0,0,1)>: points of H(3,q^2) not collinear with P.
    static Scheme point_scheme(const Context& ctx, int threads = 1);
    /// X_l for l = rho(P): generators disjoint from l.
    static Scheme line_scheme(const Context& ctx, Route route, int threads = 1);

    Base base() const { return base_; }
    int q() const { return q_; }
    int size() const { return n_; }
    /// Underlying object id (H-point or generator) of a vertex.
    int vertex(int i) const { return vertices_[i]; }
    const std::vector<int>& vertices() const { return vertices_; }
    /// Vertex index of an object id, -1 when it is not a vertex.
    int index_of(int object) const;

    int rel(int i, int j) const { return rel_[static_cast<std::size_t>(i) * n_ + j]; }
    int words() const { return words_; }
    const std::uint64_t* row_bits(int r, int i) const
    {
        return bits_.data() + (static_cast<std::size_t>(r) * n_ + i) * words_;
    }

    /// out[a] = A_a v for every relation a. The relations are symmetric, so
    /// only the rows at the support of v are read.
    template <class T>
    std::array<std::vector<T>, 6> apply_all(const std::vector<T>& v) const
    {
        std::array<std::vector<T>, 6> out;
        for (auto& o : out)
            o.assign(n_, T(0));
        for (int y = 0; y < n_; ++y) {
            if (v[y] == T(0))
                continue;
            const std::uint8_t* row = rel_.data() + static_cast<std::size_t>(y) * n_;
            for (int x = 0; x < n_; ++x)
                out[row[x]][x] += v[y];
        }
        return out;
    }

    /// Row sums of each relation, and whether they are constant over all rows.
    std::array<long long, 6> valencies(bool* regular = nullptr) const;

private:
    Scheme() = default;
    void finish();

    Base base_ = Base::Point;
    int q_ = 0;
    int n_ = 0;
    std::vector<int> vertices_;
    std::vector<int> index_;
    std::vector<std::uint8_t> rel_;
    int words_ = 0;
    std::vector<std::uint64_t> bits_;
};

struct Check {
    std::string id;
    std::string claim;
    bool passed = false;
    std::string detail;
};

struct IntersectionResult {
    /// computed[i][k][j] = p^k_{ij}, from the first pair seen in class k.
    std::array<cf::IntMat6, 6> computed{};
    std::array<long long, 6> pairs_per_class{};
    bool well_defined = true;
    bool matches_closed_form = true;
    long long pairs_checked = 0;
    std::vector<std::string> deviations;
};

/// Counts p^k_ij for every ordered pair (exhaustive) or for `samples` seeded
/// random pairs per class, and compares them with the closed forms.
IntersectionResult intersection_numbers(const Scheme& S, bool exhaustive, int samples, std::uint64_t seed);

/// p^k_ij for one pair by a direct loop over all vertices.
long long naive_intersection(const Scheme& S, int x, int y, int i, int j);

/// Exact rational matrix with a common denominator: entries num[i*n+j] / den.
struct RationalMatrix {
    int n = 0;
    long long den = 1;
    std::vector<long long> num;
    Rational at(int i, int j) const { return Rational(num[static_cast<std::size_t>(i) * n + j], den); }
};

/// E_i = q^-5 sum_j Q(j,i) A_j over the common denominator 2(q+1)q^5.
RationalMatrix idempotent(const Scheme& S, int i);

/// Rank modulo a large prime (a lower bound for the rational rank).
int rank_mod_p(std::vector<long long> rows, int cols, long long p = 2147483629LL);

/// P Q = q^5 I, row sums and the closed-form multiplication table of the E_i.
std::vector<Check> eigen_closed_form_checks(int q);
/// Full matrix products of the idempotents; intended for q = 3.
std::vector<Check> bose_mesner_dense(const Scheme& S);
/// Exact integer Freivalds checks of A_a A_b = sum p^k_ab A_k and of the
/// idempotent identities on seeded random vectors.
std::vector<Check> bose_mesner_probabilistic(const Scheme& S, int trials, std::uint64_t seed);
/// The same identities derived without sampling: an exhaustive intersection
/// count shows A_a A_b = sum p^k_ab A_k entry by entry, the A_a have disjoint
/// nonempty supports, so the matrices span an algebra isomorphic to the
/// closed-form one and every identity checked there transfers. An idempotent
/// has rank equal to its trace, which is n Q(0,i) / q^5.
std::vector<Check> bose_mesner_from_structure(const Scheme& S, const IntersectionResult& exhaustive);

using Distribution = std::array<Rational, 6>;

/// a_i = |Y|^-1 |R_i meet Y^2|; Y holds vertex indices. Throws on empty Y.
Distribution inner_distribution(const Scheme& S, const std::vector<int>& Y);
Distribution macwilliams(int q, const Distribution& a);

/// D v E_j for D = 2(q+1)q^5, all j; exact integers.
std::array<std::vector<long long>, 6> projections(const Scheme& S, const std::vector<long long>& v);
std::set<int> dual_degree_set(const Scheme& S, const std::vector<long long>& v);
bool is_T_design(const Scheme& S, const std::vector<int>& Y, const std::set<int>& T);
bool is_M_clique(const Scheme& S, const std::vector<int>& Y, const std::set<int>& M);

struct QuotientResult {
    std::array<long long, 4> params{};
    bool strongly_regular = false;
    bool fibers_ok = false;
    bool phi_bijective = false;
    long long pairs_checked = 0;
    long long adjacency_mismatches = 0;
    long long trace_mismatches = 0;
};

/// Quotient of X_P by R_0 u R_2, compared with the bilinear forms graph via
/// l_(r1,r2) -> D(r1, mu r2).
QuotientResult quotient_scheme(const Context& ctx, const Scheme& XP);

} // namespace fgeom::scheme
