#pragma once

#include "fgeom/context.hpp"
#include "fgeom/scheme.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgeom::usets {

using geom::QuadricTables;
using geom::Subspace;
using scheme::Check;
using scheme::Scheme;

/// A singular point B on a generator l.
struct Flag {
    int B = -1;
    int l = -1;
    friend bool operator==(const Flag&, const Flag&) = default;
};

class DegenerateHyperplane : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The configuration O1 u O2 built on a flag from the hyperplane pole^perp
/// and the cone generator p1. O1 and O2 hold sorted generator ids.
struct USet {
    Flag flag;
    int pole = -1;
    int p1 = -1;
    int p2 = -1;
    std::vector<int> O1, O2;
};

/// Poles of the non-degenerate hyperplanes through B not containing l,
/// i.e. the non-singular points of B^perp outside l^perp.
std::vector<int> flag_poles(const QuadricTables& T, const Flag& f);

/// The q+1 generators through B inside pole^perp, in increasing id order.
/// Throws DegenerateHyperplane when B is not in the hyperplane.
std::vector<int> cone_generators(const QuadricTables& T, int B, int pole);

/// sigma = <l, pole> meet pole^perp, a line through B.
Subspace sigma_line(const QuadricTables& T, const Flag& f, int pole);

/// partner[k] is the index in `cone` of the second generator of the plane
/// <cone[k], sigma>.
std::vector<int> involution(const QuadricTables& T, const Flag& f, int pole, const std::vector<int>& cone);

USet build_uset(const QuadricTables& T, const Flag& f, int pole, int p1);

/// Swaps the halves (and p1, p2) so that O1 is the lexicographically smaller.
void canonicalize(USet& u);

/// One U-set per unordered pair {p1, p2} and per pole, canonical order.
std::vector<USet> usets_on_flag(const QuadricTables& T, const Flag& f, int threads = 1);
/// All U-sets on the q+1 flags of l, grouped by flag in point-id order.
std::vector<USet> usets_on_line(const QuadricTables& T, int l, int threads = 1);

enum class Part : std::uint8_t { O1, O2, V, J1, J2, W, Z };
inline constexpr int kParts = 7;
const char* to_string(Part p);

/// Label of every vertex of X (a line scheme on the flag's generator).
std::vector<Part> classify_partition(const QuadricTables& T, const Scheme& X, const USet& u);

/// Dense vector chi_O1 - chi_O2 over the vertices of X.
std::vector<long long> signed_vector(const Scheme& X, const USet& u);

/// The five vector identities for chi_O1 A_i and the mirrored ones for chi_O2.
/// The A_5 identity carries a -chi_V term; `as_printed` drops it.
bool lemma_identities(const Scheme& X, const USet& u, const std::vector<Part>& labels, std::string* why = nullptr,
                      bool as_printed = false);
/// v A_i as multiples of v and chi_J1 - chi_J2.
bool corollary_identities(const Scheme& X, const USet& u, const std::vector<Part>& labels, std::string* why = nullptr);

/// Closed-form generator l_y for the standard flag (<(1,0,0)>, L(I,0,0)).
klein::GenLine standard_ly(const gf::Field& F, gf::Fq2 y);
/// The standard flag as ids.
Flag standard_flag(const QuadricTables& T);

/// Cone generators and sigma-tilde of every hyperplane on the standard flag
/// against the closed forms, plus the q hyperplanes through B^perp meet Pi.
std::vector<Check> standard_position_checks(const QuadricTables& T);

/// Whether the generators through B meeting lj and lk correspond under the
/// involution of the hyperplane <B, lj, lk>, with B on li. Empty when that
/// hyperplane is undefined or degenerate.
std::optional<bool> sigma_criterion(const QuadricTables& T, int li, int lj, int lk, int B);

struct EnumerationSummary {
    std::vector<long long> per_flag;
    long long per_line = 0;
    long long signed_vectors = 0;
    long long distinct_signed = 0;
    /// Number of U-sets through each vertex of X, min and max.
    long long membership_min = 0, membership_max = 0;
};
EnumerationSummary summarize(const Scheme& X, const std::vector<USet>& all);

struct MeetCounts {
    std::vector<long long> histogram;
    long long sum_mu = 0;
    long long sum_mu_pairs = 0;
    /// sum mu(mu-1) / (|S'|(|S'|-1)); equals q+1 exactly for a 0-or-2 set.
    cf::Rational average;
    bool zero_or_two = false;
};

/// |U meet S'| over the given U-sets, S' a set of generators.
MeetCounts uset_meet_counts(const std::vector<USet>& all, const std::vector<int>& S_prime);

struct SpectralReport {
    long long vectors = 0;
    /// Vectors whose dual degree set was computed, and those equal to {1,5}.
    long long dual_checked = 0, dual_ok = 0;
    long long m1_plus_m5 = 0;
    /// Rank of the stacked signed vectors modulo a large prime, -1 when skipped.
    /// A lower bound on the rational rank; every vector lying in V_1 + V_5
    /// gives the upper bound m_1 + m_5.
    long long stacked_rank = -1;
    /// Gram entries sum_v v_m v_n compared with
    /// 2((q-1)(q+1)^2 I - A_1 + q A_3 - (q+1) A_5), per relation class.
    std::array<long long, 6> gram_pairs{};
    std::array<long long, 6> gram_bad{};
    std::array<long long, 6> gram_expected{};
    /// Vectors with nonzero inner product against the design vector.
    long long orthogonality_bad = -1;
};

/// Spectral checks on V_l = {+-(chi_O1 - chi_O2)}. dual_samples = 0 checks
/// every vector; the Gram matrix is always computed in full.
SpectralReport spectral_suite(const Scheme& X, const std::vector<USet>& all, long long dual_samples, bool rank,
                              const std::vector<int>* design = nullptr);

/// Dump format {flag, pole, p1, p2, O1, O2}.
std::string uset_to_json(const USet& u);

} // namespace fgeom::usets
