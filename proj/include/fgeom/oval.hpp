#pragma once

#include "fgeom/context.hpp"

#include <vector>

namespace fgeom::oval {

/// Number of triples of distinct generators that fail to span V-hat.
long long non_spanning_triples(const geom::QuadricTables& T, const std::vector<int>& S);

/// hist[k] = number of non-degenerate hyperplanes holding exactly k members.
std::vector<long long> hyperplane_histogram(const geom::QuadricTables& T, const std::vector<int>& S);

/// Triples whose rho-preimages do not have z-class e.
long long non_perspective_triples(const klein::KleinMap& K, const std::vector<int>& S);

/// Pairs (a, b) of S minus m, over all m in S, not in relation 5 of X_m.
long long clique_violations(const geom::QuadricTables& T, const std::vector<int>& S);

struct OvalReport {
    int size = 0;
    bool size_ok = false;
    long long non_spanning = 0;
    std::vector<long long> hyperplane_hist;
    bool any_three_span = false;
    bool zero_or_two = false;
    /// Both pseudo-oval tests give the same answer.
    bool tests_agree = false;
    long long non_perspective = 0;
    long long clique_bad = 0;
    bool pseudo_conic = false;
    /// The two pseudo-conic tests give the same answer.
    bool conic_tests_agree = false;
};

/// Full predicate suite for a set of generators; `conic_tests` controls the
/// (more expensive) pseudo-conic part.
OvalReport verify(const Context& ctx, const std::vector<int>& S, bool conic_tests = true);

/// rho-image of the special set, sorted, as generator ids.
std::vector<int> pseudo_conic(const Context& ctx, const herm::SpecialSet& special);

} // namespace fgeom::oval
