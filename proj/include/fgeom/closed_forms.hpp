#pragma once

#include <boost/rational.hpp>

#include <array>
#include <cstdint>

namespace fgeom::cf {

using Rational = boost::rational<long long>;
using IntMat6 = std::array<std::array<long long, 6>, 6>;
using RatMat6 = std::array<std::array<Rational, 6>, 6>;

/// Valencies (eta_0, ..., eta_5) of the five-class scheme.
std::array<long long, 6> valencies(long long q);

/// Intersection matrix L_i with (k, j)-entry p^k_{ij}, for i = 0..5 (L_0 = I).
IntMat6 intersection_matrix(int i, long long q);

/// First eigenmatrix; row i holds the eigenvalues of A_0..A_5 on the i-th eigenspace.
RatMat6 first_eigenmatrix(long long q);
/// Second eigenmatrix; row 0 holds the multiplicities.
RatMat6 second_eigenmatrix(long long q);

std::array<long long, 6> multiplicities(long long q);

/// The MacWilliams transform of a = (1, 0, 0, 0, 0, q^2 - 1).
std::array<long long, 6> conic_transform(long long q);

/// Parameters (v, k, lambda, mu) of the quotient strongly regular graph.
std::array<long long, 4> quotient_srg(long long q);

} // namespace fgeom::cf
