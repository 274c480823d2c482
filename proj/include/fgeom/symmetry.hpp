#pragma once

#include "fgeom/context.hpp"

#include <array>
#include <vector>

namespace fgeom::sym {

using herm::Vec4;

/// x -> A x^phi with phi the identity or the Frobenius map of GF(q^2).
struct Collineation {
    std::array<Vec4, 4> A{};
    bool frobenius = false;
};

Vec4 apply(const gf::Field& F, const Collineation& g, const Vec4& x);

/// Every collineation of H(3,q^2) fixing the point P and the point set X
/// setwise, found by sending a projective frame P, u1..u4 taken from X to
/// all frames P, v1..v4 in X with the same X_P relations. Returns an empty
/// list when X holds no such frame.
std::vector<Collineation> setwise_stabilizer(const herm::HermitianSurface& H, int P, const std::vector<int>& X);

/// Orbits on X (as lists of positions in X) of the group generated by gens.
std::vector<std::vector<int>> orbits(const herm::HermitianSurface& H, const std::vector<Collineation>& gens,
                                     const std::vector<int>& X);

/// Orbits on a set U of generators disjoint from the base line under the
/// collineations fixing the base line and U, read through rho. Singletons
/// when no frame exists.
std::vector<std::vector<int>> uset_orbits(const Context& ctx, const std::vector<int>& U);

} // namespace fgeom::sym
