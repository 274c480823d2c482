#pragma once

#include "fgeom/geometry.hpp"
#include "fgeom/hermitian.hpp"

#include <stdexcept>
#include <vector>

namespace fgeom::klein {

using geom::Subspace;
using geom::Vec6;
using gf::Field;
using gf::Fq;
using gf::Fq2;
using gf::QPoly;

/// The set {(F0(x), F1(x), F2(x)) : x in GF(q^2)} of V-hat.
struct GenLine {
    QPoly F0, F1, F2;
    friend bool operator==(const GenLine&, const GenLine&) = default;
};

/// The solid {(X0, X1, X2) : H0(X0) + H1(X1) + H2(X2) = 0}.
struct Solid {
    QPoly H0, H1, H2;
    friend bool operator==(const Solid&, const Solid&) = default;
};

Subspace line_space(const Field& F, const GenLine& l);
/// Parametrization read off the reduced basis of a 2-dimensional subspace, so
/// that equal subspaces give equal triples.
GenLine genline_from_space(const Field& F, const Subspace& S);
GenLine canonical(const Field& F, const GenLine& l);

/// Both coefficient conditions for Q-hat to vanish on the whole line.
bool totally_singular(const Field& F, const GenLine& l);

Subspace solid_space(const Field& F, const Solid& T);
Solid solid_from_space(const Field& F, const Subspace& S);
/// H0 o F0 + H1 o F1 + H2 o F2 = 0.
bool solid_contains(const Field& F, const Solid& T, const GenLine& l);

class NotIsotropic : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// rho: lines of H(3,q^2) to singular points of Q^-(5,q), extended to a
/// bijection from points of H(3,q^2) onto generators.
///
/// Plucker coordinates are taken as (p01, p02, p03, p12, p13, p23), then
/// rescaled by (1, -mu^q, 1, -mu^q, 1, mu^q) and by the unique (up to GF(q))
/// scalar that puts the result in V-hat.
class KleinMap {
public:
    KleinMap(const geom::QuadricTables& T, const herm::HermitianSurface& H);

    Fq2 mu() const { return mu_; }
    const geom::QuadricTables& tables() const { return T_; }
    const herm::HermitianSurface& surface() const { return H_; }

    /// Image of the line spanned by two isotropic, orthogonal vectors.
    Vec6 rho_line(const herm::Vec4& a, const herm::Vec4& b) const;
    int rho_line(int hline) const { return line_image_[hline]; }
    int rho_point(int hpoint) const { return point_image_[hpoint]; }
    /// Point of H(3,q^2) mapped to a generator.
    int rho_inverse(int generator) const { return preimage_[generator]; }

private:
    const geom::QuadricTables& T_;
    const herm::HermitianSurface& H_;
    Fq2 mu_;
    std::vector<int> line_image_;
    std::vector<int> point_image_;
    std::vector<int> preimage_;
};

/// Smallest element of norm -1.
Fq2 find_mu(const Field& F);

enum class Perspectivity { NotSpanning, Neither, SemiPerspective, Perspective };
const char* to_string(Perspectivity p);

class DegenerateConfiguration : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Geometric classification from T_i = l_i^perp, s_k = T_i meet T_j and
/// Sigma_i = <s_i, l_i>, by the dimension of Sigma_1 meet Sigma_2 meet Sigma_3.
Perspectivity perspective_classify(const geom::QuadricForm& Q, const Subspace& l1, const Subspace& l2,
                                   const Subspace& l3);

/// For l = L(I,0,0), m = L(0,0,I) and n = L(F0,F1,F2): f0^q f2 + g0 g2^q in GF(q).
bool perspective_algebraic(const Field& F, const GenLine& n);

/// z-class E of the three preimages under rho.
bool perspective_fast(const KleinMap& K, int g1, int g2, int g3);

} // namespace fgeom::klein
