#pragma once

#include "fgeom/gf.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgeom::herm {

using gf::Field;
using gf::Fq;
using gf::Fq2;

using Vec4 = std::array<Fq2, 4>;

/// h(x, y) = x0 y3^q - x1 y1^q - x2 y2^q + x3 y0^q.
Fq2 herm(const Field& F, const Vec4& x, const Vec4& y);

/// First nonzero coordinate scaled to 1.
Vec4 normalize(const Field& F, Vec4 v);
Vec4 add(const Field& F, const Vec4& a, const Vec4& b);
Vec4 scale(const Field& F, Fq2 c, const Vec4& a);
bool is_zero(const Vec4& v);
std::uint64_t encode(const Field& F, const Vec4& v);

/// Rank over GF(q^2) of a small list of rows of equal length.
int rank(const Field& F, std::vector<std::vector<Fq2>> rows);

enum class ZKind { Zero, E, T, Gamma };

/// The coset h(p,q)h(q,r)h(r,p) GF(q)^*, reported with its coset label mod q+1.
struct ZClass {
    ZKind kind = ZKind::Zero;
    int label = -1;
    friend bool operator==(const ZClass&, const ZClass&) = default;
};

ZClass zclass(const Field& F, const Vec4& p, const Vec4& q, const Vec4& r);
const char* to_string(ZKind k);

/// Whether the plane spanned by three points is degenerate (Gram matrix singular).
/// Throws std::invalid_argument when two of the points are collinear.
bool degenerate_span(const Field& F, const Vec4& p, const Vec4& q, const Vec4& r);

/// The points and totally isotropic lines of H(3,q^2).
class HermitianSurface {
public:
    explicit HermitianSurface(const Field& F);

    const Field& field() const { return F_; }
    int num_points() const { return static_cast<int>(points_.size()); }
    int num_lines() const { return static_cast<int>(line_points_.size()); }
    const Vec4& point(int id) const { return points_[id]; }
    /// Id of a nonzero isotropic vector, -1 otherwise.
    int point_id(const Vec4& v) const;

    /// Sorted ids of the q^2+1 points on a line.
    const std::vector<int>& line_points(int line) const { return line_points_[line]; }
    /// Two spanning vectors of a line.
    const std::array<Vec4, 2>& line_basis(int line) const { return line_basis_[line]; }
    /// The q+1 lines through a point.
    const std::vector<int>& lines_through(int point) const { return through_[point]; }

    bool collinear(int a, int b) const;

private:
    const Field& F_;
    std::vector<Vec4> points_;
    std::vector<std::uint64_t> codes_;
    std::vector<std::vector<int>> line_points_;
    std::vector<std::array<Vec4, 2>> line_basis_;
    std::vector<std::vector<int>> through_;
};

class ConstructionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SpecialSet {
    std::vector<Vec4> points;
    bool constructed = false;
};

/// nu = 1 when q = 3 mod 4, else the smallest non-square of GF(q).
Fq special_nu(const Field& F);
/// delta = 1 when nu = 1, else the smallest delta in GF(q^2) with N(delta) = nu.
Fq2 special_delta(const Field& F);

/// The GF(q)-rational points (x0, x1, delta x2, x3) of H(3,q^2).
SpecialSet build_special_set(const Field& F);

struct SpecialSetReport {
    bool sizes_ok = false;
    bool on_surface = false;
    bool pairwise_noncollinear = false;
    /// Outside points orthogonal to a number of members other than 0 or 2.
    std::vector<int> violations;
    bool passed = false;
};

SpecialSetReport validate_special_set(const HermitianSurface& H, const SpecialSet& S);

/// Whether every triple of distinct members has z-class E.
bool all_triples_e(const Field& F, const SpecialSet& S);

std::string special_set_to_json(const Field& F, const SpecialSet& S);
/// Parses a JSON array of 4-tuples of [a0, a1] pairs; throws std::runtime_error.
SpecialSet special_set_from_json(const Field& F, const std::string& text);

} // namespace fgeom::herm
