#pragma once

#include "fgeom/gf.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fgeom::geom {

using gf::Field;
using gf::Fq;
using gf::Fq2;

/// Six GF(q) coordinates (x0, x1, y0, y1, z0, z1) of a vector of V-hat.
using Vec6 = std::array<std::uint8_t, 6>;

/// The vector (x, x^q, y, y^q, z, z^q), written (x, y, z) in short-hand.
struct HatVector {
    Fq2 x, y, z;
    friend constexpr bool operator==(const HatVector&, const HatVector&) = default;
};

Vec6 to_coords(const Field& F, const HatVector& v);
HatVector from_coords(const Field& F, const Vec6& c);

Vec6 vec_add(const Field& F, const Vec6& a, const Vec6& b);
Vec6 vec_scale(const Field& F, Fq c, const Vec6& a);
bool is_zero(const Vec6& v);

/// Lexicographic code sum v[k] q^(5-k); injective on Vec6.
std::uint32_t encode(int q, const Vec6& v);
Vec6 decode(int q, std::uint32_t code);

/// Scale so that the first nonzero coordinate is 1.
Vec6 normalize(const Field& F, Vec6 v);

/// A GF(q)-subspace of V-hat in reduced row echelon form.
///
/// Two subspaces are equal exactly when their stored bases are equal.
class Subspace {
public:
    Subspace() = default;

    static Subspace span_of(const Field& F, std::span<const Vec6> vectors);
    static Subspace whole(const Field& F);

    int dim() const { return dim_; }
    std::span<const Vec6> basis() const { return {rows_.data(), static_cast<std::size_t>(dim_)}; }
    const Vec6& row(int i) const { return rows_[i]; }
    bool contains(const Field& F, const Vec6& v) const;
    bool contains(const Field& F, const Subspace& S) const;

    /// All nonzero vectors with first nonzero coordinate 1 (projective points).
    std::vector<Vec6> points(const Field& F) const;

    friend bool operator==(const Subspace&, const Subspace&) = default;
    friend auto operator<=>(const Subspace&, const Subspace&) = default;

private:
    std::array<Vec6, 6> rows_{};
    int dim_ = 0;
};

Subspace span(const Field& F, const Subspace& A, const Subspace& B);
Subspace span(const Field& F, std::initializer_list<Subspace> parts);
Subspace meet(const Field& F, const Subspace& A, const Subspace& B);
/// Orthogonal complement for the standard dot product of GF(q)^6.
Subspace annihilator(const Field& F, const Subspace& S);

/// The quadratic form Q-hat and its polar form b-hat on V-hat.
class QuadricForm {
public:
    explicit QuadricForm(const Field& F);

    const Field& field() const { return F_; }

    Fq qhat(const HatVector& v) const;
    Fq bhat(const HatVector& u, const HatVector& v) const;
    Fq qhat(const Vec6& v) const;
    Fq bhat(const Vec6& u, const Vec6& v) const;

    /// Orthogonal complement with respect to b-hat.
    Subspace perp(const Subspace& S) const;
    Subspace perp(const Vec6& v) const;

private:
    const Field& F_;
    std::array<std::array<std::uint8_t, 6>, 6> gram_{};
};

/// Enumerations of Q^-(5,q): singular points, generators and non-degenerate
/// hyperplanes (stored by their non-singular poles).
///
/// Point, pole and generator ids are indices into sorted canonical lists, so
/// they are stable for a given q.
class QuadricTables {
public:
    explicit QuadricTables(const Field& F);

    const Field& field() const { return F_; }
    const QuadricForm& form() const { return form_; }
    int q() const { return F_.q(); }

    int num_points() const { return static_cast<int>(points_.size()); }
    int num_generators() const { return static_cast<int>(gen_space_.size()); }
    int num_poles() const { return static_cast<int>(poles_.size()); }

    const Vec6& point(int id) const { return points_[id]; }
    const Vec6& pole(int id) const { return poles_[id]; }
    const Subspace& generator(int id) const { return gen_space_[id]; }
    /// The q+1 singular points of a generator.
    std::span<const int> generator_points(int id) const;
    /// The q^2+1 generators through a singular point.
    std::span<const int> generators_through(int point) const { return through_[point]; }

    /// Point id of a nonzero singular vector, or -1 when not singular.
    int point_id(const Vec6& v) const;
    /// Pole id of a nonzero non-singular vector, or -1.
    int pole_id(const Vec6& v) const;
    /// Generator id of a 2-dimensional totally singular subspace, or -1.
    int generator_id(const Subspace& S) const;

    bool concurrent(int g, int h) const;
    /// Whether the generator lies in the hyperplane pole^perp.
    bool in_hyperplane(int pole, int g) const;

    /// Generators disjoint from g, in increasing id order.
    std::vector<int> disjoint_from(int g) const;
    /// Poles of the non-degenerate hyperplanes containing g.
    std::vector<int> hyperplanes_containing(int g) const;

    /// JSON dump of every canonical list plus the field header.
    std::string dump_json(Fq2 mu, Fq2 delta) const;
    /// Compare a dump against this table; false on any mismatch.
    bool matches_dump(const std::string& text, std::string* why = nullptr) const;

private:
    const Field& F_;
    QuadricForm form_;
    std::vector<Vec6> points_;
    std::vector<Vec6> poles_;
    std::vector<std::int32_t> point_of_code_;
    std::vector<std::int32_t> pole_of_code_;
    std::vector<Subspace> gen_space_;
    std::vector<std::uint64_t> gen_key_;
    std::vector<std::int32_t> gen_points_;
    std::vector<std::vector<int>> through_;
};

/// Sort key of a subspace with at most two basis rows.
std::uint64_t line_key(int q, const Subspace& S);

/// Largest q for which QuadricTables may be built.
inline constexpr int kMaxTableOrder = 7;

} // namespace fgeom::geom
