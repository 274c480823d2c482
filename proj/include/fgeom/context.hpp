#pragma once

#include "fgeom/geometry.hpp"
#include "fgeom/hermitian.hpp"
#include "fgeom/klein.hpp"

#include <memory>

namespace fgeom {

/// Everything built once for a field order: the field, both polar spaces and
/// the Klein map between them, together with the fixed base objects
/// P = <(0,0,0,1)> and l = rho(P).
class Context {
public:
    explicit Context(int q);
    Context(const Context&) = delete;
    Context& operator=(const Context&) = delete;

    int q() const { return field_->q(); }
    const gf::Field& field() const { return *field_; }
    const geom::QuadricTables& tables() const { return *tables_; }
    const herm::HermitianSurface& surface() const { return *surface_; }
    const klein::KleinMap& klein() const { return *klein_; }

    /// H-point <(0,0,0,1)>.
    int base_point() const { return base_point_; }
    /// H-point <(1,0,0,0)>.
    int opposite_point() const { return opposite_point_; }
    /// Generator rho(P) = L(0,0,I).
    int base_line() const { return base_line_; }

    gf::Fq2 mu() const { return klein_->mu(); }
    gf::Fq2 delta() const { return herm::special_delta(*field_); }

private:
    std::unique_ptr<gf::Field> field_;
    std::unique_ptr<geom::QuadricTables> tables_;
    std::unique_ptr<herm::HermitianSurface> surface_;
    std::unique_ptr<klein::KleinMap> klein_;
    int base_point_ = -1;
    int opposite_point_ = -1;
    int base_line_ = -1;
};

} // namespace fgeom
