#include "fgeom/context.hpp"

namespace fgeom {

Context::Context(int q)
    : field_(std::make_unique<gf::Field>(q)),
      tables_(std::make_unique<geom::QuadricTables>(*field_)),
      surface_(std::make_unique<herm::HermitianSurface>(*field_)),
      klein_(std::make_unique<klein::KleinMap>(*tables_, *surface_))
{
    const auto& F = *field_;
    base_point_ = surface_->point_id({F.zero(), F.zero(), F.zero(), F.one()});
    opposite_point_ = surface_->point_id({F.one(), F.zero(), F.zero(), F.zero()});
    base_line_ = klein_->rho_point(base_point_);
}

} // namespace fgeom
