#pragma once

#include "fgeom/context.hpp"

#include <map>
#include <memory>

namespace fixtures {

// Contexts are costly to build, so each test binary keeps one per q.
inline const fgeom::Context& context(int q)
{
    static std::map<int, std::unique_ptr<fgeom::Context>> cache;
    auto& slot = cache[q];
    if (!slot)
        slot = std::make_unique<fgeom::Context>(q);
    return *slot;
}

} // namespace fixtures
