#pragma once

#include <cstddef>
#include <memory>

#include "scenelogic/catalog.hpp"
#include "scenelogic/program.hpp"
#include "scenelogic/rng.hpp"

namespace scenelogic {

// Samples a well-typed (refined) program of depth <= max_depth. Tokens are
// picked family-first so that every module family shows up regularly.
// max_depth must be at least 1; depth 1 always yields the bare scene program.
Program random_program(const std::shared_ptr<const Catalog>& catalog,
                       std::size_t max_depth, Rng& rng);

}  // namespace scenelogic
