#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scenelogic/catalog.hpp"
#include "scenelogic/profile.hpp"
#include "scenelogic/program.hpp"

namespace scenelogic {

struct TypeMismatch {
  std::vector<std::size_t> path;  // argument indices from the root to the offending child
  std::size_t node = 0;           // post-order index of the offending child
  ValueType expected;
  ValueType found;
};

struct TypeReport {
  bool ok = false;
  std::optional<ValueType> result_type;  // set iff ok
  std::vector<TypeMismatch> mismatches;
};

// Checks every node's argument output types against its input signature.
// Total and deterministic; all mismatches are reported, not just the first.
TypeReport type_check(const Program& program, const DomainProfile& profile,
                      Typing typing = Typing::refined);

// "root", "0", "1.0", ...
std::string path_to_string(const std::vector<std::size_t>& path);

}  // namespace scenelogic
