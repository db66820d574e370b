#include "scenelogic/type_check.hpp"

#include "scenelogic/error.hpp"

namespace scenelogic {

TypeReport type_check(const Program& program, const DomainProfile& profile,
                      Typing typing) {
  if (program.empty()) throw ExecutionError("type_check on an empty program");
  if (program.catalog().profile_name() != profile.name())
    throw ExecutionError("program catalog belongs to profile " +
                         program.catalog().profile_name());
  TypeReport report;
  // Walk from the root so mismatch paths come out naturally.
  std::vector<std::size_t> path;
  auto visit = [&](auto&& self, std::size_t node) -> void {
    const TokenSpec& t = program.token(node);
    auto kids = program.children(node);
    for (std::size_t k = 0; k < kids.size(); ++k) {
      path.push_back(k);
      self(self, kids[k]);
      const ValueType found = program.token(kids[k]).output;
      if (!type_matches(t.inputs[k], found, typing))
        report.mismatches.push_back({path, kids[k], t.inputs[k], found});
      path.pop_back();
    }
  };
  visit(visit, program.root());
  report.ok = report.mismatches.empty();
  if (report.ok) report.result_type = program.token(program.root()).output;
  return report;
}

std::string path_to_string(const std::vector<std::size_t>& path) {
  if (path.empty()) return "root";
  std::string out;
  for (auto p : path) {
    if (!out.empty()) out += '.';
    out += std::to_string(p);
  }
  return out;
}

}  // namespace scenelogic
