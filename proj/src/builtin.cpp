#include "scenelogic/builtin.hpp"

#include <string>

#include "scenelogic/error.hpp"

namespace scenelogic {

namespace detail {
extern const std::string_view kClevrProfile;
extern const std::string_view kMinecraftProfile;
extern const std::string_view kClevrTemplates;
extern const std::string_view kMinecraftTemplates;
}  // namespace detail

std::vector<std::string_view> builtin_profile_names() {
  return {"clevr", "minecraft"};
}

std::optional<std::string_view> builtin_profile_source(std::string_view name) {
  if (name == "clevr") return detail::kClevrProfile;
  if (name == "minecraft") return detail::kMinecraftProfile;
  return std::nullopt;
}

std::optional<std::string_view> builtin_templates_source(std::string_view name) {
  if (name == "clevr") return detail::kClevrTemplates;
  if (name == "minecraft") return detail::kMinecraftTemplates;
  return std::nullopt;
}

DomainProfile builtin_profile(std::string_view name) {
  auto src = builtin_profile_source(name);
  if (!src) throw ProfileError(std::string(name), "no builtin profile");
  return load_profile(*src);
}

DomainProfile resolve_profile(const std::string& name_or_path) {
  if (builtin_profile_source(name_or_path)) return builtin_profile(name_or_path);
  return load_profile_file(name_or_path);
}

}  // namespace scenelogic
