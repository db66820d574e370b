#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenelogic/profile.hpp"

namespace scenelogic {

// Profiles and template packs shipped under data/, compiled into the library.
std::vector<std::string_view> builtin_profile_names();
std::optional<std::string_view> builtin_profile_source(std::string_view name);
std::optional<std::string_view> builtin_templates_source(std::string_view name);

// Throws ProfileError if no builtin profile has this name.
DomainProfile builtin_profile(std::string_view name);

// Builtin name, otherwise a path to a profile JSON file.
DomainProfile resolve_profile(const std::string& name_or_path);

inline DomainProfile clevr_profile() { return builtin_profile("clevr"); }
inline DomainProfile minecraft_profile() { return builtin_profile("minecraft"); }

}  // namespace scenelogic
