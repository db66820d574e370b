#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scenelogic/profile.hpp"
#include "scenelogic/scene.hpp"

namespace scenelogic {

// Compact binary scene encoding (see docs/compact_format.md).
//
//   header   : u8 object count, u8 profile tag
//   per object (8 bytes):
//     byte 0 : attribute bits 0..6 (packing order, LSB first), bit 7 = has rotation
//     byte 1-3 : one 8-bit fixed-point coordinate per axis over profile bounds
//     byte 4 : attribute bits 7..14 (spare byte for larger vocabularies)
//     byte 5 : rotation, 256 steps per full turn
//     byte 6-7 : reserved, zero
//
// For CLEVR the packing order is color(3) shape(2) material(1) size(1), so the
// discrete attributes occupy byte 0 exactly.
inline constexpr std::size_t kCompactHeaderBytes = 2;
inline constexpr std::size_t kCompactObjectBytes = 8;

constexpr std::size_t compact_size(std::size_t objects) {
  return kCompactHeaderBytes + kCompactObjectBytes * objects;
}

// Number of attribute bits an object needs under this profile.
std::size_t compact_attribute_bits(const DomainProfile& profile);

// Throws CompactError if the scene is invalid or the profile does not fit.
std::vector<std::uint8_t> encode_compact(const Scene& scene,
                                         const DomainProfile& profile);

// Throws CompactError ("truncated", "unknown profile tag", ...) on bad input.
Scene decode_compact(std::span<const std::uint8_t> bytes,
                     const DomainProfile& profile, std::string scene_id = {});

// Largest per-axis reconstruction error: half of one quantization step.
double compact_coordinate_tolerance(const DomainProfile& profile, std::size_t axis);

}  // namespace scenelogic
