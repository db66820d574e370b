#include "scenelogic/compact.hpp"

#include <bit>
#include <cmath>

#include "scenelogic/error.hpp"

namespace scenelogic {

namespace {

constexpr std::size_t kLowBits = 7;
constexpr std::size_t kMaxAttributeBits = 15;
constexpr std::uint8_t kRotationFlag = 0x80;

std::size_t width_for(std::size_t leaves) {
  return leaves <= 1 ? 0 : std::bit_width(leaves - 1);
}

std::uint8_t quantize(double v, const Interval& b) {
  double t = (v - b.lo) / b.width() * 255.0;
  long q = std::lround(t);
  if (q < 0 || q > 255) throw CompactError("coordinate outside bounds");
  return static_cast<std::uint8_t>(q);
}

double dequantize(std::uint8_t q, const Interval& b) {
  return b.lo + static_cast<double>(q) * b.width() / 255.0;
}

std::uint8_t quantize_rotation(double degrees) {
  double r = std::fmod(degrees, 360.0);
  if (r < 0) r += 360.0;
  return static_cast<std::uint8_t>(std::lround(r / 360.0 * 256.0) % 256);
}

}  // namespace

std::size_t compact_attribute_bits(const DomainProfile& profile) {
  std::size_t bits = 0;
  for (auto a : profile.packing()) bits += width_for(profile.attribute(a).leaf_count());
  return bits;
}

double compact_coordinate_tolerance(const DomainProfile& profile, std::size_t axis) {
  return profile.bounds().at(axis).width() / 510.0;
}

std::vector<std::uint8_t> encode_compact(const Scene& scene,
                                         const DomainProfile& profile) {
  if (auto v = validate_scene(scene, profile); !v.empty())
    throw CompactError("scene invalid: " + v.front().rule + " " + v.front().detail);
  if (compact_attribute_bits(profile) > kMaxAttributeBits)
    throw CompactError("profile " + profile.name() +
                       " needs more attribute bits than the compact layout holds");

  std::vector<std::uint8_t> out;
  out.reserve(compact_size(scene.objects.size()));
  out.push_back(static_cast<std::uint8_t>(scene.objects.size()));
  out.push_back(profile.tag());

  for (const auto& o : scene.objects) {
    std::uint32_t packed = 0;
    std::size_t shift = 0;
    for (auto ai : profile.packing()) {
      const Attribute& a = profile.attribute(ai);
      auto idx = *a.find(o.entries.at(a.name));
      packed |= static_cast<std::uint32_t>(idx) << shift;
      shift += width_for(a.leaf_count());
    }
    std::uint8_t rec[kCompactObjectBytes] = {};
    rec[0] = static_cast<std::uint8_t>(packed & 0x7f);
    rec[4] = static_cast<std::uint8_t>((packed >> kLowBits) & 0xff);
    for (std::size_t d = 0; d < profile.coordinate_dims(); ++d)
      rec[1 + d] = quantize(o.position[d], profile.bounds()[d]);
    if (o.rotation) {
      rec[0] |= kRotationFlag;
      rec[5] = quantize_rotation(*o.rotation);
    }
    out.insert(out.end(), rec, rec + kCompactObjectBytes);
  }
  return out;
}

Scene decode_compact(std::span<const std::uint8_t> bytes,
                     const DomainProfile& profile, std::string scene_id) {
  if (bytes.size() < kCompactHeaderBytes) throw CompactError("truncated");
  const std::size_t count = bytes[0];
  if (bytes[1] != profile.tag()) throw CompactError("unknown profile tag");
  if (bytes.size() < compact_size(count)) throw CompactError("truncated");
  if (bytes.size() > compact_size(count)) throw CompactError("trailing bytes");
  if (count > profile.count_max()) throw CompactError("object count exceeds count_max");

  Scene s;
  s.scene_id = std::move(scene_id);
  s.profile_name = profile.name();
  for (std::size_t i = 0; i < count; ++i) {
    auto rec = bytes.subspan(compact_size(i), kCompactObjectBytes);
    if (rec[6] != 0 || rec[7] != 0) throw CompactError("reserved bytes set");
    std::uint32_t packed = (rec[0] & 0x7fu) | (std::uint32_t{rec[4]} << kLowBits);
    ObjectRecord o;
    o.id = static_cast<ObjectId>(i);
    for (auto ai : profile.packing()) {
      const Attribute& a = profile.attribute(ai);
      const std::size_t w = width_for(a.leaf_count());
      const std::uint32_t idx = packed & ((1u << w) - 1u);
      packed >>= w;
      if (idx >= a.leaf_count()) throw CompactError("invalid entry code for " + a.name);
      o.entries[a.name] = a.vocabulary[idx];
    }
    if (packed != 0) throw CompactError("reserved attribute bits set");
    for (std::size_t d = 0; d < profile.coordinate_dims(); ++d)
      o.position.push_back(dequantize(rec[1 + d], profile.bounds()[d]));
    for (std::size_t d = profile.coordinate_dims(); d < 3; ++d)
      if (rec[1 + d] != 0) throw CompactError("reserved coordinate byte set");
    if (rec[0] & kRotationFlag)
      o.rotation = static_cast<double>(rec[5]) * 360.0 / 256.0;
    else if (rec[5] != 0)
      throw CompactError("rotation byte set without flag");
    s.objects.push_back(std::move(o));
  }
  return s;
}

}  // namespace scenelogic
