#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace scenelogic {

using ObjectId = std::uint32_t;

// Set of object ids within one scene, iterated in id (= scene) order.
// Profiles cap count_max at kCapacity so a single word holds any set.
class ObjectSet {
 public:
  static constexpr std::size_t kCapacity = 64;

  constexpr ObjectSet() = default;
  constexpr explicit ObjectSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr ObjectSet first(std::size_t n) {
    return ObjectSet(n >= kCapacity ? ~std::uint64_t{0}
                                    : (std::uint64_t{1} << n) - 1);
  }
  static constexpr ObjectSet single(ObjectId id) {
    return ObjectSet(std::uint64_t{1} << id);
  }

  constexpr bool contains(ObjectId id) const {
    return id < kCapacity && ((bits_ >> id) & 1u) != 0;
  }
  constexpr void insert(ObjectId id) { bits_ |= std::uint64_t{1} << id; }
  constexpr void erase(ObjectId id) { bits_ &= ~(std::uint64_t{1} << id); }

  constexpr std::size_t size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint64_t bits() const { return bits_; }

  // Smallest id; only meaningful when non-empty.
  constexpr ObjectId front() const {
    return static_cast<ObjectId>(std::countr_zero(bits_));
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1)
      f(static_cast<ObjectId>(std::countr_zero(b)));
  }

  std::vector<ObjectId> ids() const {
    std::vector<ObjectId> out;
    out.reserve(size());
    for_each([&](ObjectId id) { out.push_back(id); });
    return out;
  }

  friend constexpr ObjectSet operator|(ObjectSet a, ObjectSet b) {
    return ObjectSet(a.bits_ | b.bits_);
  }
  friend constexpr ObjectSet operator&(ObjectSet a, ObjectSet b) {
    return ObjectSet(a.bits_ & b.bits_);
  }
  friend constexpr ObjectSet operator-(ObjectSet a, ObjectSet b) {
    return ObjectSet(a.bits_ & ~b.bits_);
  }
  friend constexpr bool operator==(ObjectSet, ObjectSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace scenelogic
