#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scenelogic {

// One discrete attribute of a world, e.g. "color" or "class".
//
// `vocabulary` holds the leaf entries objects may carry. `extended` is the
// vocabulary followed by the inner taxonomy nodes (empty tail for flat
// attributes); filters may name any extended entry, objects only leaves.
struct Attribute {
  std::string name;
  std::vector<std::string> vocabulary;
  std::vector<std::string> extended;
  // For each extended entry, the bitmask of leaf indices it resolves to.
  std::vector<std::uint64_t> leaf_masks;

  std::size_t leaf_count() const { return vocabulary.size(); }
  std::optional<std::size_t> find(std::string_view entry) const;
  bool is_leaf(std::size_t extended_index) const {
    return extended_index < vocabulary.size();
  }
};

struct TaxonomyEdge {
  std::string parent;
  std::string child;
};

struct Relation {
  std::string name;
  std::vector<double> direction;
  std::size_t opposite = 0;  // index of the relation with the negated vector
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

// Where an entry string lives inside a profile.
struct EntryRef {
  std::size_t attribute = 0;
  std::size_t index = 0;  // index into Attribute::extended
};

// Data-driven description of one world: vocabularies, taxonomy, spatial
// conventions and count bounds. Instances only come out of load_profile, so
// every DomainProfile satisfies the invariants checked there.
class DomainProfile {
 public:
  const std::string& name() const { return name_; }
  std::uint8_t tag() const { return tag_; }

  const std::vector<Attribute>& attributes() const { return attributes_; }
  const Attribute& attribute(std::size_t i) const { return attributes_.at(i); }
  std::optional<std::size_t> attribute_index(std::string_view name) const;

  // Index of the attribute the taxonomy ranges over, if any.
  std::optional<std::size_t> hierarchical_attribute() const {
    return hierarchical_;
  }
  const std::vector<TaxonomyEdge>& taxonomy() const { return taxonomy_; }

  const std::vector<Relation>& relations() const { return relations_; }
  std::optional<std::size_t> relation_index(std::string_view name) const;

  std::size_t coordinate_dims() const { return dims_; }
  const std::vector<Interval>& bounds() const { return bounds_; }
  std::size_t count_max() const { return count_max_; }
  std::size_t min_objects() const { return min_objects_; }
  std::size_t max_objects() const { return max_objects_; }

  // Attribute indices in compact bit-packing order.
  const std::vector<std::size_t>& packing() const { return packing_; }

  // Entry strings are unique across attributes, so this is unambiguous.
  std::optional<EntryRef> find_entry(std::string_view entry) const;

 private:
  friend DomainProfile load_profile(std::string_view source);

  std::string name_;
  std::uint8_t tag_ = 0;
  std::vector<Attribute> attributes_;
  std::optional<std::size_t> hierarchical_;
  std::vector<TaxonomyEdge> taxonomy_;
  std::vector<Relation> relations_;
  std::size_t dims_ = 3;
  std::vector<Interval> bounds_;
  std::size_t count_max_ = 1;
  std::size_t min_objects_ = 1;
  std::size_t max_objects_ = 1;
  std::vector<std::size_t> packing_;
};

// Parses and validates a profile JSON document. Throws ProfileError naming
// the offending key for malformed documents, cyclic taxonomies, duplicate
// entries and unpaired relations.
DomainProfile load_profile(std::string_view source);
DomainProfile load_profile_file(const std::filesystem::path& path);

// Serializes back to the profile JSON schema.
std::string profile_to_json(const DomainProfile& profile);

// Leaf descendants of an entry (the entry itself for leaves), in vocabulary
// order. Throws ProfileError for unknown entries.
std::vector<std::string> taxonomy_leaves(const DomainProfile& profile,
                                         std::string_view entry);

}  // namespace scenelogic
