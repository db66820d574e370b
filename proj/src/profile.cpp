#include "scenelogic/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scenelogic/error.hpp"

namespace scenelogic {

using ojson = nlohmann::ordered_json;

std::optional<std::size_t> Attribute::find(std::string_view entry) const {
  for (std::size_t i = 0; i < extended.size(); ++i)
    if (extended[i] == entry) return i;
  return std::nullopt;
}

std::optional<std::size_t> DomainProfile::attribute_index(
    std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i)
    if (attributes_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> DomainProfile::relation_index(
    std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i)
    if (relations_[i].name == name) return i;
  return std::nullopt;
}

std::optional<EntryRef> DomainProfile::find_entry(std::string_view entry) const {
  for (std::size_t a = 0; a < attributes_.size(); ++a)
    if (auto i = attributes_[a].find(entry)) return EntryRef{a, *i};
  return std::nullopt;
}

namespace {

[[noreturn]] void malformed(const std::string& key, const std::string& what) {
  throw ProfileError(key, "malformed profile: " + what);
}

const ojson& require(const ojson& doc, const char* key) {
  if (!doc.contains(key)) malformed(key, "missing key");
  return doc.at(key);
}

std::size_t read_count(const ojson& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    malformed(key, "expected a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<double> read_vector(const ojson& v, const std::string& key) {
  if (!v.is_array()) malformed(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) malformed(key, "expected an array of numbers");
    double d = x.get<double>();
    if (!std::isfinite(d)) malformed(key, "non-finite number");
    out.push_back(d);
  }
  return out;
}

// Detects a cycle among taxonomy edges; returns a node on the cycle.
std::optional<std::string> find_cycle(
    const std::map<std::string, std::vector<std::string>>& children) {
  enum class Mark { none, active, done };
  std::map<std::string, Mark> mark;
  std::optional<std::string> hit;
  std::function<bool(const std::string&)> visit = [&](const std::string& n) {
    mark[n] = Mark::active;
    if (auto it = children.find(n); it != children.end()) {
      for (const auto& c : it->second) {
        Mark m = mark.count(c) ? mark[c] : Mark::none;
        if (m == Mark::active) {
          hit = c;
          return true;
        }
        if (m == Mark::none && visit(c)) return true;
      }
    }
    mark[n] = Mark::done;
    return false;
  };
  for (const auto& [node, _] : children)
    if (!mark.count(node) && visit(node)) return hit;
  return std::nullopt;
}

}  // namespace

DomainProfile load_profile(std::string_view source) {
  ojson doc;
  try {
    doc = ojson::parse(source.begin(), source.end());
  } catch (const ojson::parse_error& e) {
    malformed("<document>", e.what());
  }
  if (!doc.is_object()) malformed("<document>", "expected a JSON object");

  DomainProfile p;

  const auto& name = require(doc, "name");
  if (!name.is_string() || name.get<std::string>().empty())
    malformed("name", "expected a non-empty string");
  p.name_ = name.get<std::string>();

  if (doc.contains("tag")) {
    std::size_t tag = read_count(doc["tag"], "tag");
    if (tag > 255) malformed("tag", "profile tag must fit in one byte");
    p.tag_ = static_cast<std::uint8_t>(tag);
  }

  // Attributes and their leaf vocabularies.
  const auto& attrs = require(doc, "attributes");
  if (!attrs.is_object() || attrs.empty())
    malformed("attributes", "expected a non-empty object");
  std::set<std::string> seen_entries;
  for (const auto& [attr_name, vocab] : attrs.items()) {
    std::string key = "attributes." + attr_name;
    if (!vocab.is_array() || vocab.empty())
      malformed(key, "expected a non-empty array of entries");
    Attribute a;
    a.name = attr_name;
    for (const auto& e : vocab) {
      if (!e.is_string() || e.get<std::string>().empty())
        malformed(key, "entries must be non-empty strings");
      std::string entry = e.get<std::string>();
      if (!seen_entries.insert(entry).second)
        throw ProfileError(entry, "duplicate entry");
      a.vocabulary.push_back(entry);
    }
    a.extended = a.vocabulary;
    p.attributes_.push_back(std::move(a));
  }

  if (doc.contains("hierarchical_attribute")) {
    const auto& h = doc["hierarchical_attribute"];
    if (!h.is_string()) malformed("hierarchical_attribute", "expected a string");
    p.hierarchical_ = p.attribute_index(h.get<std::string>());
    if (!p.hierarchical_)
      malformed("hierarchical_attribute", "names no declared attribute");
  }

  // Taxonomy over the hierarchical attribute.
  std::map<std::string, std::vector<std::string>> children;
  if (doc.contains("taxonomy")) {
    const auto& tax = doc["taxonomy"];
    if (!tax.is_array()) malformed("taxonomy", "expected an array of edges");
    for (const auto& edge : tax) {
      if (!edge.is_array() || edge.size() != 2 || !edge[0].is_string() ||
          !edge[1].is_string())
        malformed("taxonomy", "edges must be [parent, child] string pairs");
      TaxonomyEdge e{edge[0].get<std::string>(), edge[1].get<std::string>()};
      auto& kids = children[e.parent];
      if (std::find(kids.begin(), kids.end(), e.child) != kids.end()) continue;
      kids.push_back(e.child);
      p.taxonomy_.push_back(std::move(e));
    }
  }
  if (!p.taxonomy_.empty()) {
    if (!p.hierarchical_)
      malformed("taxonomy", "taxonomy requires hierarchical_attribute");
    if (auto node = find_cycle(children))
      throw ProfileError(*node, "cyclic taxonomy");
    Attribute& h = p.attributes_[*p.hierarchical_];
    std::set<std::string> leaves(h.vocabulary.begin(), h.vocabulary.end());
    // Inner nodes in order of first appearance.
    for (const auto& e : p.taxonomy_) {
      for (const std::string* n : {&e.parent, &e.child}) {
        if (leaves.count(*n) || h.find(*n)) continue;
        if (!children.count(*n))
          throw ProfileError(*n, "taxonomy node is not an entry of " + h.name);
        if (!seen_entries.insert(*n).second)
          throw ProfileError(*n, "duplicate entry");
        h.extended.push_back(*n);
      }
      if (leaves.count(e.parent))
        throw ProfileError(e.parent, "leaf entry cannot have taxonomy children");
    }
  }

  for (auto& a : p.attributes_) {
    if (a.extended.size() > 64)
      malformed("attributes." + a.name, "at most 64 entries per attribute");
    a.leaf_masks.assign(a.extended.size(), 0);
    std::function<std::uint64_t(const std::string&)> leaves_of =
        [&](const std::string& n) -> std::uint64_t {
      auto idx = a.find(n);
      if (a.is_leaf(*idx)) return std::uint64_t{1} << *idx;
      std::uint64_t m = 0;
      for (const auto& c : children[n]) m |= leaves_of(c);
      return m;
    };
    for (std::size_t i = 0; i < a.extended.size(); ++i)
      a.leaf_masks[i] = a.is_leaf(i) ? (std::uint64_t{1} << i)
                                     : leaves_of(a.extended[i]);
  }

  // Geometry.
  std::size_t dims = read_count(require(doc, "coordinate_dims"), "coordinate_dims");
  if (dims != 2 && dims != 3) malformed("coordinate_dims", "must be 2 or 3");
  p.dims_ = dims;

  const auto& bounds = require(doc, "bounds");
  if (!bounds.is_array() || bounds.size() != dims)
    malformed("bounds", "expected one [lo, hi] interval per axis");
  for (const auto& b : bounds) {
    auto v = read_vector(b, "bounds");
    if (v.size() != 2) malformed("bounds", "expected [lo, hi]");
    if (!(v[0] < v[1])) malformed("bounds", "degenerate interval");
    p.bounds_.push_back({v[0], v[1]});
  }

  const auto& spatial = require(doc, "spatial");
  if (!spatial.is_object()) malformed("spatial", "expected an object");
  for (const auto& [rel, vec] : spatial.items()) {
    Relation r;
    r.name = rel;
    r.direction = read_vector(vec, "spatial." + rel);
    if (r.direction.size() != dims)
      malformed("spatial." + rel, "direction must have coordinate_dims components");
    if (std::all_of(r.direction.begin(), r.direction.end(),
                    [](double d) { return d == 0.0; }))
      malformed("spatial." + rel, "zero direction");
    p.relations_.push_back(std::move(r));
  }
  for (auto& r : p.relations_) {
    auto it = std::find_if(p.relations_.begin(), p.relations_.end(),
                           [&](const Relation& o) {
                             for (std::size_t d = 0; d < dims; ++d)
                               if (o.direction[d] != -r.direction[d]) return false;
                             return true;
                           });
    if (it == p.relations_.end()) throw ProfileError(r.name, "unpaired relation");
    r.opposite = static_cast<std::size_t>(it - p.relations_.begin());
  }

  p.count_max_ = read_count(require(doc, "count_max"), "count_max");
  if (p.count_max_ < 1 || p.count_max_ > 64)
    malformed("count_max", "must be between 1 and 64");
  p.min_objects_ = 1;
  p.max_objects_ = p.count_max_;
  if (doc.contains("object_range")) {
    const auto& r = doc["object_range"];
    if (!r.is_array() || r.size() != 2)
      malformed("object_range", "expected [min, max]");
    p.min_objects_ = read_count(r[0], "object_range");
    p.max_objects_ = read_count(r[1], "object_range");
    if (p.min_objects_ < 1 || p.min_objects_ > p.max_objects_ ||
        p.max_objects_ > p.count_max_)
      malformed("object_range", "need 1 <= min <= max <= count_max");
  }

  if (doc.contains("packing")) {
    const auto& pk = doc["packing"];
    if (!pk.is_array() || pk.size() != p.attributes_.size())
      malformed("packing", "must list every attribute once");
    for (const auto& n : pk) {
      auto idx = n.is_string() ? p.attribute_index(n.get<std::string>())
                               : std::nullopt;
      if (!idx || std::find(p.packing_.begin(), p.packing_.end(), *idx) !=
                      p.packing_.end())
        malformed("packing", "must list every attribute once");
      p.packing_.push_back(*idx);
    }
  } else {
    for (std::size_t i = 0; i < p.attributes_.size(); ++i) p.packing_.push_back(i);
  }

  return p;
}

DomainProfile load_profile_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProfileError(path.string(), "cannot open profile");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_profile(ss.str());
}

std::string profile_to_json(const DomainProfile& p) {
  ojson doc;
  doc["name"] = p.name();
  doc["tag"] = p.tag();
  ojson attrs = ojson::object();
  for (const auto& a : p.attributes()) attrs[a.name] = a.vocabulary;
  doc["attributes"] = attrs;
  ojson packing = ojson::array();
  for (auto i : p.packing()) packing.push_back(p.attribute(i).name);
  doc["packing"] = packing;
  if (auto h = p.hierarchical_attribute())
    doc["hierarchical_attribute"] = p.attribute(*h).name;
  ojson tax = ojson::array();
  for (const auto& e : p.taxonomy()) tax.push_back({e.parent, e.child});
  doc["taxonomy"] = tax;
  ojson spatial = ojson::object();
  for (const auto& r : p.relations()) spatial[r.name] = r.direction;
  doc["spatial"] = spatial;
  doc["coordinate_dims"] = p.coordinate_dims();
  ojson bounds = ojson::array();
  for (const auto& b : p.bounds()) bounds.push_back({b.lo, b.hi});
  doc["bounds"] = bounds;
  doc["count_max"] = p.count_max();
  doc["object_range"] = {p.min_objects(), p.max_objects()};
  return doc.dump(2);
}

std::vector<std::string> taxonomy_leaves(const DomainProfile& profile,
                                         std::string_view entry) {
  auto ref = profile.find_entry(entry);
  if (!ref) throw ProfileError(std::string(entry), "unknown entry");
  const Attribute& a = profile.attribute(ref->attribute);
  std::vector<std::string> out;
  const std::uint64_t mask = a.leaf_masks[ref->index];
  for (std::size_t i = 0; i < a.leaf_count(); ++i)
    if ((mask >> i) & 1u) out.push_back(a.vocabulary[i]);
  return out;
}

}  // namespace scenelogic
