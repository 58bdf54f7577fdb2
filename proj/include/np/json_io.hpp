#ifndef NP_JSON_IO_HPP
#define NP_JSON_IO_HPP

// JSON forms. All indices inside JSON are 1-based.
//
//   Endomorphism:  {"type":[n1,...,nk],"local":[{"v":[...],"map":[...]},...]}
//                  entries ordered by level, then by ascending v.
//   GroupElement:  a permutation is its image table [1pi,...,mpi];
//                  a wreath element is {"base":[...],"top":[...]}.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "np/closure.hpp"
#include "np/endomorphism.hpp"
#include "np/group.hpp"
#include "np/rank.hpp"

namespace np {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json to_json(const PartitionType& type) { return Json(type.levels()); }

inline Json to_json(const Point& p) {
  Json out = Json::array();
  for (auto c : p.coords) out.push_back(c + 1);
  return out;
}

inline Json to_json(const Endomorphism& f) {
  const PartitionType& type = f.type();
  Json local = Json::array();
  for (std::size_t j = 1; j <= type.depth(); ++j) {
    for (std::size_t v = 0; v < type.level_size(j - 1); ++v) {
      Json map = Json::array();
      for (auto x : f.local(j, v)) map.push_back(x + 1);
      local.push_back(Json{{"v", to_json(point_at(type, j - 1, v))}, {"map", std::move(map)}});
    }
  }
  return Json{{"type", to_json(type)}, {"local", std::move(local)}};
}

inline Endomorphism endomorphism_from_json(const Json& j, std::size_t leaf_bound = kDefaultLeafBound) {
  try {
    PartitionType type(j.at("type").get<std::vector<std::size_t>>(), leaf_bound);
    std::map<Point, LocalMap> maps;
    for (const auto& entry : j.at("local")) {
      Point v;
      for (auto c : entry.at("v").get<std::vector<std::size_t>>()) {
        if (c == 0) throw InvalidArgument("point coordinates are 1-based");
        v.coords.push_back(c - 1);
      }
      point_index(type, v);
      auto map = LocalMap::from_one_based(entry.at("map").get<std::vector<std::uint32_t>>());
      if (!maps.emplace(v, std::move(map)).second) {
        throw InvalidArgument("duplicate local map at " + v.to_string());
      }
    }
    return endo_from_local_maps(type, maps);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed endomorphism JSON: ") + e.what());
  }
}

inline Json to_json(const Permutation& p) {
  Json out = Json::array();
  for (auto x : p.image()) out.push_back(x + 1);
  return out;
}

inline Json to_json(const GroupElement& x) {
  if (x.is_permutation()) return to_json(x.top);
  Json base = Json::array();
  for (const auto& b : x.base) base.push_back(to_json(b));
  return Json{{"base", std::move(base)}, {"top", to_json(x.top)}};
}

inline Permutation permutation_from_json(const Json& j) {
  std::vector<std::uint32_t> img;
  for (auto x : j.get<std::vector<std::uint32_t>>()) {
    if (x == 0) throw InvalidArgument("permutation images are 1-based");
    img.push_back(x - 1);
  }
  return Permutation(std::move(img));
}

inline GroupElement group_element_from_json(const Json& j) {
  try {
    if (j.is_array()) return GroupElement(permutation_from_json(j));
    std::vector<GroupElement> base;
    for (const auto& b : j.at("base")) base.push_back(group_element_from_json(b));
    return GroupElement(std::move(base), permutation_from_json(j.at("top")));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed wreath element JSON: ") + e.what());
  }
}

inline Json to_json(const ClosureReport& r, bool with_timing = false) {
  Json out{{"element_count", r.element_count},
           {"generator_count", r.generator_count},
           {"complete", r.complete}};
  if (r.target) out["target"] = *r.target;
  if (r.reached_target) out["reached_target"] = *r.reached_target;
  out["max_word_length"] = r.max_word_length;
  if (!r.word_lengths.empty()) {
    std::vector<std::uint64_t> histogram(r.max_word_length + 1, 0);
    for (auto l : r.word_lengths) ++histogram[l];
    out["word_length_histogram"] = histogram;
  }
  if (with_timing) out["seconds"] = r.seconds;
  return out;
}

inline Json to_json(const SearchStats& s) {
  return Json{{"size", s.size},
              {"subsets", s.subsets},
              {"pruned", s.pruned},
              {"closures", s.closures},
              {"found", s.found}};
}

// `manifest` lists the interned elements referenced by the witness.
inline Json to_json(const RankCertificate& c, const std::vector<Endomorphism>* elements = nullptr,
                    const std::string& interning = "") {
  Json out{{"kind", to_string(c.kind)}, {"value", c.value}, {"witness", c.witness}};
  Json searches = Json::array();
  for (const auto& s : c.searches) searches.push_back(to_json(s));
  out["searches"] = std::move(searches);
  if (elements) {
    Json entries = Json::array();
    for (auto id : c.witness) entries.push_back(Json{{"id", id}, {"element", to_json((*elements)[id])}});
    out["manifest"] = Json{{"interning", interning},
                           {"element_count", elements->size()},
                           {"elements", std::move(entries)}};
  }
  if (!c.notes.empty()) out["notes"] = c.notes;
  return out;
}

inline Json to_json(const ParityVector& p) { return Json(p.bits); }

inline Json to_json(const LowerBoundCertificate& c) {
  Json strata = Json::array();
  for (const auto& r : c.strata) {
    strata.push_back(Json{{"level", r.level},
                          {"stratum", r.stratum},
                          {"min_generators", 1},
                          {"witness", to_json(r.witness)}});
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < c.parity_rows.size(); ++i) {
    rows.push_back(Json{{"element", to_json(c.parity_witnesses[i])}, {"parity", to_json(c.parity_rows[i])}});
  }
  return Json{{"kind", to_string(CertificateKind::lower_bound)},
              {"value", c.value},
              {"type", to_json(c.type)},
              {"stratum_requirements", std::move(strata)},
              {"parity_matrix", std::move(rows)},
              {"parity_rank_gf2", c.parity_rank}};
}

}  // namespace np

#endif
