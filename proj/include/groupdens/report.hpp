#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "groupdens/comb.hpp"
#include "groupdens/density.hpp"
#include "groupdens/version.hpp"

// Report assembly. Everything that reaches stdout goes through Json rows so
// the JSON and TSV forms cannot drift apart. Rationals are always "p/q"
// strings; big integers are decimal strings. No timestamps, no floats:
// identical inputs must produce byte-identical reports.

namespace groupdens {

using Json = nlohmann::ordered_json;

inline std::string kind_name(DensityResult::Kind k) {
  switch (k) {
    case DensityResult::Kind::Exact: return "exact";
    case DensityResult::Kind::UpperBound: return "upper-bound";
    case DensityResult::Kind::LowerBound: return "lower-bound";
    case DensityResult::Kind::Interval: return "interval";
  }
  return "unknown";
}

inline Json json_of(const Group& g, const std::vector<Elem>& es) {
  Json a = Json::array();
  for (const auto& e : es) a.push_back(g.print_elem(e));
  return a;
}

inline Json json_of(const Group& g, const Measure& mu) {
  Json a = Json::array();
  for (const auto& [e, w] : mu.weights()) {
    Json rec;
    rec["point"] = g.print_elem(e);
    rec["weight"] = rat_str(w);
    a.push_back(std::move(rec));
  }
  return a;
}

inline Json json_of(const Group& g, const DensityResult& r) {
  Json j;
  j["kind"] = kind_name(r.kind);
  if (r.kind == DensityResult::Kind::Exact) {
    j["value"] = rat_str(r.lo);
  } else {
    j["lo"] = rat_str(r.lo);
    j["hi"] = rat_str(r.hi);
  }
  j["method"] = r.method;
  Json w = Json::object();
  if (r.witness_measure) w["measure"] = json_of(g, *r.witness_measure);
  if (!r.witness_points.empty()) {
    Json pts = Json::array();
    for (const auto& t : r.witness_points) pts.push_back(json_of(g, t));
    w["points"] = std::move(pts);
  }
  if (!r.sequence.empty()) {
    Json s = Json::array();
    for (const auto& v : r.sequence) s.push_back(rat_str(v));
    w["sequence"] = std::move(s);
  }
  j["witness"] = std::move(w);
  return j;
}

inline Json json_of(const Group& g, const PackResult& r) {
  Json j;
  j["kind"] = r.at_least ? "at-least" : "exact";
  j["value"] = r.value;
  j["method"] = "independent-set";
  j["witness"] = json_of(g, r.witness);
  return j;
}

inline Json json_of(const Group& g, const CovResult& r) {
  Json j;
  switch (r.kind) {
    case CovResult::Kind::Exact: j["kind"] = "exact"; break;
    case CovResult::Kind::AtMost: j["kind"] = "at-most"; break;
    case CovResult::Kind::Infinite: j["kind"] = "infinite"; break;
  }
  if (r.kind != CovResult::Kind::Infinite) j["value"] = r.value;
  j["method"] = "set-cover";
  j["witness"] = json_of(g, r.witness);
  return j;
}

inline Json json_of(const Group& g, const KelleyResult& r) {
  Json j;
  j["kind"] = "exact";
  j["value"] = rat_str(r.value);
  Json w = Json::object();
  w["tuple"] = r.tuple;
  if (!r.weights.empty()) {
    Json ws = Json::array();
    for (const auto& v : r.weights) ws.push_back(rat_str(v));
    w["weights"] = std::move(ws);
  }
  j["witness"] = std::move(w);
  return j;
}

inline Json json_of(const Group& g, const Homothety& h) {
  Json j;
  j["degree"] = h.degree;
  j["constants"] = json_of(g, h.constants);
  return j;
}

inline Json json_of(const FolnerResult& r) {
  Json j;
  j["side"] = r.side;
  j["defect"] = rat_str(r.defect);
  j["boundary"] = r.boundary.str();
  j["volume"] = r.volume.str();
  return j;
}

inline Json json_of(const Group& g, const PartitionReport& r) {
  Json j;
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    Json cj;
    cj["size"] = c.size;
    cj["is12"] = rat_str(c.is12_value);
    cj["iss213"] = rat_str(c.iss213_value);
    cj["pack"] = json_of(g, c.pack);
    cj["cov-diff"] = json_of(g, c.cov_diff);
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  Json sc;
  sc["holds"] = r.small_cov;
  if (r.small_cov) sc["cell"] = r.small_cov_cell;
  j["small-cov"] = std::move(sc);
  Json cov;
  cov["cell"] = r.cover_cell;
  cov["f"] = json_of(g, r.cover_f);
  cov["bound"] = r.bound.str();
  cov["within-bound"] = r.cover_within_bound;
  j["cover"] = std::move(cov);
  Json wr;
  wr["holds"] = r.wr_small;
  if (r.wr_small) {
    wr["cell"] = r.wr_cell;
    wr["e"] = json_of(g, r.wr_e);
    wr["cov"] = r.wr_cov;
  }
  j["wr"] = std::move(wr);
  Json cr;
  cr["applicable"] = r.conj_invariant_route.has_value();
  if (r.conj_invariant_route) {
    cr["holds"] = *r.conj_invariant_route;
    cr["cell"] = r.conj_route_cell;
  }
  j["conj-route"] = std::move(cr);
  return j;
}

inline Json json_of(const Group& g, const ConjCoverReport& r) {
  Json j;
  j["ok"] = r.ok;
  j["sis-lower"] = rat_str(r.sis_lower);
  j["bound"] = r.bound.str();
  j["e"] = json_of(g, r.e_witness);
  j["cov-wr"] = r.cov_wr;
  j["cov-fourfold"] = r.cov_fourfold;
  j["fourfold-witness"] = json_of(g, r.cov_fourfold_witness);
  return j;
}

namespace detail {
inline std::string tsv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}
}

struct Report {
  Json meta;
  Json results = Json::array();

  Report(std::string command, Json options) {
    meta["version"] = GROUPDENS_VERSION;
    meta["command"] = std::move(command);
    meta["options"] = std::move(options);
  }

  void add(Json row) { results.push_back(std::move(row)); }

  Json to_json() const {
    Json j;
    j["meta"] = meta;
    j["results"] = results;
    return j;
  }

  std::string json_text() const { return to_json().dump(2) + "\n"; }

  // Flat mirror: meta as '#' lines, then a header row over the union of the
  // result keys in first-seen order, one line per result. Nested values are
  // compact JSON.
  std::string tsv_text() const {
    std::ostringstream os;
    os << "# version\t" << meta["version"].get<std::string>() << "\n";
    os << "# command\t" << meta["command"].get<std::string>() << "\n";
    os << "# options\t" << meta["options"].dump() << "\n";
    std::vector<std::string> keys;
    for (const auto& r : results)
      for (auto it = r.begin(); it != r.end(); ++it)
        if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
          keys.push_back(it.key());
    for (size_t i = 0; i < keys.size(); ++i) os << (i ? "\t" : "") << keys[i];
    os << "\n";
    for (const auto& r : results) {
      for (size_t i = 0; i < keys.size(); ++i) {
        if (i) os << "\t";
        if (auto it = r.find(keys[i]); it != r.end()) os << detail::tsv_cell(*it);
      }
      os << "\n";
    }
    return os.str();
  }
};

}
