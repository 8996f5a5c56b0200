#pragma once

// JSON wire formats for every public structure. Built on nlohmann::json;
// ordered_json keeps keys in emission order so serialized output is stable.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ubp/arcset.hpp"
#include "ubp/blocks.hpp"
#include "ubp/covering.hpp"
#include "ubp/droplet.hpp"
#include "ubp/engine.hpp"
#include "ubp/errors.hpp"
#include "ubp/family.hpp"
#include "ubp/growth.hpp"
#include "ubp/stable_set.hpp"
#include "ubp/ublock.hpp"

namespace ubp {

using json = nlohmann::ordered_json;

inline json site_json(const Site& s) { return json::array({s.x, s.y}); }

inline Site site_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer())
    throw ParseError(ParseCode::BadShape, "expected an integer pair");
  return Site{j[0].get<i64>(), j[1].get<i64>()};
}

inline json dir_json(const Dir& d) { return json::array({d.x, d.y}); }

inline Dir dir_from_json(const json& j) {
  const Site s = site_from_json(j);
  if (s.x == 0 && s.y == 0)
    throw ParseError(ParseCode::BadShape, "direction must be nonzero");
  return dir_from(s.x, s.y);
}

// ---------------------------------------------------------------- families

inline UpdateFamily parse_family(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseCode::MalformedJson, e.what());
  }
  if (!j.is_object() || !j.contains("rules") || !j["rules"].is_array())
    throw ParseError(ParseCode::BadShape,
                     "expected an object with a \"rules\" array");
  std::vector<std::vector<Site>> rules;
  int ri = 0;
  for (const json& jr : j["rules"]) {
    if (!jr.is_array())
      throw ParseError(ParseCode::BadShape,
                       "rule must be an array of offsets", ri);
    std::vector<Site> rule;
    for (const json& jo : jr) {
      if (!jo.is_array() || jo.size() != 2)
        throw ParseError(ParseCode::BadShape,
                         "offset must be an [x, y] pair", ri);
      for (int k = 0; k < 2; ++k) {
        if (jo[k].is_number_integer()) continue;
        // Integer literals wider than 64 bits arrive as floats.
        if (jo[k].is_number_float() &&
            jo[k].get<double>() == std::floor(jo[k].get<double>()))
          throw ParseError(ParseCode::OffsetOverflow, "", ri);
        throw ParseError(ParseCode::BadShape,
                         "offset coordinates must be integers", ri);
      }
      if (jo[0].is_number_unsigned() &&
          jo[0].get<std::uint64_t>() > static_cast<std::uint64_t>(kMaxOffset))
        throw ParseError(ParseCode::OffsetOverflow, "", ri);
      if (jo[1].is_number_unsigned() &&
          jo[1].get<std::uint64_t>() > static_cast<std::uint64_t>(kMaxOffset))
        throw ParseError(ParseCode::OffsetOverflow, "", ri);
      rule.push_back(Site{jo[0].get<i64>(), jo[1].get<i64>()});
    }
    rules.push_back(std::move(rule));
    ++ri;
  }
  return UpdateFamily::validated(std::move(rules));
}

inline json family_json(const UpdateFamily& fam) {
  json rules = json::array();
  for (const auto& rule : fam.rules) {
    json jr = json::array();
    for (const Site& s : rule) jr.push_back(site_json(s));
    rules.push_back(std::move(jr));
  }
  return json{{"rules", std::move(rules)}};
}

inline std::string serialize_family(const UpdateFamily& fam) {
  return family_json(fam).dump(2) + "\n";
}

// -------------------------------------------------------------------- arcs

inline json arc_json(const Arc& a) {
  return json{{"start", dir_json(a.start)},
              {"end", dir_json(a.end)},
              {"start_closed", a.closed_start},
              {"end_closed", a.closed_end}};
}

inline Arc arc_from_json(const json& j) {
  if (!j.is_object() || !j.contains("start") || !j.contains("end") ||
      !j.contains("start_closed") || !j.contains("end_closed"))
    throw ParseError(ParseCode::BadShape, "expected an arc object");
  Arc a;
  a.start = dir_from_json(j["start"]);
  a.end = dir_from_json(j["end"]);
  a.closed_start = j["start_closed"].get<bool>();
  a.closed_end = j["end_closed"].get<bool>();
  return a;
}

inline json arcset_json(const ArcSet& s) {
  json arcs = json::array();
  for (const Arc& a : s.arcs()) arcs.push_back(arc_json(a));
  return json{{"full_circle", s.is_full()}, {"arcs", std::move(arcs)}};
}

inline ArcSet arcset_from_json(const json& j) {
  if (!j.is_object() || !j.contains("full_circle") || !j.contains("arcs"))
    throw ParseError(ParseCode::BadShape, "expected an arc-set object");
  if (j["full_circle"].get<bool>()) return ArcSet::full_circle();
  std::vector<Arc> arcs;
  for (const json& ja : j["arcs"]) arcs.push_back(arc_from_json(ja));
  return ArcSet::from_arcs(arcs);
}

inline json classification_json(const Classification& c) {
  json j{{"kind", kind_name(c.kind)}};
  j["witness"] = c.witness ? arc_json(*c.witness) : json(nullptr);
  return j;
}

// ------------------------------------------------------------------ blocks

inline json blocks_json(const std::vector<BreakthroughBlock>& blocks) {
  json out = json::array();
  for (const BreakthroughBlock& b : blocks) {
    json sites = json::array();
    for (const Site& s : b.sites) sites.push_back(site_json(s));
    out.push_back(json{{"sites", std::move(sites)},
                       {"source_rule", b.source_rule},
                       {"direction_arc", arc_json(b.direction_arc)},
                       {"rule_anchor", site_json(b.rule_anchor)}});
  }
  return out;
}

inline std::string dir_key(const Dir& d) {
  return std::to_string(d.x) + "," + std::to_string(d.y);
}

inline json alpha_report_json(const std::optional<std::size_t>& a1,
                              const Alpha2Report& a2) {
  json per = json::object();
  for (const auto& [u, len] : a2.per_direction)
    per[dir_key(u)] = len ? json(*len) : json(nullptr);
  json j;
  j["alpha1"] = a1 ? json(*a1) : json(nullptr);
  j["alpha2"] = a2.value ? json(*a2.value) : json(nullptr);
  j["per_direction"] = std::move(per);
  return j;
}

inline json ublock_json(const UBlockVerdict& v) {
  json j{{"status", ublock_status_name(v.status)},
         {"window_w", v.window_w},
         {"window_h", v.window_h}};
  j["certificate"] = v.certificate ? json(*v.certificate) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------- droplets

inline json droplet_json(const Droplet& d) {
  json cons = json::array();
  for (std::size_t i = 0; i < d.dirs.size(); ++i)
    cons.push_back(json{{"direction", dir_json(d.dirs[i])},
                        {"offset", d.offsets[i]}});
  return json{{"constraints", std::move(cons)}};
}

inline Droplet droplet_from_json(const json& j) {
  if (!j.is_object() || !j.contains("constraints") ||
      !j["constraints"].is_array())
    throw ParseError(ParseCode::BadShape, "expected a droplet object");
  Droplet d;
  for (const json& jc : j["constraints"]) {
    if (!jc.is_object() || !jc.contains("direction") || !jc.contains("offset"))
      throw ParseError(ParseCode::BadShape, "expected a constraint object");
    d.dirs.push_back(dir_from_json(jc["direction"]));
    d.offsets.push_back(jc["offset"].get<i64>());
  }
  return d;
}

namespace detail {

inline double diam_of_sq(i128 sq) {
  return std::sqrt(static_cast<double>(sq));
}

}  // namespace detail

inline json cover_json(const CoverResult& r) {
  json blocks = json::array();
  for (const PlacedBlock& pb : r.selected) {
    json sites = json::array();
    for (const Site& s : pb.sites) sites.push_back(site_json(s));
    blocks.push_back(json{{"shape", pb.shape_index},
                          {"anchor", site_json(pb.anchor)},
                          {"sites", std::move(sites)}});
  }
  json droplets = json::array();
  for (const Droplet& d : r.droplets) droplets.push_back(droplet_json(d));
  json trace = json::array();
  for (const MergeEvent& ev : r.merge_trace)
    trace.push_back(json{{"diam_first", detail::diam_of_sq(ev.sq_first)},
                         {"diam_second", detail::diam_of_sq(ev.sq_second)},
                         {"diam_max_before", detail::diam_of_sq(ev.sq_max_before)},
                         {"diam_merged", detail::diam_of_sq(ev.sq_merged)}});
  return json{{"blocks", std::move(blocks)},
              {"droplets", std::move(droplets)},
              {"merge_trace", std::move(trace)}};
}

// ------------------------------------------------------------------ growth

inline json growth_json(const GrowthReport& r) {
  json dirs = json::array();
  for (const Dir& d : r.directions) dirs.push_back(dir_json(d));
  json steps = json::array();
  for (const GrowthStep& s : r.steps)
    steps.push_back(json{{"m", s.m},
                         {"passed", s.passed},
                         {"new_lines", s.new_lines},
                         {"blocks_placed", s.blocks_placed},
                         {"target_sites", s.target_sites}});
  return json{{"u_r", dir_json(r.u_r)},
              {"u_l", dir_json(r.u_l)},
              {"u_plus", dir_json(r.u_plus)},
              {"directions", std::move(dirs)},
              {"block_len", r.block_len},
              {"lambda_x", r.lambda_x},
              {"mu", r.mu},
              {"min_mu", r.min_mu},
              {"steps", std::move(steps)},
              {"all_passed", r.all_passed}};
}

inline json witness_json(const SupercriticalWitness& w) {
  json seed = json::array();
  for (const Site& s : w.seed) seed.push_back(site_json(s));
  return json{{"seed", std::move(seed)},
              {"cap", w.cap},
              {"exceeded_at_cap", w.exceeded_at_cap},
              {"exceeded_at_double", w.exceeded_at_double}};
}

// --------------------------------------------------------------- snapshots

/// Run-length state snapshot: row-major over the grid from cell (0,0),
/// alternating run lengths starting with an empty run.
inline json lattice_json(const Lattice& l) {
  json j;
  j["mode"] = l.mode == Lattice::Mode::Torus ? "torus" : "rect";
  j["width"] = l.width();
  j["height"] = l.height();
  j["origin"] = site_json(l.origin);
  if (l.boundary == Boundary::VirtualHalfPlane) {
    j["boundary"] = "halfplane";
    j["halfplane_u"] = dir_json(l.halfplane_u);
  } else {
    j["boundary"] = "empty";
  }
  json runs = json::array();
  bool state = false;
  long long run = 0;
  for (int y = 0; y < l.height(); ++y)
    for (int x = 0; x < l.width(); ++x) {
      const bool b = l.grid.get(x, y);
      if (b == state) {
        ++run;
      } else {
        runs.push_back(run);
        state = b;
        run = 1;
      }
    }
  runs.push_back(run);
  j["runs"] = std::move(runs);
  return j;
}

inline Lattice lattice_from_json(const json& j) {
  if (!j.is_object() || !j.contains("mode") || !j.contains("width") ||
      !j.contains("height") || !j.contains("runs"))
    throw ParseError(ParseCode::BadShape, "expected a lattice snapshot");
  const int w = j["width"].get<int>();
  const int h = j["height"].get<int>();
  if (w <= 0 || h <= 0)
    throw ParseError(ParseCode::BadShape, "snapshot dimensions must be positive");
  Lattice l;
  const std::string mode = j["mode"].get<std::string>();
  if (mode == "torus") {
    if (w != h)
      throw ParseError(ParseCode::BadShape, "torus snapshot must be square");
    l = Lattice::torus(w);
  } else if (mode == "rect") {
    const Site origin =
        j.contains("origin") ? site_from_json(j["origin"]) : Site{0, 0};
    const std::string boundary =
        j.contains("boundary") ? j["boundary"].get<std::string>() : "empty";
    if (boundary == "halfplane")
      l = Lattice::rect_halfplane(w, h, origin,
                                  dir_from_json(j.at("halfplane_u")));
    else
      l = Lattice::rect_at(w, h, origin);
  } else {
    throw ParseError(ParseCode::BadShape, "unknown snapshot mode");
  }
  long long pos = 0;
  bool state = false;
  const long long total = static_cast<long long>(w) * h;
  for (const json& jr : j["runs"]) {
    const long long run = jr.get<long long>();
    if (run < 0 || pos + run > total)
      throw ParseError(ParseCode::BadShape, "snapshot runs exceed the grid");
    if (state)
      for (long long k = pos; k < pos + run; ++k)
        l.grid.set(static_cast<int>(k % w), static_cast<int>(k / w), true);
    pos += run;
    state = !state;
  }
  if (pos != total)
    throw ParseError(ParseCode::BadShape, "snapshot runs do not fill the grid");
  return l;
}

}  // namespace ubp
