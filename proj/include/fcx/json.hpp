#pragma once

// JSON encodings shared by the command-line tool and the cache.
//
//   automorphism  {"x": "xy", "y": "y", "inverse": {"x": "xY", "y": "y"}}
//   core graph    {"rank": n, "basepoint": 0, "edges": [[src, dst, "x"], ...]}
//   complex       {"vertices": ["label", ...], "facets": [[i, j, ...], ...]}
//   homology      {"groups": [{"degree": d, "betti": b, "torsion": [t, ...]}, ...]}

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "buildings.hpp"
#include "complexes.hpp"
#include "error.hpp"
#include "factor_complex.hpp"
#include "homology.hpp"
#include "stallings.hpp"
#include "words.hpp"

namespace fcx {

  using json = nlohmann::json;

  namespace detail {
    inline json big(BigInt const& v) {
      if (v >= std::numeric_limits<std::int64_t>::min()
          && v <= std::numeric_limits<std::int64_t>::max()) {
        return static_cast<std::int64_t>(v);
      }
      return v.str();
    }

    inline json word_map(std::vector<Word> const& ws) {
      json j = json::object();
      for (std::size_t i = 0; i < ws.size(); ++i) {
        j[generator_name(static_cast<int>(i) + 1)] = ws[i].str();
      }
      return j;
    }

    inline std::vector<Word> parse_word_map(int rank, json const& j) {
      std::vector<Word> ws;
      for (int i = 1; i <= rank; ++i) {
        std::string name = generator_name(i);
        if (!j.contains(name) || !j[name].is_string()) {
          throw InputError("automorphism JSON is missing the image of " + name);
        }
        ws.push_back(Word::parse(rank, j[name].get<std::string>()));
      }
      return ws;
    }
  }  // namespace detail

  inline json to_json(Automorphism const& a) {
    json j       = detail::word_map(a.images());
    j["inverse"] = detail::word_map(a.inverse_images());
    return j;
  }

  inline Automorphism automorphism_from_json(json const& j) {
    if (!j.is_object() || !j.contains("inverse")) {
      throw InputError("automorphism JSON needs generator images and an \"inverse\" object");
    }
    int rank = static_cast<int>(j.size()) - 1;
    return Automorphism(rank, detail::parse_word_map(rank, j),
                        detail::parse_word_map(rank, j["inverse"]));
  }

  inline json to_json(CoreGraph const& g) {
    json edges = json::array();
    for (Edge const& e : g.edges()) {
      edges.push_back({e.src, e.dst, generator_name(e.label)});
    }
    return {{"rank", g.ambient_rank()}, {"basepoint", g.basepoint()}, {"edges", edges}};
  }

  inline CoreGraph core_graph_from_json(json const& j) {
    try {
      int               rank = j.at("rank").get<int>();
      int               nv   = 1;
      std::vector<Edge> edges;
      for (auto const& e : j.at("edges")) {
        std::string l = e.at(2).get<std::string>();
        if (l.size() != 1) {
          throw InputError("edge label must be a generator name");
        }
        Edge ed{e.at(0).get<int>(), e.at(1).get<int>(), generator_index(l[0])};
        nv = std::max({nv, ed.src + 1, ed.dst + 1});
        edges.push_back(ed);
      }
      return CoreGraph::fold(rank, nv, j.at("basepoint").get<int>(), edges);
    } catch (json::exception const& e) {
      throw InputError(std::string("malformed core graph JSON: ") + e.what());
    }
  }

  inline json to_json(SimplicialComplex const& k) {
    json facets = json::array();
    for (auto const& f : k.facets()) {
      facets.push_back(f);
    }
    return {{"vertices", k.vertex_labels()}, {"facets", facets}};
  }

  inline SimplicialComplex complex_from_json(json const& j) {
    try {
      return SimplicialComplex(j.at("vertices").get<std::vector<std::string>>(),
                               j.at("facets").get<std::vector<Simplex>>());
    } catch (json::exception const& e) {
      throw InputError(std::string("malformed complex JSON: ") + e.what());
    }
  }

  inline json to_json(HomologyResult const& h) {
    json groups = json::array();
    for (int d = -1; d <= h.top_degree(); ++d) {
      json t = json::array();
      for (auto const& x : h.torsion(d)) {
        t.push_back(detail::big(x));
      }
      groups.push_back({{"degree", d}, {"betti", h.betti(d)}, {"torsion", t}});
    }
    return {{"groups", groups}, {"torsion_free", h.torsion_free()}};
  }

  inline json to_json(FreeFactor const& f) {
    json basis = json::array();
    for (auto const& w : f.basis()) {
      basis.push_back(w.str());
    }
    return {{"key", f.key()}, {"rank", f.rank()}, {"basis", basis}, {"witness", to_json(f.witness())}};
  }

  //! Rebuilds a factor from its basis words, re-verifying the stored witness.
  inline FreeFactor free_factor_from_json(int ambient_rank, json const& j) {
    try {
      std::vector<Word> gens;
      for (auto const& w : j.at("basis")) {
        gens.push_back(Word::parse(ambient_rank, w.get<std::string>()));
      }
      return FreeFactor::from_witness(build(ambient_rank, gens),
                                      automorphism_from_json(j.at("witness")));
    } catch (json::exception const& e) {
      throw InputError(std::string("malformed free factor JSON: ") + e.what());
    }
  }

  inline json to_json(FqSubspace const& s) {
    return {{"q", s.q()}, {"rows", s.rows()}};
  }

  inline json to_json(QSubspace const& s) {
    json rows = json::array();
    for (auto const& r : s.rows()) {
      json row = json::array();
      for (auto const& x : r) {
        row.push_back(x.str());
      }
      rows.push_back(row);
    }
    return {{"rows", rows}};
  }

}  // namespace fcx
