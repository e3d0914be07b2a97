#pragma once

// The fcx command-line tool. run() parses arguments, executes one
// subcommand and writes the result to `out` (text or JSON); diagnostics go
// to `err`. Exit statuses: 0 success, 2 computation error, 3 resource cap
// reached, 64 usage error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "buildings.hpp"
#include "cache.hpp"
#include "complexes.hpp"
#include "error.hpp"
#include "factor_complex.hpp"
#include "homology.hpp"
#include "json.hpp"
#include "stallings.hpp"
#include "whitehead.hpp"
#include "words.hpp"

namespace fcx::cli {

  enum ExitStatus : int { ok = 0, computation_error = 2, resource_limit = 3, usage_error = 64 };

  //! Environment variable naming the cache directory when --cache-dir is
  //! not given.
  inline constexpr char const* cache_env = "FCX_CACHE_DIR";

  struct RunConfig {
    bool                                 json    = false;
    std::uint64_t                        seed    = 20240601;
    unsigned                             threads = 1;
    std::optional<std::filesystem::path> cache_dir;
    bool                                 no_cache       = false;
    std::size_t                          max_facets     = default_max_facets;
    std::size_t                          max_factors    = 250'000;
    std::size_t                          max_cells      = 5'000'000;
    double                               time_budget    = 0;  // seconds; 0 = none
  };

  namespace detail {

    using fcx::json;

    inline int infer_rank(std::vector<std::string> const& texts) {
      int r = 1;
      for (auto const& t : texts) {
        for (char c : t) {
          if (std::isalpha(static_cast<unsigned char>(c))) {
            r = std::max(r, generator_index(c));
          }
        }
      }
      return r;
    }

    inline std::vector<Word> parse_words(int rank, std::vector<std::string> const& texts) {
      std::vector<Word> out;
      for (auto const& t : texts) {
        out.push_back(Word::parse(rank, t));
      }
      return out;
    }

    inline std::vector<std::string> split(std::string const& s, char sep) {
      std::vector<std::string> out;
      std::stringstream        ss(s);
      std::string              part;
      while (std::getline(ss, part, sep)) {
        out.push_back(part);
      }
      return out;
    }

    class Session {
     public:
      Session(RunConfig cfg, std::ostream& out, std::ostream& err)
          : cfg_(std::move(cfg)), out_(out), err_(err) {
        if (cfg_.time_budget > 0) {
          deadline_ = std::chrono::steady_clock::now()
                      + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(cfg_.time_budget));
        }
      }

      RunConfig const& config() const noexcept {
        return cfg_;
      }

      std::ostream& err() {
        return err_;
      }

      //! Writes `result` as JSON, or `text` otherwise.
      void emit(json const& result, std::string const& text) {
        if (cfg_.json) {
          out_ << result.dump(2) << "\n";
        } else {
          out_ << text;
        }
      }

      HomologyResult homology(SimplicialComplex const& k) {
        double cells = 0;
        for (auto const& f : k.facets()) {
          cells += std::ldexp(1.0, static_cast<int>(f.size())) - 1;
        }
        if (cells > static_cast<double>(cfg_.max_cells)) {
          throw ResourceLimit("complex may have up to " + std::to_string(static_cast<long long>(cells))
                                  + " faces, above the cap of " + std::to_string(cfg_.max_cells),
                              "complex built with " + std::to_string(k.facets().size())
                                  + " facets; homology not started");
        }
        return reduced_homology(k);
      }

      std::optional<Cache> cache() {
        if (cfg_.no_cache) {
          return std::nullopt;
        }
        std::optional<std::filesystem::path> dir = cfg_.cache_dir;
        if (!dir) {
          if (char const* env = std::getenv(cache_env); env != nullptr && *env != '\0') {
            dir = env;
          }
        }
        if (!dir) {
          return std::nullopt;
        }
        try {
          return Cache(*dir, FCX_VERSION, &err_);
        } catch (std::exception const& e) {
          err_ << "warning: caching disabled, cannot use " << dir->string() << ": " << e.what()
               << "\n";
          return std::nullopt;
        }
      }

      EnumerationLimits enumeration_limits(bool saturation) const {
        EnumerationLimits l;
        l.max_factors      = cfg_.max_factors;
        l.threads          = std::max(1U, cfg_.threads);
        l.check_saturation = saturation;
        l.deadline         = deadline_;
        return l;
      }

      std::mt19937_64 rng() const {
        return std::mt19937_64(cfg_.seed);
      }

     private:
      RunConfig                                            cfg_;
      std::ostream&                                        out_;
      std::ostream&                                        err_;
      std::optional<std::chrono::steady_clock::time_point> deadline_;
    };

    inline std::string complex_summary(SimplicialComplex const& k) {
      std::ostringstream os;
      os << "vertices: " << k.num_vertices() << "\n"
         << "facets: " << k.facets().size() << "\n"
         << "dimension: " << k.dimension() << "\n"
         << "f-vector:";
      for (auto c : k.f_vector()) {
        os << " " << c;
      }
      os << "\n";
      return os.str();
    }

    inline void add_complex(json& j, SimplicialComplex const& k) {
      j["complex"]   = to_json(k);
      j["dimension"] = k.dimension();
      j["f_vector"]  = k.f_vector();
    }

    inline void write_file(std::string const& path, json const& j) {
      std::ofstream f(path);
      f << j.dump(2) << "\n";
      if (!f) {
        throw InputError("cannot write " + path);
      }
    }

    inline json read_file(std::string const& path) {
      try {
        if (path == "-") {
          return json::parse(std::cin);
        }
        std::ifstream f(path);
        if (!f) {
          throw InputError("cannot read " + path);
        }
        return json::parse(f);
      } catch (json::exception const& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
      }
    }

    // A random automorphism: a product of 1..4 Whitehead moves.
    inline Automorphism random_automorphism(int rank, std::mt19937_64& rng) {
      auto const&  moves = whitehead_moves(rank);
      Automorphism a     = Automorphism::identity(rank);
      int          len   = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < len; ++i) {
        a = compose(moves[rng() % moves.size()], a);
      }
      return a;
    }

    ////////////////////////////////////////////////////////////////////////
    // Decision commands
    ////////////////////////////////////////////////////////////////////////

    struct DecisionArgs {
      std::vector<std::string> inputs;
      int                      rank      = 0;
      bool                     trace     = false;
      int                      invariance = 0;
    };

    inline int resolve_rank(DecisionArgs const& a) {
      int r = a.rank > 0 ? a.rank : infer_rank(a.inputs);
      if (r > max_rank) {
        throw InputError("rank above " + std::to_string(max_rank));
      }
      return r;
    }

    inline std::string trace_text(MinimizationTrace const& t) {
      std::ostringstream os;
      os << "start edges: " << t.start.num_edges() << "\n";
      for (auto const& s : t.moves) {
        os << "  " << s.move.str() << " -> " << s.edges << " edges\n";
      }
      return os.str();
    }

    // Applies `samples` random automorphisms to the input words and checks
    // that `decide` gives the same answer; returns the number that agree.
    template <typename Decide>
    json invariance(Session& s, int rank, std::vector<Word> const& ws, int samples, bool value,
                    Decide decide) {
      if (rank > max_move_rank) {
        throw InputError("invariance sampling needs rank <= " + std::to_string(max_move_rank));
      }
      auto rng   = s.rng();
      int  agree = 0;
      for (int i = 0; i < samples; ++i) {
        Automorphism      a = random_automorphism(rank, rng);
        std::vector<Word> img;
        for (auto const& w : ws) {
          img.push_back(apply(a, w));
        }
        agree += decide(img) == value ? 1 : 0;
      }
      if (agree != samples) {
        throw std::logic_error("decision changed under an automorphism in "
                               + std::to_string(samples - agree) + " of "
                               + std::to_string(samples) + " samples");
      }
      return {{"samples", samples}, {"agree", agree}, {"seed", s.config().seed}};
    }

    inline int cmd_primitive(Session& s, DecisionArgs const& a) {
      int const  n = resolve_rank(a);
      Word const w = Word::parse(n, a.inputs.at(0));
      auto       d = is_primitive_decision(w);
      json       j{{"command", "primitive"}, {"rank", n}, {"word", w.str()}, {"value", d.value}};
      std::string text = d.value ? "true\n" : "false\n";
      if (d.witness) {
        j["witness"] = to_json(*d.witness);
      }
      if (a.trace) {
        text += trace_text(d.trace);
        if (d.witness) {
          text += "witness: " + d.witness->str() + "\n";
        }
      }
      if (a.invariance > 0) {
        j["invariance"] = invariance(s, n, {w}, a.invariance, d.value,
                                     [](std::vector<Word> const& ws) {
                                       return !ws[0].empty() && is_primitive(ws[0]);
                                     });
        text += "invariance: " + std::to_string(a.invariance) + "/"
                + std::to_string(a.invariance) + " agree\n";
      }
      s.emit(j, text);
      return ok;
    }

    inline int cmd_free_factor(Session& s, DecisionArgs const& a) {
      int const n  = resolve_rank(a);
      auto      ws = parse_words(n, a.inputs);
      auto      g  = build(n, ws);
      auto      d  = is_free_factor(g);
      json j{{"command", "free-factor"}, {"rank", n}, {"subgroup", FreeFactor::describe(g)},
             {"subgroup_rank", g.rank()}, {"value", d.value}};
      std::string text = d.value ? "true\n" : "false\n";
      if (d.witness) {
        j["witness"] = to_json(*d.witness);
      }
      if (a.trace) {
        text += "subgroup: " + FreeFactor::describe(g) + "\n" + trace_text(d.trace);
        if (d.witness) {
          text += "witness: " + d.witness->str() + "\n";
        }
      }
      if (a.invariance > 0) {
        j["invariance"] = invariance(s, n, ws, a.invariance, d.value,
                                     [n](std::vector<Word> const& img) {
                                       return is_free_factor(build(n, img)).value;
                                     });
        text += "invariance: " + std::to_string(a.invariance) + "/"
                + std::to_string(a.invariance) + " agree\n";
      }
      s.emit(j, text);
      return ok;
    }

    inline int cmd_basis_check(Session& s, DecisionArgs const& a) {
      int const n  = resolve_rank(a);
      auto      ws = parse_words(n, a.inputs);
      auto      d  = extends_to_basis(n, ws);
      json      j{{"command", "basis-check"}, {"rank", n}, {"value", d.value}};
      std::string text = d.value ? "true\n" : "false\n";
      if (d.value) {
        json c = json::array();
        for (auto const& w : d.completion) {
          c.push_back(w.str());
        }
        j["completion"] = c;
        j["witness"]    = to_json(*d.witness);
      } else {
        j["reason"] = d.reason;
      }
      if (a.trace) {
        if (d.value) {
          text += "completion:";
          for (auto const& w : d.completion) {
            text += " " + w.str();
          }
          text += "\n";
        } else {
          text += "reason: " + d.reason + "\n";
        }
      }
      if (a.invariance > 0) {
        j["invariance"] = invariance(s, n, ws, a.invariance, d.value,
                                     [n](std::vector<Word> const& img) {
                                       return extends_to_basis(n, img).value;
                                     });
        text += "invariance: " + std::to_string(a.invariance) + "/"
                + std::to_string(a.invariance) + " agree\n";
      }
      s.emit(j, text);
      return ok;
    }

    inline int cmd_z_simplex(Session& s, DecisionArgs const& a) {
      int const              n = resolve_rank(a);
      std::vector<CoreGraph> gs;
      json                   fs = json::array();
      for (auto const& f : a.inputs) {
        auto parts = split(f, ',');
        if (parts.empty()) {
          throw InputError("empty factor in z-simplex input");
        }
        gs.push_back(build(n, parse_words(n, parts)));
        fs.push_back(FreeFactor::describe(gs.back()));
      }
      auto d = is_Z_simplex(gs);
      json j{{"command", "z-simplex"}, {"rank", n}, {"factors", fs}, {"value", d.value},
             {"witnessed", d.witnessed}};
      std::string text = d.value ? "true\n" : "false\n";
      if (d.witness) {
        j["witness"] = to_json(*d.witness);
      }
      if (a.trace) {
        text += d.witness ? "witness: " + d.witness->str() + "\n"
                          : std::string("witness: none (negative answer)\n");
      }
      s.emit(j, text);
      return ok;
    }

    ////////////////////////////////////////////////////////////////////////
    // Complex commands
    ////////////////////////////////////////////////////////////////////////

    struct ComplexArgs {
      std::vector<std::string> inputs;
      int                      rank       = 0;
      bool                     homology   = false;
      bool                     steinberg  = false;
      bool                     saturation = false;
      bool                     override_caps = false;
      int                      n = 0, q = 0, max_edges = 4, depth = 3;
      std::string              emit_path;
    };

    inline void finish_complex(Session& s, ComplexArgs const& a, json& j, std::string& text,
                               SimplicialComplex const& k) {
      add_complex(j, k);
      text += complex_summary(k);
      if (a.homology) {
        auto h        = s.homology(k);
        j["homology"] = to_json(h);
        text += h.str();
      }
      if (!a.emit_path.empty()) {
        write_file(a.emit_path, to_json(k));
      }
    }

    inline int cmd_apartment(Session& s, ComplexArgs const& a) {
      int const n = static_cast<int>(a.inputs.size());
      if (a.rank > 0 && a.rank != n) {
        throw InputError("an apartment of F_" + std::to_string(a.rank) + " needs "
                         + std::to_string(a.rank) + " basis words");
      }
      auto        ap = apartment(n, parse_words(n, a.inputs));
      json        j{{"command", "apartment"}, {"rank", n}};
      std::string text;
      finish_complex(s, a, j, text, ap.complex);
      s.emit(j, text);
      return ok;
    }

    inline json enumeration_json(FactorEnumeration const& e) {
      json fs = json::array();
      for (auto const& f : e.factors) {
        fs.push_back(to_json(f));
      }
      json j{{"factors", fs}, {"new_per_depth", e.new_per_depth}};
      j["next_layer_new"] = e.next_layer_new ? json(*e.next_layer_new) : json(nullptr);
      return j;
    }

    // Rebuilds and re-verifies a cached enumeration.
    inline FactorEnumeration enumeration_from_json(TruncationSpec const& spec, json const& j) {
      FactorEnumeration e;
      for (auto const& f : j.at("factors")) {
        e.factors.push_back(free_factor_from_json(spec.n, f));
        if (e.factors.back().core().num_edges() > spec.max_edges) {
          throw InputError("cached factor exceeds the edge cap");
        }
      }
      e.new_per_depth = j.at("new_per_depth").get<std::vector<std::size_t>>();
      if (!j.at("next_layer_new").is_null()) {
        e.next_layer_new = j.at("next_layer_new").get<std::size_t>();
      }
      std::size_t total = 0;
      for (auto c : e.new_per_depth) {
        total += c;
      }
      bool sorted = std::is_sorted(e.factors.begin(), e.factors.end(),
                                   [](FreeFactor const& x, FreeFactor const& y) {
                                     return x.key() < y.key();
                                   });
      if (total != e.factors.size() || !sorted
          || e.new_per_depth.size() != static_cast<std::size_t>(spec.depth) + 1) {
        throw InputError("cached enumeration is inconsistent");
      }
      return e;
    }

    inline FactorEnumeration cached_enumeration(Session& s, TruncationSpec const& spec,
                                                bool saturation) {
      std::string const key   = spec.canonical() + (saturation ? ";saturation" : "");
      auto              cache = s.cache();
      if (cache) {
        std::optional<FactorEnumeration> hit;
        auto payload = cache->lookup(key, [&](json const& p) {
          hit = enumeration_from_json(spec, p);
          return true;
        });
        if (payload && hit) {
          s.err() << "cache hit: " << cache->path_for(key).string() << "\n";
          return std::move(*hit);
        }
      }
      auto e = enumerate_factors(spec, s.enumeration_limits(saturation));
      if (cache) {
        cache->store(key, enumeration_json(e));
      }
      return e;
    }

    inline int cmd_truncate(Session& s, ComplexArgs const& a) {
      TruncationSpec spec{a.n, a.max_edges, a.depth};
      spec.validate();
      auto e  = cached_enumeration(s, spec, a.saturation);
      auto fc = factor_order_complex(e.factors, s.config().max_facets);
      json j{{"command", "truncate-fc"},
             {"spec", {{"n", spec.n}, {"max_edges", spec.max_edges}, {"depth", spec.depth}}},
             {"num_factors", e.factors.size()},
             {"new_per_depth", e.new_per_depth}};
      std::ostringstream os;
      os << "spec: n=" << spec.n << " max_edges=" << spec.max_edges << " depth=" << spec.depth
         << "\nfactors: " << e.factors.size() << "\nnew per depth:";
      for (auto c : e.new_per_depth) {
        os << " " << c;
      }
      os << "\n";
      if (a.saturation) {
        j["next_layer_new"] = *e.next_layer_new;
        j["saturated"]      = *e.next_layer_new == 0;
        os << "next layer adds: " << *e.next_layer_new
           << (*e.next_layer_new == 0 ? " (saturated)" : " (not saturated)") << "\n";
      }
      std::string text = os.str();
      finish_complex(s, a, j, text, fc.complex);
      s.emit(j, text);
      return ok;
    }

    inline BuildingLimits building_limits(Session& s, ComplexArgs const& a) {
      BuildingLimits l;
      l.max_facets    = s.config().max_facets;
      l.override_caps = a.override_caps;
      return l;
    }

    inline json steinberg_json(SteinbergReport const& r) {
      return {{"computed", r.computed ? json(*r.computed) : json(nullptr)},
              {"expected", ::fcx::detail::big(r.expected)},
              {"euler", ::fcx::detail::big(r.euler)},
              {"pass", r.pass}};
    }

    inline std::string steinberg_text(SteinbergReport const& r) {
      return "steinberg: computed " + (r.computed ? std::to_string(*r.computed) : std::string("-"))
             + ", expected " + r.expected.str() + " = " + std::to_string(r.q) + "^"
             + std::to_string(r.n * (r.n - 1) / 2) + ", euler " + r.euler.str() + ", "
             + (r.pass ? "pass" : "fail") + "\n";
    }

    inline int cmd_building(Session& s, ComplexArgs const& a) {
      auto        b = build_building(a.n, a.q, building_limits(s, a));
      json        j{{"command", "building"}, {"n", a.n}, {"q", a.q}};
      std::string text;
      finish_complex(s, a, j, text, b.complex);
      if (a.steinberg) {
        auto r = steinberg_check(a.n, a.q, building_limits(s, a));
        j["steinberg"] = steinberg_json(r);
        text += steinberg_text(r);
      }
      s.emit(j, text);
      return ok;
    }

    inline int cmd_steinberg(Session& s, ComplexArgs const& a) {
      auto r = steinberg_check(a.n, a.q, building_limits(s, a));
      json j{{"command", "steinberg"}, {"n", a.n}, {"q", a.q}, {"steinberg", steinberg_json(r)},
             {"homology", to_json(r.homology)}};
      s.emit(j, steinberg_text(r));
      return r.pass ? ok : computation_error;
    }

    inline int cmd_map(Session& s, ComplexArgs const& a) {
      int const n = static_cast<int>(a.inputs.size());
      auto      m = induced_apartment_map(n, parse_words(n, a.inputs));
      json      vmap = json::array();
      std::ostringstream os;
      for (std::size_t i = 0; i < m.vertex_map.size(); ++i) {
        auto const& from = m.source.complex.vertex_labels()[i];
        auto const& to   = m.target.complex.vertex_labels()[m.vertex_map[i]];
        vmap.push_back({from, to});
        os << from << " -> " << to << "\n";
      }
      json coeffs = json::array();
      for (auto const& c : m.cycle_image) {
        coeffs.push_back(::fcx::detail::big(c));
      }
      json j{{"command", "map-to-building"},
             {"rank", n},
             {"vertex_map", vmap},
             {"injective", m.injective},
             {"facets_to_facets", m.facets_to_facets},
             {"onto", m.onto},
             {"cycle_image", coeffs},
             {"cycle_image_unit", m.cycle_image_unit},
             {"cycle_image_is_cycle", m.cycle_image_is_cycle},
             {"verified", m.verified()},
             {"source", to_json(m.source.complex)},
             {"target", to_json(m.target.complex)}};
      os << "injective: " << (m.injective ? "true" : "false") << "\n"
         << "facets to facets: " << (m.facets_to_facets ? "true" : "false") << "\n"
         << "onto: " << (m.onto ? "true" : "false") << "\n"
         << "fundamental cycle image:";
      for (auto const& c : m.cycle_image) {
        os << " " << c;
      }
      os << "\nverified: " << (m.verified() ? "true" : "false") << "\n";
      s.emit(j, os.str());
      return m.verified() ? ok : computation_error;
    }

    inline int cmd_homology(Session& s, ComplexArgs const& a) {
      auto k = complex_from_json(read_file(a.inputs.at(0)));
      auto h = s.homology(k);
      json j{{"command", "homology"}, {"homology", to_json(h)}};
      s.emit(j, h.str());
      return ok;
    }

    inline int cmd_link(Session& s, ComplexArgs const& a) {
      auto                     k = complex_from_json(read_file(a.inputs.at(0)));
      std::vector<std::string> labels(a.inputs.begin() + 1, a.inputs.end());
      auto                     l = link(k, labels);
      json                     j{{"command", "link"}, {"simplex", labels}};
      std::string              text;
      finish_complex(s, a, j, text, l);
      s.emit(j, text);
      return ok;
    }

  }  // namespace detail

  //! `args` excludes the program name.
  inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    RunConfig    cfg;
    DecisionArgs da;
    ComplexArgs  ca;
    std::string  cache_dir;

    CLI::App app{"Free-factor complexes, Whitehead decisions and spherical buildings", "fcx"};
    app.require_subcommand(1);
    app.set_version_flag("--version", FCX_VERSION);
    app.add_flag("--json", cfg.json, "Emit JSON instead of text");
    app.add_option("--seed", cfg.seed, "Seed for randomized sampling");
    app.add_option("--threads", cfg.threads, "Worker threads for enumeration")
        ->check(CLI::PositiveNumber);
    app.add_option("--cache-dir", cache_dir,
                   std::string("Cache directory (default: $") + cache_env + ", else none)");
    app.add_flag("--no-cache", cfg.no_cache, "Disable the on-disk cache");
    app.add_option("--max-facets", cfg.max_facets, "Cap on maximal chains of an order complex")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-factors", cfg.max_factors, "Cap on enumerated free factors")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-cells", cfg.max_cells, "Cap on faces entering a homology computation")
        ->check(CLI::PositiveNumber);
    app.add_option("--time-budget", cfg.time_budget,
                   "Seconds allowed for factor enumeration (0: unlimited)")
        ->check(CLI::NonNegativeNumber);

    auto decision = [&](char const* name, char const* help, char const* what, bool single) {
      auto* sub = app.add_subcommand(name, help);
      sub->fallthrough();
      auto* opt = sub->add_option(what, da.inputs, "Words over x, y, z, a, b, ...; capitals are inverses")
                      ->required();
      if (single) {
        opt->expected(1);
      }
      sub->add_option("--rank", da.rank, "Rank of the free group (default: largest letter used)")
          ->check(CLI::Range(1, max_rank));
      sub->add_flag("--trace", da.trace, "Show the reduction trace and witness");
      return sub;
    };
    auto* primitive = decision("primitive", "Is the word part of a basis?", "word", true);
    primitive->add_option("--check-invariance", da.invariance,
                          "Recheck under this many seeded random automorphisms");
    auto* free_factor = decision("free-factor", "Is the generated subgroup a free factor?", "words", false);
    free_factor->add_option("--check-invariance", da.invariance,
                            "Recheck under this many seeded random automorphisms");
    auto* basis_check = decision("basis-check", "Do the words extend to a basis?", "words", false);
    basis_check->add_option("--check-invariance", da.invariance,
                            "Recheck under this many seeded random automorphisms");
    auto* z_simplex = decision("z-simplex",
                               "Are the corank-one factors (comma-separated generators) a Z-simplex?",
                               "factors", false);

    auto complex_cmd = [&](char const* name, char const* help) {
      auto* sub = app.add_subcommand(name, help);
      sub->fallthrough();
      sub->add_flag("--homology", ca.homology, "Compute reduced integral homology");
      sub->add_option("--emit", ca.emit_path, "Also write the complex JSON to this file");
      return sub;
    };
    auto* apart = complex_cmd("apartment", "Apartment of FC_n spanned by a basis");
    apart->add_option("basis", ca.inputs, "Basis words")->required();
    apart->add_option("--rank", ca.rank, "Expected rank (checked against the word count)");

    auto* trunc = complex_cmd("truncate-fc", "Finite truncation of FC_n");
    trunc->add_option("n", ca.n, "Rank of the free group")->required();
    trunc->add_option("--max-edges", ca.max_edges, "Largest core graph kept")->capture_default_str();
    trunc->add_option("--depth", ca.depth, "Number of Whitehead layers")->capture_default_str();
    trunc->add_flag("--saturation", ca.saturation, "Report whether one more layer adds factors");

    auto* building = complex_cmd("building", "Spherical building of F_q^n");
    building->add_option("n", ca.n, "Dimension")->required();
    building->add_option("q", ca.q, "Prime field size")->required();
    building->add_flag("--steinberg", ca.steinberg, "Compare the top rank with q^(n(n-1)/2)");
    building->add_flag("--override-caps", ca.override_caps, "Allow sizes beyond the default caps");

    auto* stein = app.add_subcommand("steinberg", "Steinberg rank check for the F_q^n building");
    stein->fallthrough();
    stein->add_option("n", ca.n, "Dimension")->required();
    stein->add_option("q", ca.q, "Prime field size")->required();
    stein->add_flag("--override-caps", ca.override_caps, "Allow sizes beyond the default caps");

    auto* map = app.add_subcommand("map-to-building", "Abelianization of the apartment of a basis");
    map->fallthrough();
    map->add_option("basis", ca.inputs, "Basis words")->required();

    auto* hom = app.add_subcommand("homology", "Reduced homology of a complex JSON file");
    hom->fallthrough();
    hom->add_option("file", ca.inputs, "Complex JSON ('-' for stdin)")->required()->expected(1);

    auto* lnk = complex_cmd("link", "Link of a simplex given by vertex labels");
    lnk->add_option("args", ca.inputs, "Complex JSON file followed by vertex labels")
        ->required()
        ->expected(1, -1);

    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (CLI::CallForHelp const& e) {
      return app.exit(e, out, err);
    } catch (CLI::CallForAllHelp const& e) {
      return app.exit(e, out, err);
    } catch (CLI::CallForVersion const& e) {
      return app.exit(e, out, err);
    } catch (CLI::ParseError const& e) {
      app.exit(e, out, err);
      return usage_error;
    }
    if (!cache_dir.empty()) {
      cfg.cache_dir = cache_dir;
    }

    Session s(cfg, out, err);
    auto    report = [&](char const* kind, std::string const& msg, int status,
                      std::string const& progress = "") {
      err << "error: " << msg << "\n";
      if (!progress.empty()) {
        err << "progress: " << progress << "\n";
      }
      if (cfg.json) {
        json j{{"error", kind}, {"message", msg}};
        if (!progress.empty()) {
          j["progress"] = progress;
        }
        out << j.dump(2) << "\n";
      }
      return status;
    };
    try {
      if (primitive->parsed()) return cmd_primitive(s, da);
      if (free_factor->parsed()) return cmd_free_factor(s, da);
      if (basis_check->parsed()) return cmd_basis_check(s, da);
      if (z_simplex->parsed()) return cmd_z_simplex(s, da);
      if (apart->parsed()) return cmd_apartment(s, ca);
      if (trunc->parsed()) return cmd_truncate(s, ca);
      if (building->parsed()) return cmd_building(s, ca);
      if (stein->parsed()) return cmd_steinberg(s, ca);
      if (map->parsed()) return cmd_map(s, ca);
      if (hom->parsed()) return cmd_homology(s, ca);
      if (lnk->parsed()) return cmd_link(s, ca);
    } catch (ResourceLimit const& e) {
      return report("resource_limit", e.what(), resource_limit, e.progress());
    } catch (InputError const& e) {
      return report("usage", e.what(), usage_error);
    } catch (RankMismatch const& e) {
      return report("usage", e.what(), usage_error);
    } catch (std::exception const& e) {
      return report("computation", e.what(), computation_error);
    }
    return usage_error;
  }

  inline int run(int argc, char const* const* argv, std::ostream& out = std::cout,
                 std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
  }

}  // namespace fcx::cli
