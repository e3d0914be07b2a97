#pragma once

// Abstract simplicial complexes stored by their facets, order complexes of
// finite posets, links and face statistics.
//
// Vertices carry opaque string labels and are always kept sorted by label;
// that order is the orientation order used for boundary signs. A complex
// with no vertices is the complex {∅} whose only face is the empty simplex.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"

namespace fcx {

  using Simplex = std::vector<int>;  // sorted vertex indices

  class SimplicialComplex {
   public:
    //! The complex {∅}.
    SimplicialComplex() = default;

    //! Labels may come in any order and must be distinct; facets index into
    //! `labels`. Non-maximal and duplicate facets are dropped; vertices in
    //! no facet become isolated points.
    SimplicialComplex(std::vector<std::string> labels,
                      std::vector<Simplex> const& facets) {
      std::vector<int> order(labels.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = static_cast<int>(i);
      }
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return labels[a] < labels[b]; });
      std::vector<int> remap(labels.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        remap[order[i]] = static_cast<int>(i);
        labels_.push_back(labels[order[i]]);
        if (i > 0 && labels_[i] == labels_[i - 1]) {
          throw InputError("duplicate vertex label: " + labels_[i]);
        }
      }
      std::vector<Simplex> fs;
      std::vector<bool>    covered(labels_.size(), false);
      for (Simplex const& f : facets) {
        Simplex s;
        for (int v : f) {
          if (v < 0 || v >= static_cast<int>(labels_.size())) {
            throw InputError("facet vertex index out of range");
          }
          s.push_back(remap[v]);
          covered[remap[v]] = true;
        }
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
          throw InputError("facet repeats a vertex");
        }
        if (!s.empty()) {
          fs.push_back(std::move(s));
        }
      }
      for (std::size_t v = 0; v < covered.size(); ++v) {
        if (!covered[v]) {
          fs.push_back({static_cast<int>(v)});
        }
      }
      facets_ = maximal_only(std::move(fs));
    }

    std::vector<std::string> const& vertex_labels() const noexcept {
      return labels_;
    }

    std::vector<Simplex> const& facets() const noexcept {
      return facets_;
    }

    int num_vertices() const noexcept {
      return static_cast<int>(labels_.size());
    }

    //! -1 for {∅}.
    int dimension() const noexcept {
      int d = -1;
      for (auto const& f : facets_) {
        d = std::max(d, static_cast<int>(f.size()) - 1);
      }
      return d;
    }

    //! Faces of each dimension 0..dim, each list sorted lexicographically.
    std::vector<std::vector<Simplex>> faces() const {
      int                                dim = dimension();
      std::vector<std::set<Simplex>>     sets(dim + 1);
      for (Simplex const& f : facets_) {
        std::size_t k = f.size();
        for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << k); ++mask) {
          Simplex s;
          for (std::size_t i = 0; i < k; ++i) {
            if ((mask >> i) & 1U) {
              s.push_back(f[i]);
            }
          }
          sets[s.size() - 1].insert(std::move(s));
        }
      }
      std::vector<std::vector<Simplex>> out;
      for (auto& s : sets) {
        out.emplace_back(s.begin(), s.end());
      }
      return out;
    }

    //! Face counts f_0, f_1, ..., f_dim.
    std::vector<long long> f_vector() const {
      std::vector<long long> f;
      for (auto const& layer : faces()) {
        f.push_back(static_cast<long long>(layer.size()));
      }
      return f;
    }

    long long euler_characteristic(bool reduced = false) const {
      long long chi  = 0;
      long long sign = 1;
      for (long long c : f_vector()) {
        chi += sign * c;
        sign = -sign;
      }
      return reduced ? chi - 1 : chi;
    }

    bool is_face(Simplex s) const {
      std::sort(s.begin(), s.end());
      if (s.empty()) {
        return true;
      }
      return std::any_of(facets_.begin(), facets_.end(), [&](Simplex const& f) {
        return std::includes(f.begin(), f.end(), s.begin(), s.end());
      });
    }

    int vertex_index(std::string const& label) const {
      auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
      if (it == labels_.end() || *it != label) {
        throw DomainError("no vertex labelled " + label);
      }
      return static_cast<int>(it - labels_.begin());
    }

    friend bool operator==(SimplicialComplex const&,
                           SimplicialComplex const&) = default;

   private:
    static std::vector<Simplex> maximal_only(std::vector<Simplex> fs) {
      std::sort(fs.begin(), fs.end(), [](Simplex const& a, Simplex const& b) {
        return a.size() != b.size() ? a.size() > b.size() : a < b;
      });
      fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
      std::set<Simplex>    proper;  // proper faces of the facets kept so far
      std::vector<Simplex> kept;
      for (Simplex& s : fs) {
        if (proper.count(s)) {
          continue;
        }
        std::size_t k = s.size();
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t(1) << k); ++mask) {
          Simplex t;
          for (std::size_t i = 0; i < k; ++i) {
            if ((mask >> i) & 1U) {
              t.push_back(s[i]);
            }
          }
          proper.insert(std::move(t));
        }
        kept.push_back(std::move(s));
      }
      std::sort(kept.begin(), kept.end());
      return kept;
    }

    std::vector<std::string> labels_;
    std::vector<Simplex>     facets_;
  };

  inline std::vector<long long> f_vector(SimplicialComplex const& k) {
    return k.f_vector();
  }

  inline int dimension(SimplicialComplex const& k) {
    return k.dimension();
  }

  inline long long euler_characteristic(SimplicialComplex const& k,
                                        bool reduced = false) {
    return k.euler_characteristic(reduced);
  }

  //! Faces t of K with t ∩ s = ∅ and t ∪ s ∈ K, on the surviving labels.
  inline SimplicialComplex link(SimplicialComplex const& k, Simplex s) {
    std::sort(s.begin(), s.end());
    if (!k.is_face(s)) {
      throw DomainError("link: simplex is not a face of the complex");
    }
    std::map<int, int>   fresh;
    std::vector<Simplex> pieces;
    for (Simplex const& f : k.facets()) {
      if (!std::includes(f.begin(), f.end(), s.begin(), s.end())) {
        continue;
      }
      Simplex rest;
      std::set_difference(f.begin(), f.end(), s.begin(), s.end(),
                          std::back_inserter(rest));
      for (int& v : rest) {
        v = fresh.try_emplace(v, static_cast<int>(fresh.size())).first->second;
      }
      if (!rest.empty()) {
        pieces.push_back(std::move(rest));
      }
    }
    std::vector<std::string> labels(fresh.size());
    for (auto [old, now] : fresh) {
      labels[now] = k.vertex_labels()[old];
    }
    return SimplicialComplex(std::move(labels), pieces);
  }

  inline SimplicialComplex link(SimplicialComplex const&        k,
                                std::vector<std::string> const& labels) {
    Simplex s;
    for (auto const& l : labels) {
      s.push_back(k.vertex_index(l));
    }
    return link(k, std::move(s));
  }

  ////////////////////////////////////////////////////////////////////////
  // Posets
  ////////////////////////////////////////////////////////////////////////

  //! A finite poset given by canonical element keys and a strict order.
  struct PosetView {
    std::vector<std::string>                     keys;
    std::function<bool(std::size_t, std::size_t)> strictly_less;
  };

  namespace detail {
    struct Bits {
      std::vector<std::uint64_t> w;
      explicit Bits(std::size_t n) : w((n + 63) / 64, 0) {}
      void set(std::size_t i) {
        w[i / 64] |= std::uint64_t(1) << (i % 64);
      }
      bool test(std::size_t i) const {
        return (w[i / 64] >> (i % 64)) & 1U;
      }
      bool intersects(Bits const& o) const {
        for (std::size_t i = 0; i < w.size(); ++i) {
          if (w[i] & o.w[i]) {
            return true;
          }
        }
        return false;
      }
      bool contains(Bits const& o) const {
        for (std::size_t i = 0; i < w.size(); ++i) {
          if ((o.w[i] & ~w[i]) != 0) {
            return false;
          }
        }
        return true;
      }
    };
  }  // namespace detail

  inline constexpr std::size_t default_max_facets = 2'000'000;

  //! Simplices are the chains of the poset; facets are its maximal chains.
  //! Throws DomainError when the relation is not a strict partial order and
  //! ResourceLimit when more than `max_facets` maximal chains exist.
  inline SimplicialComplex order_complex(PosetView const& p,
                                         std::size_t max_facets
                                         = default_max_facets) {
    std::size_t const         m = p.keys.size();
    std::vector<detail::Bits> up(m, detail::Bits(m)), down(m, detail::Bits(m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (p.strictly_less(i, j)) {
          if (i == j) {
            throw DomainError("invalid poset: relation is not irreflexive at "
                              + p.keys[i]);
          }
          up[i].set(j);
          down[j].set(i);
        }
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        // i < j implies up(i) ⊇ up(j) ∪ {j}
        if (up[i].test(j) && !up[i].contains(up[j])) {
          throw DomainError("invalid poset: relation is not transitive at "
                            + p.keys[i] + " < " + p.keys[j]);
        }
      }
    }
    // j covers i when nothing lies strictly between them.
    std::vector<std::vector<int>> covers(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (up[i].test(j)) {
          bool between = false;
          for (std::size_t w = 0; w < up[i].w.size() && !between; ++w) {
            between = (up[i].w[w] & down[j].w[w]) != 0;
          }
          if (!between) {
            covers[i].push_back(static_cast<int>(j));
          }
        }
      }
    }
    std::vector<Simplex> facets;
    Simplex              chain;
    std::function<void(int)> extend = [&](int v) {
      chain.push_back(v);
      if (covers[v].empty()) {
        if (facets.size() >= max_facets) {
          throw ResourceLimit("order complex exceeds the facet cap",
                              std::to_string(facets.size())
                                  + " maximal chains enumerated before abort");
        }
        Simplex f = chain;
        std::sort(f.begin(), f.end());
        facets.push_back(std::move(f));
      } else {
        for (int w : covers[v]) {
          extend(w);
        }
      }
      chain.pop_back();
    };
    for (std::size_t i = 0; i < m; ++i) {
      bool minimal = true;
      for (std::size_t w = 0; w < down[i].w.size() && minimal; ++w) {
        minimal = down[i].w[w] == 0;
      }
      if (minimal) {
        extend(static_cast<int>(i));
      }
    }
    return SimplicialComplex(p.keys, facets);
  }

}  // namespace fcx
