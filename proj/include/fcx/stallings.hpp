#pragma once

// Folded, based core graphs (Stallings graphs) of finitely generated
// subgroups of F_n.
//
// A CoreGraph is always stored in canonical form: vertices are numbered in
// BFS order from the basepoint (vertex 0), exploring neighbours by label and
// then direction (outgoing before incoming). Because a folded graph is a
// deterministic automaton this numbering is unique, so two graphs describe
// the same subgroup exactly when their canonical edge lists agree.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"
#include "words.hpp"

namespace fcx {

  struct Edge {
    int src;
    int dst;
    int label;  // 1..n

    friend constexpr bool operator==(Edge const&, Edge const&) = default;
    friend constexpr auto operator<=>(Edge const& a, Edge const& b) {
      return std::tie(a.src, a.label, a.dst)
             <=> std::tie(b.src, b.label, b.dst);
    }
  };

  namespace detail {

    // Incremental Stallings folding with union-find. Adding an edge that
    // clashes with an existing one of the same label at the same endpoint
    // queues the two far endpoints for identification.
    class Folder {
     public:
      explicit Folder(int rank) : rank_(rank) {}

      int add_vertex() {
        parent_.push_back(static_cast<int>(parent_.size()));
        out_.emplace_back(rank_ + 1, -1);
        in_.emplace_back(rank_ + 1, -1);
        return static_cast<int>(parent_.size()) - 1;
      }

      int find(int v) {
        while (parent_[v] != v) {
          parent_[v] = parent_[parent_[v]];
          v          = parent_[v];
        }
        return v;
      }

      void add_edge(int u, int v, int label) {
        link(u, v, label);
        drain();
      }

      // Follows the letter from v, creating a fresh vertex if needed.
      int step_or_create(int v, Letter l) {
        v            = find(v);
        auto& table  = l.sign > 0 ? out_ : in_;
        int   target = table[v][l.index];
        if (target >= 0) {
          return find(target);
        }
        int w = add_vertex();
        if (l.sign > 0) {
          add_edge(v, w, l.index);
        } else {
          add_edge(w, v, l.index);
        }
        return find(w);
      }

      // Emits the folded graph restricted to the component of `base`.
      std::tuple<int, int, std::vector<Edge>> extract(int base) {
        base = find(base);
        std::vector<Edge> edges;
        for (int v = 0; v < static_cast<int>(parent_.size()); ++v) {
          if (find(v) != v) {
            continue;
          }
          for (int l = 1; l <= rank_; ++l) {
            if (out_[v][l] >= 0) {
              edges.push_back({v, find(out_[v][l]), l});
            }
          }
        }
        return {static_cast<int>(parent_.size()), base, std::move(edges)};
      }

     private:
      void link(int u, int v, int label) {
        u = find(u);
        v = find(v);
        int existing = out_[u][label] >= 0 ? find(out_[u][label]) : -1;
        if (existing >= 0) {
          pending_.emplace_back(existing, v);
        } else {
          out_[u][label] = v;
        }
        int existing_in = in_[v][label] >= 0 ? find(in_[v][label]) : -1;
        if (existing_in >= 0) {
          pending_.emplace_back(existing_in, u);
        } else {
          in_[v][label] = u;
        }
      }

      void drain() {
        while (!pending_.empty()) {
          auto [a, b] = pending_.front();
          pending_.pop_front();
          a = find(a);
          b = find(b);
          if (a == b) {
            continue;
          }
          if (b < a) {
            std::swap(a, b);
          }
          parent_[b] = a;
          for (int l = 1; l <= rank_; ++l) {
            if (out_[b][l] >= 0) {
              if (out_[a][l] >= 0) {
                pending_.emplace_back(out_[a][l], out_[b][l]);
              } else {
                out_[a][l] = out_[b][l];
              }
            }
            if (in_[b][l] >= 0) {
              if (in_[a][l] >= 0) {
                pending_.emplace_back(in_[a][l], in_[b][l]);
              } else {
                in_[a][l] = in_[b][l];
              }
            }
          }
        }
      }

      int                              rank_;
      std::vector<int>                 parent_;
      std::vector<std::vector<int>>    out_;
      std::vector<std::vector<int>>    in_;
      std::deque<std::pair<int, int>>  pending_;
    };

  }  // namespace detail

  //! Canonical folded based core graph of a subgroup of F_n.
  class CoreGraph {
   public:
    //! The trivial subgroup: a bare basepoint.
    explicit CoreGraph(int rank) : rank_(rank), num_vertices_(1) {
      out_.assign(rank_ + 1, -1);
      in_.assign(rank_ + 1, -1);
    }

    //! Folds an arbitrary labelled graph, keeps the component of `base`,
    //! trims to the based core and renumbers canonically.
    static CoreGraph fold(int rank, int num_vertices, int base,
                          std::vector<Edge> const& edges) {
      if (base < 0 || base >= num_vertices) {
        throw InputError("basepoint out of range");
      }
      detail::Folder f(rank);
      for (int i = 0; i < num_vertices; ++i) {
        f.add_vertex();
      }
      for (Edge const& e : edges) {
        if (e.label < 1 || e.label > rank || e.src < 0 || e.dst < 0
            || e.src >= num_vertices || e.dst >= num_vertices) {
          throw InputError("edge out of range");
        }
        f.add_edge(e.src, e.dst, e.label);
      }
      auto [nv, b, es] = f.extract(base);
      return from_folded(rank, nv, b, es);
    }

    //! Validates that the given graph is already a canonical folded core
    //! graph (as produced by json output) and wraps it.
    static CoreGraph from_canonical(int rank, int num_vertices, int base,
                                    std::vector<Edge> edges) {
      CoreGraph g = fold(rank, num_vertices, base, edges);
      std::sort(edges.begin(), edges.end());
      if (g.num_vertices_ != num_vertices || g.edges_ != edges) {
        throw InputError("graph is not a canonical folded core graph");
      }
      return g;
    }

    int ambient_rank() const noexcept {
      return rank_;
    }

    int num_vertices() const noexcept {
      return num_vertices_;
    }

    int num_edges() const noexcept {
      return static_cast<int>(edges_.size());
    }

    int basepoint() const noexcept {
      return 0;
    }

    std::vector<Edge> const& edges() const noexcept {
      return edges_;
    }

    //! Rank of the subgroup: |E| - |V| + 1.
    int rank() const noexcept {
      return num_edges() - num_vertices_ + 1;
    }

    //! Vertex reached by reading `l` from `v`, or -1.
    int step(int v, Letter l) const noexcept {
      return (l.sign > 0 ? out_ : in_)[v * (rank_ + 1) + l.index];
    }

    bool contains(Word const& w) const {
      if (w.rank() != rank_) {
        throw RankMismatch(rank_, w.rank());
      }
      int v = 0;
      for (Letter l : w.letters()) {
        v = step(v, l);
        if (v < 0) {
          return false;
        }
      }
      return v == 0;
    }

    //! One word per non-tree edge of the BFS spanning tree, in edge order.
    std::vector<Word> subgroup_basis() const {
      std::vector<Word> path(num_vertices_, Word(rank_));
      std::vector<int>  parent_edge(num_vertices_, -1);
      std::vector<bool> seen(num_vertices_, false);
      std::vector<bool> tree(edges_.size(), false);
      std::deque<int>   queue{0};
      seen[0] = true;
      while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int l = 1; l <= rank_; ++l) {
          for (int sign : {1, -1}) {
            int w = step(v, {l, sign});
            if (w < 0 || seen[w]) {
              continue;
            }
            seen[w] = true;
            path[w] = path[v] * Word::generator(rank_, l, sign);
            Edge e  = sign > 0 ? Edge{v, w, l} : Edge{w, v, l};
            tree[edge_index(e)] = true;
            queue.push_back(w);
          }
        }
      }
      std::vector<Word> basis;
      for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (tree[i]) {
          continue;
        }
        Edge const& e = edges_[i];
        basis.push_back(path[e.src] * Word::generator(rank_, e.label)
                        * inverse(path[e.dst]));
      }
      return basis;
    }

    //! Set of generator indices if this is a single vertex with one loop per
    //! listed letter (a standard sub-rose); empty optional otherwise.
    std::optional<std::set<int>> letter_rose() const {
      if (num_vertices_ != 1) {
        return std::nullopt;
      }
      std::set<int> letters;
      for (Edge const& e : edges_) {
        letters.insert(e.label);
      }
      return letters;
    }

    //! Canonical text key; equal keys iff equal subgroups.
    std::string key() const {
      std::string out = std::to_string(rank_) + ":" + std::to_string(num_vertices_);
      for (Edge const& e : edges_) {
        out += ";" + std::to_string(e.src) + "," + std::to_string(e.dst) + ","
               + std::to_string(e.label);
      }
      return out;
    }

    friend bool operator==(CoreGraph const& a, CoreGraph const& b) noexcept {
      return a.rank_ == b.rank_ && a.num_vertices_ == b.num_vertices_
             && a.edges_ == b.edges_;
    }

   private:
    CoreGraph() = default;

    int edge_index(Edge const& e) const {
      auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
      return static_cast<int>(it - edges_.begin());
    }

    // Input is folded; trims hanging trees (never the basepoint), keeps the
    // component of the basepoint and renumbers in canonical BFS order.
    static CoreGraph from_folded(int rank, int nv, int base,
                                 std::vector<Edge> const& edges) {
      std::vector<int>  degree(nv, 0);
      std::vector<bool> alive_edge(edges.size(), true);
      std::vector<std::vector<int>> incident(nv);
      for (std::size_t i = 0; i < edges.size(); ++i) {
        degree[edges[i].src]++;
        degree[edges[i].dst]++;
        incident[edges[i].src].push_back(static_cast<int>(i));
        incident[edges[i].dst].push_back(static_cast<int>(i));
      }
      std::vector<int> stack;
      for (int v = 0; v < nv; ++v) {
        if (v != base && degree[v] == 1) {
          stack.push_back(v);
        }
      }
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (degree[v] != 1) {
          continue;
        }
        for (int i : incident[v]) {
          if (!alive_edge[i]) {
            continue;
          }
          alive_edge[i] = false;
          int w         = edges[i].src == v ? edges[i].dst : edges[i].src;
          degree[v]--;
          degree[w]--;
          if (w != base && degree[w] == 1) {
            stack.push_back(w);
          }
        }
      }
      // Lookup tables on the old numbering for the BFS.
      std::vector<std::vector<int>> out(nv, std::vector<int>(rank + 1, -1));
      std::vector<std::vector<int>> in(nv, std::vector<int>(rank + 1, -1));
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (alive_edge[i]) {
          out[edges[i].src][edges[i].label] = edges[i].dst;
          in[edges[i].dst][edges[i].label]  = edges[i].src;
        }
      }
      std::vector<int> id(nv, -1);
      std::vector<int> order{base};
      id[base] = 0;
      for (std::size_t head = 0; head < order.size(); ++head) {
        int v = order[head];
        for (int l = 1; l <= rank; ++l) {
          for (auto const* t : {&out, &in}) {
            int w = (*t)[v][l];
            if (w >= 0 && id[w] < 0) {
              id[w] = static_cast<int>(order.size());
              order.push_back(w);
            }
          }
        }
      }
      CoreGraph g;
      g.rank_         = rank;
      g.num_vertices_ = static_cast<int>(order.size());
      for (int v : order) {
        for (int l = 1; l <= rank; ++l) {
          if (out[v][l] >= 0) {
            g.edges_.push_back({id[v], id[out[v][l]], l});
          }
        }
      }
      std::sort(g.edges_.begin(), g.edges_.end());
      g.out_.assign(g.num_vertices_ * (rank + 1), -1);
      g.in_.assign(g.num_vertices_ * (rank + 1), -1);
      for (Edge const& e : g.edges_) {
        g.out_[e.src * (rank + 1) + e.label] = e.dst;
        g.in_[e.dst * (rank + 1) + e.label]  = e.src;
      }
      return g;
    }

    int               rank_         = 1;
    int               num_vertices_ = 1;
    std::vector<Edge> edges_;
    std::vector<int>  out_;
    std::vector<int>  in_;
  };

  //! Core graph of the subgroup generated by `gens` (all in F_rank).
  inline CoreGraph build(int rank, std::vector<Word> const& gens) {
    detail::Folder f(rank);
    int            base = f.add_vertex();
    for (Word const& w : gens) {
      if (w.rank() != rank) {
        throw RankMismatch(rank, w.rank());
      }
      if (w.empty()) {
        continue;
      }
      auto ls = w.letters();
      int  v  = base;
      for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
        v = f.step_or_create(v, ls[i]);
      }
      Letter last = ls.back();
      if (last.sign > 0) {
        f.add_edge(v, base, last.index);
      } else {
        f.add_edge(base, v, last.index);
      }
    }
    auto [nv, b, es] = f.extract(base);
    return CoreGraph::fold(rank, nv, b, es);
  }

  inline bool contains(CoreGraph const& g, Word const& w) {
    return g.contains(w);
  }

  inline CoreGraph canonical(CoreGraph const& g) {
    return CoreGraph::fold(g.ambient_rank(), g.num_vertices(), g.basepoint(),
                           g.edges());
  }

  inline bool equal(CoreGraph const& a, CoreGraph const& b) {
    return a == b;
  }

  inline std::vector<Word> subgroup_basis(CoreGraph const& g) {
    return g.subgroup_basis();
  }

  inline std::optional<std::set<int>> is_letter_rose(CoreGraph const& g) {
    return g.letter_rose();
  }

  //! Core graph of a(H).
  inline CoreGraph image(Automorphism const& a, CoreGraph const& g) {
    if (a.rank() != g.ambient_rank()) {
      throw RankMismatch(a.rank(), g.ambient_rank());
    }
    std::vector<Word> imgs;
    for (Word const& w : g.subgroup_basis()) {
      imgs.push_back(a.apply(w));
    }
    return build(g.ambient_rank(), imgs);
  }

  //! Core graph of H1 ∩ H2 via the product of the two automata.
  inline CoreGraph intersect(CoreGraph const& g1, CoreGraph const& g2) {
    if (g1.ambient_rank() != g2.ambient_rank()) {
      throw RankMismatch(g1.ambient_rank(), g2.ambient_rank());
    }
    int const                     n = g1.ambient_rank();
    std::map<std::pair<int, int>, int> id;
    std::vector<std::pair<int, int>>   order{{0, 0}};
    std::vector<Edge>                  edges;
    id[{0, 0}] = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
      auto [a, b] = order[head];
      for (int l = 1; l <= n; ++l) {
        for (int sign : {1, -1}) {
          int a2 = g1.step(a, {l, sign});
          int b2 = g2.step(b, {l, sign});
          if (a2 < 0 || b2 < 0) {
            continue;
          }
          auto [it, fresh] = id.try_emplace({a2, b2}, static_cast<int>(order.size()));
          if (fresh) {
            order.emplace_back(a2, b2);
          }
          if (sign > 0) {
            edges.push_back({static_cast<int>(head), it->second, l});
          }
        }
      }
    }
    return CoreGraph::fold(n, static_cast<int>(order.size()), 0, edges);
  }

}  // namespace fcx
