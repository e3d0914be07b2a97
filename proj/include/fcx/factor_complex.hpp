#pragma once

// Finite subcomplexes of the free-factor complex FC_n: apartments spanned by
// a basis, truncations by core-graph size, and interval complexes between
// two comparable factors.
//
// Truncations are generated as automorphic images of coordinate factors
// <x_S>. Every proper free factor of a given rank lies in the Aut(F_n)
// orbit of the standard one, so breadth-first search over Whitehead moves
// reaches all of them; the search only expands graphs within the edge cap.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "complexes.hpp"
#include "error.hpp"
#include "stallings.hpp"
#include "whitehead.hpp"
#include "words.hpp"

namespace fcx {

  //! A proper, nontrivial free factor of F_n with a verified witness.
  class FreeFactor {
   public:
    //! Runs the free-factor decision procedure; throws DomainError when the
    //! subgroup is trivial, the whole group, or not a free factor.
    static FreeFactor from_graph(CoreGraph const& g) {
      check_proper(g);
      auto d = is_free_factor(g);
      if (!d.value) {
        throw DomainError("subgroup " + describe(g) + " is not a free factor");
      }
      return FreeFactor(g, std::move(*d.witness));
    }

    static FreeFactor from_words(int rank, std::vector<Word> const& gens) {
      return from_graph(build(rank, gens));
    }

    //! Accepts a caller-supplied witness after checking that it carries the
    //! subgroup onto the standard factor of the same rank.
    static FreeFactor from_witness(CoreGraph const& g, Automorphism witness) {
      check_proper(g);
      if (image(witness, g) != standard_rose(g.ambient_rank(), g.rank())) {
        throw DomainError("witness does not carry " + describe(g)
                          + " to a standard factor");
      }
      return FreeFactor(g, std::move(witness));
    }

    CoreGraph const& core() const noexcept {
      return core_;
    }

    int rank() const noexcept {
      return core_.rank();
    }

    int ambient_rank() const noexcept {
      return core_.ambient_rank();
    }

    std::vector<Word> const& basis() const noexcept {
      return basis_;
    }

    //! "<w1,w2,...>" built from the canonical basis; determines the subgroup.
    std::string const& key() const noexcept {
      return key_;
    }

    //! Automorphism taking this factor to <x_1, ..., x_rank>.
    Automorphism const& witness() const noexcept {
      return witness_;
    }

    bool contains(Word const& w) const {
      return core_.contains(w);
    }

    friend bool operator==(FreeFactor const& a, FreeFactor const& b) {
      return a.core_ == b.core_;
    }

    static std::string describe(CoreGraph const& g) {
      std::string out = "<";
      auto        bs  = g.subgroup_basis();
      for (std::size_t i = 0; i < bs.size(); ++i) {
        out += (i ? "," : "") + bs[i].str();
      }
      return out + ">";
    }

   private:
    FreeFactor(CoreGraph const& g, Automorphism w)
        : core_(g),
          basis_(g.subgroup_basis()),
          key_(describe(g)),
          witness_(std::move(w)) {}

    static void check_proper(CoreGraph const& g) {
      if (g.rank() == 0) {
        throw DomainError("the trivial subgroup is not a proper free factor");
      }
      if (g.rank() >= g.ambient_rank()) {
        throw DomainError("subgroup of full rank is not a proper free factor");
      }
    }

    CoreGraph         core_;
    std::vector<Word> basis_;
    std::string       key_;
    Automorphism      witness_;
  };

  //! H ⊆ K.
  inline bool factor_leq(FreeFactor const& h, FreeFactor const& k) {
    if (h.ambient_rank() != k.ambient_rank()) {
      throw RankMismatch(h.ambient_rank(), k.ambient_rank());
    }
    if (h.rank() > k.rank()) {
      return false;
    }
    return std::all_of(h.basis().begin(), h.basis().end(),
                       [&](Word const& w) { return k.contains(w); });
  }

  inline bool factor_less(FreeFactor const& h, FreeFactor const& k) {
    return h.rank() < k.rank() && factor_leq(h, k);
  }

  struct TruncationSpec {
    int n         = 3;
    int max_edges = 4;
    int depth     = 3;

    void validate() const {
      if (n < 2 || n > max_move_rank) {
        throw InputError("truncation rank must lie in 2.."
                         + std::to_string(max_move_rank));
      }
      if (max_edges < n - 1) {
        throw InputError("max_edges must be at least n-1");
      }
      if (depth < 0) {
        throw InputError("depth must be nonnegative");
      }
    }

    //! Canonical serialization used for cache keys.
    std::string canonical() const {
      return "truncation:n=" + std::to_string(n)
             + ";max_edges=" + std::to_string(max_edges)
             + ";depth=" + std::to_string(depth);
    }

    friend bool operator==(TruncationSpec const&, TruncationSpec const&) = default;
  };

  struct EnumerationLimits {
    std::size_t max_factors = 250'000;
    unsigned    threads     = 1;
    //! Also expand one layer past `depth` to report whether it adds factors.
    bool check_saturation = false;
    //! Checked between layers; passing it raises ResourceLimit.
    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt;
  };

  struct FactorEnumeration {
    std::vector<FreeFactor> factors;  // sorted by key
    //! Number of new factors first reached at each depth 0..spec.depth.
    std::vector<std::size_t> new_per_depth;
    //! Set when saturation was checked: factors one more layer would add.
    std::optional<std::size_t> next_layer_new;
  };

  namespace detail {

    struct Node {
      CoreGraph    graph;
      Automorphism witness;
    };

    // Images of every node under every move, computed in parallel slices and
    // returned in (node, move) order.
    inline std::vector<std::optional<Node>>
    expand(std::vector<Node> const& frontier, std::vector<WhiteheadMove> const& moves,
           int max_edges, unsigned threads) {
      std::vector<std::optional<Node>> out(frontier.size() * moves.size());
      auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          for (std::size_t j = 0; j < moves.size(); ++j) {
            CoreGraph h = image(moves[j].automorphism, frontier[i].graph);
            if (h.num_edges() <= max_edges) {
              out[i * moves.size() + j] = Node{
                  std::move(h),
                  compose(frontier[i].witness, moves[j].automorphism.inverse())};
            }
          }
        }
      };
      threads = std::max(1U, std::min<unsigned>(threads, frontier.size()));
      if (threads == 1) {
        work(0, frontier.size());
        return out;
      }
      std::vector<std::jthread> pool;
      std::size_t const         chunk = (frontier.size() + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = t * chunk, hi = std::min(frontier.size(), lo + chunk);
        if (lo < hi) {
          pool.emplace_back(work, lo, hi);
        }
      }
      pool.clear();  // joins
      return out;
    }

  }  // namespace detail

  //! Proper free factors reachable from coordinate factors by at most
  //! `depth` Whitehead moves through graphs with at most `max_edges` edges.
  inline FactorEnumeration enumerate_factors(TruncationSpec const&    spec,
                                             EnumerationLimits const& limits = {}) {
    spec.validate();
    int const   n     = spec.n;
    auto const& moves = [&]() -> std::vector<WhiteheadMove> const& {
      static std::vector<WhiteheadMove> cache[max_move_rank + 1];
      static std::mutex                  mtx;
      std::lock_guard<std::mutex>        lock(mtx);
      if (cache[n].empty()) {
        cache[n] = whitehead_move_list(n);
      }
      return cache[n];
    }();

    std::unordered_map<std::string, std::size_t> seen;
    std::vector<detail::Node>                    found;
    std::vector<detail::Node>                    frontier;
    FactorEnumeration                            result;

    auto admit = [&](detail::Node&& node) {
      if (node.graph.rank() == 0 || node.graph.rank() >= n) {
        return false;
      }
      if (!seen.emplace(node.graph.key(), found.size()).second) {
        return false;
      }
      if (found.size() >= limits.max_factors) {
        throw ResourceLimit(
            "factor enumeration exceeds the cap of "
                + std::to_string(limits.max_factors) + " factors",
            "aborted while expanding depth " + std::to_string(result.new_per_depth.size())
                + " with " + std::to_string(found.size()) + " factors found");
      }
      found.push_back(node);
      frontier.push_back(std::move(node));
      return true;
    };

    // Depth 0: the coordinate factors <x_S>.
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t(1) << n); ++mask) {
      std::vector<Word> gens;
      std::set<int>     letters;
      for (int i = 0; i < n; ++i) {
        if ((mask >> i) & 1U) {
          gens.push_back(Word::generator(n, i + 1));
          letters.insert(i + 1);
        }
      }
      CoreGraph g = build(n, gens);
      if (g.num_edges() <= spec.max_edges) {
        admit({g, standardizing_permutation(n, letters)});
      }
    }
    result.new_per_depth.push_back(found.size());

    int const layers = spec.depth + (limits.check_saturation ? 1 : 0);
    for (int d = 1; d <= layers; ++d) {
      if (limits.deadline && std::chrono::steady_clock::now() > *limits.deadline) {
        throw ResourceLimit("factor enumeration exceeded its time budget",
                            "completed depth " + std::to_string(d - 1) + " with "
                                + std::to_string(found.size()) + " factors");
      }
      std::vector<detail::Node> current = std::move(frontier);
      frontier.clear();
      std::size_t before = found.size();
      auto        images = detail::expand(current, moves, spec.max_edges, limits.threads);
      for (auto& img : images) {
        if (img) {
          admit(std::move(*img));
        }
      }
      if (d <= spec.depth) {
        result.new_per_depth.push_back(found.size() - before);
      } else {
        result.next_layer_new = found.size() - before;
        found.erase(found.begin() + static_cast<std::ptrdiff_t>(before), found.end());
      }
    }

    for (auto& node : found) {
      result.factors.push_back(FreeFactor::from_witness(node.graph, node.witness));
    }
    std::sort(result.factors.begin(), result.factors.end(),
              [](FreeFactor const& a, FreeFactor const& b) { return a.key() < b.key(); });
    return result;
  }

  //! A subcomplex of FC_n together with the factors labelling its vertices
  //! (factors[i] labels vertex i).
  struct FactorComplex {
    SimplicialComplex       complex;
    std::vector<FreeFactor> factors;
  };

  //! Order complex of the given factors under inclusion.
  inline FactorComplex factor_order_complex(std::vector<FreeFactor> factors,
                                            std::size_t max_facets = default_max_facets) {
    std::sort(factors.begin(), factors.end(),
              [](FreeFactor const& a, FreeFactor const& b) { return a.key() < b.key(); });
    PosetView p;
    for (auto const& f : factors) {
      p.keys.push_back(f.key());
    }
    p.strictly_less = [&factors](std::size_t i, std::size_t j) {
      return factor_less(factors[i], factors[j]);
    };
    auto k = order_complex(p, max_facets);
    return {std::move(k), std::move(factors)};
  }

  inline FactorComplex build_truncation(TruncationSpec const&    spec,
                                        EnumerationLimits const& limits = {}) {
    return factor_order_complex(enumerate_factors(spec, limits).factors);
  }

  //! The sphere of factors <v_S> for proper nonempty subsets S of a basis.
  inline FactorComplex apartment(int rank, std::vector<Word> const& basis) {
    if (static_cast<int>(basis.size()) != rank) {
      throw DomainError("an apartment needs exactly " + std::to_string(rank)
                        + " basis words, got " + std::to_string(basis.size()));
    }
    auto check = extends_to_basis(rank, basis);
    if (!check.value) {
      throw DomainError("not a basis of F_" + std::to_string(rank) + ": "
                        + check.reason);
    }
    std::vector<FreeFactor> factors;
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t(1) << rank); ++mask) {
      std::vector<Word> gens;
      for (int i = 0; i < rank; ++i) {
        if ((mask >> i) & 1U) {
          gens.push_back(basis[i]);
        }
      }
      factors.push_back(FreeFactor::from_words(rank, gens));
    }
    return factor_order_complex(std::move(factors));
  }

  //! Order complex of the factors H with low < H < high among `candidates`;
  //! an absent bound stands for the trivial group (low) or F_n (high).
  inline FactorComplex interval_complex(std::optional<FreeFactor> const& low,
                                        std::optional<FreeFactor> const& high,
                                        std::vector<FreeFactor> const&   candidates) {
    if (low && high && !factor_less(*low, *high)) {
      throw DomainError("interval bounds are not strictly comparable: "
                        + low->key() + " vs " + high->key());
    }
    std::vector<FreeFactor> inside;
    for (auto const& f : candidates) {
      if ((!low || factor_less(*low, f)) && (!high || factor_less(f, *high))) {
        inside.push_back(f);
      }
    }
    return factor_order_complex(std::move(inside));
  }

  inline FactorComplex interval_complex(std::optional<FreeFactor> const& low,
                                        std::optional<FreeFactor> const& high,
                                        TruncationSpec const&            spec,
                                        EnumerationLimits const&         limits = {}) {
    return interval_complex(low, high, enumerate_factors(spec, limits).factors);
  }

}  // namespace fcx
