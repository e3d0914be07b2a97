#pragma once

// Whitehead minimization of core graphs and the decision procedures built
// on it: free-factor recognition, primitivity, basis extension and
// recognition of simplices in the complex of corank-one free factors.
//
// Descent is greedy: at every step the first Type II move (in canonical
// move order) that strictly lowers the edge count is taken. Positive
// answers come with an automorphism that is re-applied and checked before
// being returned. Negative answers rely on peak reduction: a graph that is
// not minimal always admits a strictly reducing Whitehead move.

#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "error.hpp"
#include "stallings.hpp"
#include "words.hpp"

namespace fcx {

  //! Type II moves of F_rank in canonical order, cached per rank.
  inline std::vector<WhiteheadMove> const& reducing_moves(int rank) {
    static std::mutex                                 mtx;
    static std::map<int, std::vector<WhiteheadMove>> cache;
    std::lock_guard<std::mutex>                       lock(mtx);
    auto it = cache.find(rank);
    if (it == cache.end()) {
      it = cache.emplace(rank, whitehead_move_list(rank, false)).first;
    }
    return it->second;
  }

  //! Signed permutation moving the letters of `rose` onto x_1..x_k, keeping
  //! their relative order.
  inline Automorphism standardizing_permutation(int rank, std::set<int> const& rose) {
    std::vector<Letter> perm(rank);
    std::vector<bool>   used(rank + 1, false);
    int                 next = 1;
    for (int l : rose) {
      perm[l - 1] = {next, 1};
      used[l]     = true;
      ++next;
    }
    for (int l = 1; l <= rank; ++l) {
      if (!used[l]) {
        perm[l - 1] = {next, 1};
        ++next;
      }
    }
    return WhiteheadMove::type_one(rank, std::move(perm)).automorphism;
  }

  inline CoreGraph standard_rose(int rank, int k) {
    std::vector<Word> gens;
    for (int i = 1; i <= k; ++i) {
      gens.push_back(Word::generator(rank, i));
    }
    return build(rank, gens);
  }

  struct MinimizationStep {
    WhiteheadMove move;
    int           edges;  // edge count after the move
  };

  struct MinimizationTrace {
    CoreGraph                     start;
    std::vector<MinimizationStep> moves;
    CoreGraph                     final;
    //! Product of the moves: image(automorphism, start) == final.
    Automorphism automorphism;
  };

  inline MinimizationTrace minimize(CoreGraph const& g) {
    int const         n = g.ambient_rank();
    MinimizationTrace trace{g, {}, g, Automorphism::identity(n)};
    if (g.rank() == 0) {
      return trace;
    }
    auto const& moves = reducing_moves(n);
    while (true) {
      bool reduced = false;
      for (WhiteheadMove const& m : moves) {
        CoreGraph h = image(m.automorphism, trace.final);
        if (h.num_edges() < trace.final.num_edges()) {
          trace.moves.push_back({m, h.num_edges()});
          trace.final        = std::move(h);
          trace.automorphism = compose(m.automorphism, trace.automorphism);
          reduced            = true;
          break;
        }
      }
      if (!reduced) {
        return trace;
      }
    }
  }

  struct FactorDecision {
    bool value = false;
    //! On a positive answer: carries the subgroup onto <x_1, ..., x_k>.
    std::optional<Automorphism> witness;
    MinimizationTrace           trace;
  };

  inline FactorDecision is_free_factor(CoreGraph const& g) {
    if (g.rank() == 0) {
      throw DomainError("the trivial subgroup is not a vertex of FC_n");
    }
    FactorDecision d{false, std::nullopt, minimize(g)};
    auto           rose = d.trace.final.letter_rose();
    if (!rose) {
      return d;
    }
    int const    n = g.ambient_rank();
    Automorphism w = compose(standardizing_permutation(n, *rose),
                             d.trace.automorphism);
    if (image(w, g) != standard_rose(n, g.rank())) {
      throw std::logic_error("free-factor witness failed to re-verify");
    }
    d.value   = true;
    d.witness = std::move(w);
    return d;
  }

  //! True iff <w> is a rank-one free factor, i.e. w lies in some basis.
  inline FactorDecision is_primitive_decision(Word const& w) {
    if (w.empty()) {
      throw DomainError("the identity is not primitive");
    }
    auto v = w.exponent_vector();
    if (gcd_of(v) != 1) {
      CoreGraph g = build(w.rank(), {w});
      return {false, std::nullopt, {g, {}, g, Automorphism::identity(w.rank())}};
    }
    return is_free_factor(build(w.rank(), {w}));
  }

  inline bool is_primitive(Word const& w) {
    return is_primitive_decision(w).value;
  }

  struct BasisDecision {
    bool value = false;
    //! Short human-readable diagnosis of a negative answer.
    std::string reason;
    //! On a positive answer, the input words followed by n - k further
    //! words completing them to a basis of F_n.
    std::vector<Word>           completion;
    std::optional<Automorphism> witness;
  };

  inline BasisDecision extends_to_basis(int rank, std::vector<Word> const& ws) {
    BasisDecision d;
    int const     k = static_cast<int>(ws.size());
    if (k == 0) {
      d.reason = "empty word list";
      return d;
    }
    if (k > rank) {
      d.reason = "more words than the ambient rank";
      return d;
    }
    CoreGraph g = build(rank, ws);
    if (g.rank() != k) {
      d.reason = "words generate a subgroup of rank " + std::to_string(g.rank())
                 + ", not " + std::to_string(k);
      return d;
    }
    auto f = is_free_factor(g);
    if (!f.value) {
      d.reason = "generated subgroup is not a free factor";
      return d;
    }
    d.value          = true;
    d.completion     = ws;
    Automorphism inv = f.witness->inverse();
    for (int i = k + 1; i <= rank; ++i) {
      d.completion.push_back(inv.apply(Word::generator(rank, i)));
    }
    if (build(rank, d.completion) != standard_rose(rank, rank)) {
      throw std::logic_error("basis completion failed to re-verify");
    }
    d.witness = std::move(f.witness);
    return d;
  }

  struct TupleTrace {
    std::vector<CoreGraph>        start;
    std::vector<MinimizationStep> moves;
    std::vector<CoreGraph>        final;
    Automorphism                  automorphism;
  };

  inline int total_edges(std::vector<CoreGraph> const& gs) {
    int t = 0;
    for (auto const& g : gs) {
      t += g.num_edges();
    }
    return t;
  }

  //! Greedy descent on the total edge count of a tuple of graphs.
  inline TupleTrace tuple_minimize(std::vector<CoreGraph> const& gs) {
    if (gs.empty()) {
      throw DomainError("tuple_minimize needs at least one graph");
    }
    int const n = gs.front().ambient_rank();
    for (auto const& g : gs) {
      if (g.ambient_rank() != n) {
        throw RankMismatch(n, g.ambient_rank());
      }
    }
    TupleTrace  t{gs, {}, gs, Automorphism::identity(n)};
    auto const& moves = reducing_moves(n);
    while (true) {
      int  current = total_edges(t.final);
      bool reduced = false;
      for (WhiteheadMove const& m : moves) {
        std::vector<CoreGraph> next;
        int                    total = 0;
        for (auto const& g : t.final) {
          next.push_back(image(m.automorphism, g));
          total += next.back().num_edges();
          if (total >= current) {
            break;
          }
        }
        if (next.size() == t.final.size() && total < current) {
          t.moves.push_back({m, total});
          t.final        = std::move(next);
          t.automorphism = compose(m.automorphism, t.automorphism);
          reduced        = true;
          break;
        }
      }
      if (!reduced) {
        return t;
      }
    }
  }

  struct ZSimplexDecision {
    bool value = false;
    //! False for negative answers: those rest on tuple peak reduction and
    //! carry no certificate.
    bool                        witnessed = false;
    std::optional<Automorphism> witness;
    TupleTrace                  trace;
  };

  //! Decides whether distinct rank n-1 free factors are simultaneously
  //! carried, by one automorphism, to the factors obtained by deleting
  //! x_1, ..., x_k one at a time.
  inline ZSimplexDecision is_Z_simplex(std::vector<CoreGraph> const& factors) {
    if (factors.empty()) {
      throw DomainError("need at least one factor");
    }
    int const n = factors.front().ambient_rank();
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i].ambient_rank() != n) {
        throw RankMismatch(n, factors[i].ambient_rank());
      }
      if (factors[i].rank() != n - 1) {
        throw DomainError("z-simplex factors must have rank n-1");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (factors[i] == factors[j]) {
          throw DomainError("z-simplex factors must be distinct");
        }
      }
    }
    ZSimplexDecision d{false, false, std::nullopt, tuple_minimize(factors)};
    std::vector<int> deleted;
    for (auto const& g : d.trace.final) {
      auto rose = g.letter_rose();
      if (!rose || static_cast<int>(rose->size()) != n - 1) {
        return d;
      }
      int missing = 0;
      for (int l = 1; l <= n; ++l) {
        if (!rose->count(l)) {
          missing = l;
        }
      }
      if (std::find(deleted.begin(), deleted.end(), missing) != deleted.end()) {
        return d;
      }
      deleted.push_back(missing);
    }
    // Send the i-th deleted letter to x_i.
    std::vector<Letter> perm(n);
    std::vector<bool>   used(n + 1, false);
    int                 next = 1;
    for (int l : deleted) {
      perm[l - 1] = {next++, 1};
      used[l]     = true;
    }
    for (int l = 1; l <= n; ++l) {
      if (!used[l]) {
        perm[l - 1] = {next++, 1};
      }
    }
    Automorphism w = compose(WhiteheadMove::type_one(n, perm).automorphism,
                             d.trace.automorphism);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      std::vector<Word> gens;
      for (int l = 1; l <= n; ++l) {
        if (l != static_cast<int>(i) + 1) {
          gens.push_back(Word::generator(n, l));
        }
      }
      if (image(w, factors[i]) != build(n, gens)) {
        throw std::logic_error("z-simplex witness failed to re-verify");
      }
    }
    d.value     = true;
    d.witnessed = true;
    d.witness   = std::move(w);
    return d;
  }

}  // namespace fcx
