#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"

#include "fcx/stallings.hpp"

using namespace fcx;

namespace {

  std::vector<Word> words(int rank, std::vector<std::string> const& ss) {
    std::vector<Word> out;
    for (auto const& s : ss) {
      out.push_back(Word::parse(rank, s));
    }
    return out;
  }

  CoreGraph sub(int rank, std::vector<std::string> const& ss) {
    return build(rank, words(rank, ss));
  }

  // All reduced words of length <= len.
  std::vector<Word> all_words(int rank, int len) {
    std::vector<Word> out{Word(rank)};
    std::vector<Word> layer{Word(rank)};
    for (int l = 1; l <= len; ++l) {
      std::vector<Word> next;
      for (auto const& w : layer) {
        for (int i = 1; i <= rank; ++i) {
          for (int s : {1, -1}) {
            Word v = w * Word::generator(rank, i, s);
            if (v.size() == w.size() + 1) {
              next.push_back(v);
            }
          }
        }
      }
      out.insert(out.end(), next.begin(), next.end());
      layer = std::move(next);
    }
    return out;
  }

  // Reduced products of at most `count` elements of gens^{+-1}.
  std::set<std::string> products(std::vector<Word> const& gens, int rank,
                                 int count) {
    std::vector<Word> letters;
    for (auto const& g : gens) {
      letters.push_back(g);
      letters.push_back(inverse(g));
    }
    std::set<std::string> out{""};
    std::vector<Word>     layer{Word(rank)};
    for (int c = 1; c <= count; ++c) {
      std::vector<Word> next;
      for (auto const& w : layer) {
        for (auto const& g : letters) {
          next.push_back(w * g);
          out.insert(next.back().str());
        }
      }
      layer = std::move(next);
    }
    return out;
  }

  Word random_word(std::mt19937& rng, int rank, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<int> gen(1, rank);
    std::vector<Letter>                raw;
    for (int i = len(rng); i > 0; --i) {
      raw.push_back({gen(rng), (rng() & 1) ? 1 : -1});
    }
    return Word(rank, raw);
  }

  Automorphism random_automorphism(std::mt19937& rng, int rank, int length) {
    auto         moves = whitehead_moves(rank);
    Automorphism a     = Automorphism::identity(rank);
    for (int i = 0; i < length; ++i) {
      a = compose(moves[rng() % moves.size()], a);
    }
    return a;
  }

}  // namespace

TEST_CASE("build small subgroups", "[stallings]") {
  auto rose = sub(3, {"x", "y"});
  CHECK(rose.num_vertices() == 1);
  CHECK(rose.num_edges() == 2);
  CHECK(rose.rank() == 2);

  // Hand folding: x-loop at the base, a y-edge out, an x-loop at its end.
  auto g = sub(3, {"x", "yxY"});
  CHECK(g.num_vertices() == 2);
  CHECK(g.num_edges() == 3);
  CHECK(g.rank() == 2);
  std::vector<Edge> expected{{0, 0, 1}, {0, 1, 2}, {1, 1, 1}};
  CHECK(g.edges() == expected);

  auto trivial = build(3, {});
  CHECK(trivial.num_vertices() == 1);
  CHECK(trivial.num_edges() == 0);
  CHECK(trivial.rank() == 0);
  CHECK(trivial == CoreGraph(3));

  // Hair is trimmed except at the basepoint.
  auto conj = sub(2, {"xyX"});
  CHECK(conj.num_vertices() == 2);
  CHECK(conj.num_edges() == 2);
  CHECK(sub(2, {"xyyX", "xyX"}) == conj);
}

TEST_CASE("membership", "[stallings]") {
  auto g = sub(3, {"x", "yxY"});
  // Brute-force oracle over products of at most three generators.
  auto prods = products(words(3, {"x", "yxY"}), 3, 3);
  CHECK_FALSE(prods.count("y"));
  CHECK_FALSE(g.contains(Word::parse(3, "y")));
  CHECK(prods.count("yxxY"));
  CHECK(g.contains(Word::parse(3, "yxxY")));
  CHECK(g.contains(Word(3)));
  CHECK(sub(2, {"xy"}).contains(Word(2)));
  CHECK_THROWS_AS(g.contains(Word::parse(2, "x")), RankMismatch);
}

TEST_CASE("membership agrees with product enumeration", "[stallings][property]") {
  std::mt19937 rng(17);
  auto         candidates = all_words(2, 4);
  int          checked    = 0;
  for (int trial = 0; trial < 400 && checked < 60; ++trial) {
    auto gens = std::vector<Word>{random_word(rng, 2, 3), random_word(rng, 2, 3)};
    auto g    = build(2, gens);
    if (g.num_edges() > 3 || g.rank() == 0) {
      continue;
    }
    ++checked;
    // Schreier basis from a folded graph: m-fold reduced products have
    // length >= m, so products of <= 4 basis words cover every element of
    // length <= 4.
    auto prods = products(g.subgroup_basis(), 2, 4);
    for (auto const& w : candidates) {
      CHECK(g.contains(w) == (prods.count(w.str()) > 0));
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("rank and subgroup basis", "[stallings]") {
  auto rose = sub(2, {"x", "y"});
  CHECK(rose.subgroup_basis() == words(2, {"x", "y"}));

  auto g = sub(3, {"x", "yxY"});
  CHECK(g.subgroup_basis() == words(3, {"x", "yxY"}));
  CHECK(build(3, {}).subgroup_basis().empty());

  std::mt19937 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    int               rank = 2 + trial % 2;
    std::vector<Word> gens;
    for (int i = 0; i < 1 + trial % 3; ++i) {
      gens.push_back(random_word(rng, rank, 6));
    }
    auto h     = build(rank, gens);
    auto basis = h.subgroup_basis();
    CHECK(static_cast<int>(basis.size()) == h.rank());
    CHECK(build(rank, basis) == h);
    CHECK(h.rank() <= static_cast<int>(gens.size()));
    for (auto const& w : gens) {
      CHECK(h.contains(w));
    }
    // Folding confluence.
    std::reverse(gens.begin(), gens.end());
    CHECK(build(rank, gens) == h);
  }
}

TEST_CASE("canonical forms", "[stallings]") {
  auto g = sub(3, {"x", "yxY"});
  CHECK(canonical(g) == g);
  CHECK(canonical(canonical(g)) == g);
  CHECK(equal(g, sub(3, {"yxY", "x"})));
  CHECK_FALSE(equal(sub(2, {"xy"}), sub(2, {"yx"})));
  // Cross-check: xy is not in <yx>.
  CHECK_FALSE(sub(2, {"yx"}).contains(Word::parse(2, "xy")));
  CHECK(g.key() == sub(3, {"yxY", "x", "xx"}).key());
  // Rebuilding from the canonical edge list succeeds; a non-canonical
  // numbering is rejected.
  CHECK(CoreGraph::from_canonical(3, 2, 0, g.edges()) == g);
  std::vector<Edge> shuffled{{1, 1, 1}, {1, 0, 2}, {0, 0, 1}};
  CHECK_THROWS_AS(CoreGraph::from_canonical(3, 2, 1, shuffled), InputError);
  CHECK(CoreGraph::fold(3, 2, 1, shuffled) == g);
}

TEST_CASE("images under automorphisms", "[stallings]") {
  auto g = sub(3, {"x", "yxY"});
  CHECK(image(Automorphism::identity(3), g) == g);

  Automorphism a(2, words(2, {"xy", "y"}), words(2, {"xY", "y"}));
  CHECK(image(a, sub(2, {"x"})) == sub(2, {"xy"}));

  std::mt19937 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto aut  = random_automorphism(rng, 3, 3);
    auto h    = build(3, {random_word(rng, 3, 5), random_word(rng, 3, 5)});
    auto img  = image(aut, h);
    CHECK(img.rank() == h.rank());
    CHECK(image(aut.inverse(), img) == h);
  }
}

TEST_CASE("intersections", "[stallings]") {
  CHECK(intersect(sub(3, {"x", "y"}), sub(3, {"y", "z"})) == sub(3, {"y"}));
  auto g = sub(3, {"x", "yxY"});
  CHECK(intersect(g, g) == g);
  CHECK(intersect(sub(3, {"x"}), sub(3, {"y"})) == build(3, {}));
  CHECK(intersect(sub(2, {"x", "y"}), sub(2, {"xy"})) == sub(2, {"xy"}));

  std::mt19937 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    auto g1 = build(2, {random_word(rng, 2, 4), random_word(rng, 2, 4)});
    auto g2 = build(2, {random_word(rng, 2, 4), random_word(rng, 2, 4)});
    auto both = intersect(g1, g2);
    CHECK(both == intersect(g2, g1));
    std::vector<Word> samples;
    for (int i = 0; i < 20; ++i) {
      samples.push_back(random_word(rng, 2, 6));
    }
    auto b1 = g1.subgroup_basis();
    auto b2 = g2.subgroup_basis();
    for (auto const& u : b1) {
      for (auto const& v : b2) {
        samples.push_back(u * v);
        samples.push_back(u * u);
      }
    }
    for (auto const& w : samples) {
      CHECK(both.contains(w) == (g1.contains(w) && g2.contains(w)));
    }
  }
}

TEST_CASE("letter roses", "[stallings]") {
  CHECK(is_letter_rose(sub(3, {"x", "z"})) == std::set<int>{1, 3});
  auto xy = sub(2, {"xy"});
  CHECK(xy.num_edges() == 2);
  CHECK(xy.num_vertices() == 2);
  CHECK_FALSE(is_letter_rose(xy).has_value());
  CHECK(is_letter_rose(build(3, {})) == std::set<int>{});
}
