#include <random>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"

#include "fcx/whitehead.hpp"

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

  Word random_word(std::mt19937& rng, int rank, int max_len) {
    std::uniform_int_distribution<int> len(1, max_len);
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

TEST_CASE("minimization", "[whitehead]") {
  auto rose = sub(2, {"x", "y"});
  auto t    = minimize(rose);
  CHECK(t.moves.empty());
  CHECK(t.final == rose);

  // x -> xY (or an equivalent move) shortens <xy> to a single loop.
  auto xy = minimize(sub(2, {"xy"}));
  REQUIRE(xy.moves.size() == 1);
  CHECK(xy.final.num_edges() == 1);
  CHECK(xy.moves[0].edges == 1);
  CHECK(image(xy.automorphism, sub(2, {"xy"})) == xy.final);

  auto bad = minimize(sub(3, {"x", "yxY"}));
  CHECK(bad.final.num_edges() == 3);
}

TEST_CASE("minimization traces descend strictly", "[whitehead][property]") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = build(3, {random_word(rng, 3, 6), random_word(rng, 3, 6)});
    if (g.rank() == 0) {
      continue;
    }
    auto t    = minimize(g);
    int  prev = g.num_edges();
    for (auto const& s : t.moves) {
      CHECK(s.edges < prev);
      prev = s.edges;
    }
    CHECK(static_cast<int>(t.moves.size()) <= g.num_edges());
    CHECK(image(t.automorphism, g) == t.final);
    for (auto const& m : reducing_moves(3)) {
      CHECK(image(m.automorphism, t.final).num_edges() >= t.final.num_edges());
    }
  }
}

TEST_CASE("free factor recognition", "[whitehead]") {
  CHECK(is_free_factor(sub(3, {"x", "y"})).value);
  CHECK_FALSE(is_free_factor(sub(3, {"x", "yxY"})).value);
  auto c = is_free_factor(sub(2, {"xyX"}));
  REQUIRE(c.value);
  REQUIRE(c.witness);
  CHECK(image(*c.witness, sub(2, {"xyX"})) == sub(2, {"x"}));
  CHECK_THROWS_AS(is_free_factor(build(3, {})), DomainError);
  // Whole group is a (non-proper) free factor.
  CHECK(is_free_factor(sub(2, {"xy", "y"})).value);
  CHECK_FALSE(is_free_factor(sub(2, {"xx", "y"})).value);
}

TEST_CASE("primitivity", "[whitehead]") {
  CHECK(is_primitive(Word::parse(2, "x")));
  CHECK(Word::parse(2, "xyXY").exponent_vector() == std::vector<long long>{0, 0});
  CHECK_FALSE(is_primitive(Word::parse(2, "xyXY")));
  CHECK(is_primitive(Word::parse(2, "xy")));
  CHECK_FALSE(is_primitive(Word::parse(2, "xx")));
  // gcd 1 but not primitive in F_2: x^2 y^2 has exponent vector (2, 2)...
  CHECK_FALSE(is_primitive(Word::parse(2, "xxyy")));
  // ... and xxyyy has gcd 1 yet is not primitive either.
  CHECK_FALSE(is_primitive(Word::parse(2, "xxyyy")));
  CHECK(is_primitive(Word::parse(3, "yxY")));
  CHECK_THROWS_AS(is_primitive(Word(2)), DomainError);
}

TEST_CASE("basis extension", "[whitehead]") {
  auto ok = extends_to_basis(3, words(3, {"x", "y"}));
  CHECK(ok.value);
  CHECK(ok.completion.size() == 3);
  CHECK_FALSE(extends_to_basis(3, words(3, {"x", "yxY"})).value);
  auto dep = extends_to_basis(3, words(3, {"x", "x"}));
  CHECK_FALSE(dep.value);
  CHECK(dep.reason.find("rank 1") != std::string::npos);
  CHECK_FALSE(extends_to_basis(2, words(2, {"x", "y", "xy"})).value);
  auto full = extends_to_basis(3, words(3, {"xy", "y", "z"}));
  CHECK(full.value);
  auto one = extends_to_basis(3, words(3, {"xyzXY"}));
  REQUIRE(one.value);
  CHECK(build(3, one.completion) == standard_rose(3, 3));
}

TEST_CASE("decisions are invariant under automorphisms", "[whitehead][property]") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    int  n = 2 + trial % 2;
    auto a = random_automorphism(rng, n, 3);
    Word w = random_word(rng, n, 5);
    if (w.empty()) {
      continue;
    }
    CHECK(is_primitive(w) == is_primitive(a.apply(w)));
    auto g = build(n, {w, random_word(rng, n, 4)});
    if (g.rank() > 0) {
      auto d = is_free_factor(g);
      CHECK(d.value == is_free_factor(image(a, g)).value);
      if (d.value) {
        CHECK(image(*d.witness, g).letter_rose().has_value());
      }
    }
  }
}

TEST_CASE("Z simplices", "[whitehead]") {
  auto std_pair = std::vector<CoreGraph>{sub(3, {"y", "z"}), sub(3, {"x", "z"})};
  auto d        = is_Z_simplex(std_pair);
  CHECK(d.value);
  CHECK(d.witnessed);

  std::mt19937 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    auto a   = random_automorphism(rng, 3, 3);
    auto img = std::vector<CoreGraph>{image(a, std_pair[0]), image(a, std_pair[1])};
    CHECK(is_Z_simplex(img).value);
  }
  // A full triple of deletions is a 2-simplex.
  CHECK(is_Z_simplex({sub(3, {"y", "z"}), sub(3, {"x", "z"}), sub(3, {"x", "y"})})
            .value);

  // Both factors abelianize to span(e2, e3), so they cannot be two
  // different coordinate hyperplanes after any automorphism.
  auto odd = std::vector<CoreGraph>{sub(3, {"y", "z"}), sub(3, {"y", "xzX"})};
  CHECK(intersect(odd[0], odd[1]).contains(Word::parse(3, "y")));
  auto od = is_Z_simplex(odd);
  CHECK_FALSE(od.value);
  CHECK_FALSE(od.witnessed);

  CHECK_THROWS_AS(is_Z_simplex({sub(3, {"x"})}), DomainError);
  CHECK_THROWS_AS(is_Z_simplex({sub(3, {"x", "y"}), sub(3, {"x", "y"})}),
                  DomainError);
}
