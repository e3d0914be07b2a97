#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"

#include "fcx/homology.hpp"

using namespace fcx;

namespace {

  SimplicialComplex numbered(int nv, std::vector<Simplex> const& facets) {
    std::vector<std::string> labels;
    for (int i = 0; i < nv; ++i) {
      labels.push_back("v" + std::to_string(i));
    }
    return SimplicialComplex(labels, facets);
  }

  SimplicialComplex hexagon() {
    return numbered(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
  }

  SimplicialComplex rp2() {
    return numbered(6, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
                        {1, 2, 4}, {1, 3, 4}, {1, 3, 5}, {2, 3, 5}, {2, 4, 5}});
  }

  SimplicialComplex torus() {
    std::vector<Simplex> fs;
    for (int i = 0; i < 7; ++i) {
      fs.push_back({i, (i + 1) % 7, (i + 3) % 7});
      fs.push_back({i, (i + 2) % 7, (i + 3) % 7});
    }
    return numbered(7, fs);
  }

  SimplicialComplex sphere2() {  // boundary of a tetrahedron
    return numbered(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  }

  std::vector<SimplicialComplex> corpus() {
    return {hexagon(),
            rp2(),
            torus(),
            sphere2(),
            numbered(2, {{0}, {1}}),
            numbered(3, {{0, 1, 2}}),
            SimplicialComplex(),
            numbered(5, {{0, 1}, {1, 2}, {2, 0}, {3, 4}})};
  }

  // Rank over Z/p by Gaussian elimination.
  std::size_t rank_mod(IntegerMatrix const& m, long long p) {
    std::vector<std::vector<long long>> a(m.rows(), std::vector<long long>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (auto const& [c, v] : m.row(r)) {
        long long x = static_cast<long long>(v % p);
        a[r][c]     = ((x % p) + p) % p;
      }
    }
    auto inv = [p](long long x) {
      long long r = 1, e = p - 2;
      while (e) {
        if (e & 1) r = r * x % p;
        x = x * x % p;
        e >>= 1;
      }
      return r;
    };
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
      std::size_t piv = rank;
      while (piv < m.rows() && a[piv][c] == 0) ++piv;
      if (piv == m.rows()) continue;
      std::swap(a[piv], a[rank]);
      long long iv = inv(a[rank][c]);
      for (auto& x : a[rank]) x = x * iv % p;
      for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r != rank && a[r][c]) {
          long long f = a[r][c];
          for (std::size_t j = 0; j < m.cols(); ++j) {
            a[r][j] = ((a[r][j] - f * a[rank][j]) % p + p) % p;
          }
        }
      }
      ++rank;
    }
    return rank;
  }

  long long det(std::vector<std::vector<long long>> const& m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    long long s = 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::vector<long long>> minor;
      for (std::size_t i = 1; i < n; ++i) {
        std::vector<long long> row;
        for (std::size_t k = 0; k < n; ++k) {
          if (k != j) row.push_back(m[i][k]);
        }
        minor.push_back(row);
      }
      s += (j % 2 ? -1 : 1) * m[0][j] * det(minor);
    }
    return s;
  }

  // gcd of all k x k minors (the k-th determinantal divisor).
  long long determinantal_divisor(std::vector<std::vector<long long>> const& m,
                                  std::size_t                                k) {
    std::size_t rows = m.size(), cols = m[0].size();
    long long   g    = 0;
    for (std::uint32_t rm = 0; rm < (1U << rows); ++rm) {
      if (static_cast<std::size_t>(__builtin_popcount(rm)) != k) continue;
      for (std::uint32_t cm = 0; cm < (1U << cols); ++cm) {
        if (static_cast<std::size_t>(__builtin_popcount(cm)) != k) continue;
        std::vector<std::vector<long long>> sub;
        for (std::size_t i = 0; i < rows; ++i) {
          if (!((rm >> i) & 1)) continue;
          std::vector<long long> row;
          for (std::size_t j = 0; j < cols; ++j) {
            if ((cm >> j) & 1) row.push_back(m[i][j]);
          }
          sub.push_back(row);
        }
        g = std::gcd(g, std::abs(det(sub)));
      }
    }
    return g;
  }

}  // namespace

TEST_CASE("boundary matrices", "[homology]") {
  auto edge = numbered(2, {{0, 1}});
  auto bd   = boundary_matrices(edge);
  REQUIRE(bd.size() == 2);
  CHECK(bd[1].at(0, 0) == -1);
  CHECK(bd[1].at(1, 0) == 1);

  auto tri = boundary_matrices(numbered(3, {{0, 1, 2}}));
  CHECK((tri[1] * tri[2]).is_zero());
  CHECK((tri[0] * tri[1]).is_zero());

  auto hex = boundary_matrices(hexagon());
  CHECK(hex[1].rows() == 6);
  CHECK(hex[1].cols() == 6);
  CHECK(snf(hex[1]).size() == 5);
  CHECK(rank_mod(hex[1], 1000003) == 5);
}

TEST_CASE("boundary of boundary vanishes on the corpus", "[homology]") {
  for (auto const& k : corpus()) {
    auto bd = boundary_matrices(k);
    for (std::size_t d = 1; d < bd.size(); ++d) {
      CHECK((bd[d - 1] * bd[d]).is_zero());
    }
  }
}

TEST_CASE("Smith normal form examples", "[homology]") {
  auto f = snf(IntegerMatrix{{2, 4}, {6, 8}});
  REQUIRE(f.size() == 2);
  CHECK(f[0] == 2);  // gcd of the entries
  CHECK(f[0] * f[1] == 8);  // |det|
  CHECK(f[1] == 4);
  CHECK(snf(IntegerMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == std::vector<BigInt>{1, 1, 1});
  CHECK(snf(IntegerMatrix(3, 4)).empty());
  CHECK(snf(IntegerMatrix{{2, 0}, {0, 3}}) == std::vector<BigInt>{1, 6});
}

TEST_CASE("Smith normal form against determinantal divisors", "[homology][property]") {
  std::mt19937                       rng(12345);
  std::uniform_int_distribution<int> entry(-5, 5), dim(1, 4);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t rows = trial < 50 ? 3 : dim(rng);
    std::size_t cols = trial < 50 ? 3 : dim(rng);
    std::vector<std::vector<long long>> m(rows, std::vector<long long>(cols));
    IntegerMatrix                       im(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        m[i][j] = entry(rng);
        im.set(i, j, m[i][j]);
      }
    }
    auto f = snf(im);
    for (std::size_t i = 1; i < f.size(); ++i) {
      CHECK(f[i] % f[i - 1] == 0);
    }
    // d_1 * ... * d_k = gcd of k x k minors.
    BigInt prod = 1;
    for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
      long long dk = determinantal_divisor(m, k);
      if (k <= f.size()) {
        prod *= f[k - 1];
        CHECK(prod == dk);
      } else {
        CHECK(dk == 0);
      }
    }
    if (rows == 3 && cols == 3) {
      long long d = std::abs(det(m));
      if (d != 0) {
        REQUIRE(f.size() == 3);
        CHECK(f[0] * f[1] * f[2] == d);
      }
    }
  }
}

TEST_CASE("reduced homology examples", "[homology]") {
  auto hex = reduced_homology(hexagon());
  CHECK(hex.betti(0) == 0);
  CHECK(hex.betti(1) == 1);
  CHECK(hex.torsion_free());

  CHECK(reduced_homology(numbered(2, {{0}, {1}})).betti(0) == 1);

  auto rp = reduced_homology(rp2());
  CHECK(rp.betti(0) == 0);
  CHECK(rp.betti(1) == 0);
  CHECK(rp.torsion(1) == std::vector<BigInt>{2});
  CHECK(rp.betti(2) == 0);
  CHECK(rp.torsion(2).empty());
  // Independent check: rank over Q and over Z/2 of ∂_2 differ by one.
  auto bd = boundary_matrices(rp2());
  CHECK(rank_mod(bd[2], 1000003) == rank_mod(bd[2], 2) + 1);

  auto t = reduced_homology(torus());
  CHECK(t.betti(1) == 2);
  CHECK(t.betti(2) == 1);
  CHECK(t.torsion_free());

  auto empty = reduced_homology(SimplicialComplex());
  CHECK(empty.betti(-1) == 1);
  CHECK(empty.top_degree() == -1);
  CHECK(reduced_homology(numbered(3, {{0, 1, 2}})).torsion_free());
  CHECK(is_wedge_of_spheres(numbered(3, {{0, 1, 2}}), 0) == 0U);
}

TEST_CASE("Euler-Poincaré on the corpus", "[homology]") {
  for (auto const& k : corpus()) {
    CHECK(reduced_homology(k).euler_characteristic() == k.euler_characteristic());
  }
}

TEST_CASE("homology is invariant under relabelling", "[homology][property]") {
  std::mt19937 rng(77);
  for (auto const& k : corpus()) {
    auto                     labels = k.vertex_labels();
    std::vector<std::string> shuffled_labels(labels.size());
    std::vector<int>         perm(labels.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      shuffled_labels[i] = "w" + std::to_string(perm[i]) + labels[i];
    }
    SimplicialComplex relabelled(shuffled_labels, k.facets());
    CHECK(reduced_homology(relabelled) == reduced_homology(k));
  }
}

TEST_CASE("wedge-of-spheres predicate", "[homology]") {
  CHECK(is_wedge_of_spheres(hexagon(), 1) == 1U);
  CHECK(is_wedge_of_spheres(numbered(3, {{0}, {1}, {2}}), 0) == 2U);
  CHECK_FALSE(is_wedge_of_spheres(hexagon(), 0));
  CHECK_FALSE(is_wedge_of_spheres(rp2(), 1));
  CHECK_FALSE(is_wedge_of_spheres(torus(), 2));
  CHECK(is_wedge_of_spheres(SimplicialComplex(), -1) == 1U);
}

TEST_CASE("top cycles", "[homology]") {
  auto z = top_cycle(sphere2());
  REQUIRE(z);
  CHECK(z->size() == 4);
  for (auto const& c : *z) {
    CHECK(abs(c) == 1);
  }
  CHECK_FALSE(top_cycle(numbered(3, {{0, 1, 2}})));
  CHECK(top_cycle(torus()).has_value());
}
