#pragma once

// Spherical buildings of proper nonzero subspaces: exact over prime fields
// F_q, and over Q through finite pieces (apartments and images of free
// factors under abelianization).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "complexes.hpp"
#include "error.hpp"
#include "factor_complex.hpp"
#include "homology.hpp"
#include "words.hpp"

namespace fcx {

  inline bool is_prime(int q) {
    if (q < 2) {
      return false;
    }
    for (int d = 2; d * d <= q; ++d) {
      if (q % d == 0) {
        return false;
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Subspaces of F_q^n
  ////////////////////////////////////////////////////////////////////////

  class FqSubspace {
   public:
    //! Row space of `vectors` (entries taken mod q).
    static FqSubspace span(int q, int n, std::vector<std::vector<long long>> const& vectors) {
      if (!is_prime(q)) {
        throw InputError("q must be prime, got " + std::to_string(q));
      }
      std::vector<std::vector<int>> rows;
      for (auto const& v : vectors) {
        if (static_cast<int>(v.size()) != n) {
          throw InputError("vector of length " + std::to_string(v.size())
                           + " in dimension " + std::to_string(n));
        }
        std::vector<int> r(n);
        for (int j = 0; j < n; ++j) {
          r[j] = static_cast<int>(((v[j] % q) + q) % q);
        }
        rows.push_back(std::move(r));
      }
      return FqSubspace(q, n, rref(q, std::move(rows)));
    }

    int q() const noexcept {
      return q_;
    }

    int n() const noexcept {
      return n_;
    }

    int dim() const noexcept {
      return static_cast<int>(rows_.size());
    }

    std::vector<std::vector<int>> const& rows() const noexcept {
      return rows_;
    }

    //! "[1,0,1;0,1,0]"; "[]" for the zero space.
    std::string key() const {
      std::string s = "[";
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        s += i ? ";" : "";
        for (std::size_t j = 0; j < rows_[i].size(); ++j) {
          s += (j ? "," : "") + std::to_string(rows_[i][j]);
        }
      }
      return s + "]";
    }

    bool contains(std::vector<int> v) const {
      for (auto const& r : rows_) {
        int p = pivot(r);
        if (v[p] != 0) {
          int c = v[p];
          for (int j = 0; j < n_; ++j) {
            v[j] = ((v[j] - c * r[j]) % q_ + q_) % q_;
          }
        }
      }
      return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
    }

    friend bool operator==(FqSubspace const&, FqSubspace const&) = default;

    //! Canonical order: by dimension, then rows.
    friend bool operator<(FqSubspace const& a, FqSubspace const& b) {
      return a.dim() != b.dim() ? a.dim() < b.dim() : a.rows_ < b.rows_;
    }

    static int pivot(std::vector<int> const& r) {
      return static_cast<int>(std::find_if(r.begin(), r.end(), [](int x) { return x != 0; })
                              - r.begin());
    }

    static int inverse_mod(int a, int q) {
      int r = 1, e = q - 2;
      long long b = a;
      while (e > 0) {
        if (e & 1) {
          r = static_cast<int>(r * b % q);
        }
        b = b * b % q;
        e >>= 1;
      }
      return r;
    }

    static std::vector<std::vector<int>> rref(int q, std::vector<std::vector<int>> a) {
      std::size_t const n    = a.empty() ? 0 : a[0].size();
      std::size_t       rank = 0;
      for (std::size_t c = 0; c < n && rank < a.size(); ++c) {
        std::size_t p = rank;
        while (p < a.size() && a[p][c] == 0) {
          ++p;
        }
        if (p == a.size()) {
          continue;
        }
        std::swap(a[p], a[rank]);
        int inv = inverse_mod(a[rank][c], q);
        for (auto& x : a[rank]) {
          x = x * inv % q;
        }
        for (std::size_t r = 0; r < a.size(); ++r) {
          if (r != rank && a[r][c] != 0) {
            int f = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
              a[r][j] = ((a[r][j] - f * a[rank][j]) % q + q) % q;
            }
          }
        }
        ++rank;
      }
      a.resize(rank);
      return a;
    }

   private:
    FqSubspace(int q, int n, std::vector<std::vector<int>> rows)
        : q_(q), n_(n), rows_(std::move(rows)) {}

    int                           q_;
    int                           n_;
    std::vector<std::vector<int>> rows_;
  };

  inline bool subspace_leq(FqSubspace const& u, FqSubspace const& w) {
    if (u.dim() > w.dim()) {
      return false;
    }
    return std::all_of(u.rows().begin(), u.rows().end(),
                       [&](std::vector<int> const& r) { return w.contains(r); });
  }

  //! Number of k-dimensional subspaces of F_q^n.
  inline BigInt gaussian_binomial(int n, int k, int q) {
    if (k < 0 || k > n) {
      return 0;
    }
    BigInt num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
      num *= pow(BigInt(q), n - i) - 1;
      den *= pow(BigInt(q), i + 1) - 1;
    }
    return num / den;
  }

  struct BuildingLimits {
    std::size_t max_subspaces = 100'000;
    std::size_t max_facets    = default_max_facets;
    //! Lift the default (n <= 4, q <= 3) / (n <= 3, q <= 5) guard.
    bool override_caps = false;
  };

  //! All proper nonzero subspaces of F_q^n in canonical order.
  inline std::vector<FqSubspace> enumerate_subspaces(int n, int q,
                                                     BuildingLimits const& limits = {}) {
    if (!is_prime(q)) {
      throw InputError("q must be prime, got " + std::to_string(q));
    }
    if (n < 2) {
      throw InputError("ambient dimension must be at least 2");
    }
    BigInt total = 0;
    for (int k = 1; k < n; ++k) {
      total += gaussian_binomial(n, k, q);
    }
    if (total > limits.max_subspaces) {
      throw ResourceLimit("F_" + std::to_string(q) + "^" + std::to_string(n) + " has "
                              + total.str() + " proper subspaces, above the cap of "
                              + std::to_string(limits.max_subspaces),
                          "nothing enumerated");
    }
    std::vector<FqSubspace> out;
    for (int k = 1; k < n; ++k) {
      // Pivot columns, then every filling of the free entries.
      for (std::uint32_t pm = 0; pm < (1U << n); ++pm) {
        if (__builtin_popcount(pm) != k) {
          continue;
        }
        std::vector<int> piv;
        for (int j = 0; j < n; ++j) {
          if ((pm >> j) & 1U) {
            piv.push_back(j);
          }
        }
        std::vector<std::pair<int, int>> free;
        for (int i = 0; i < k; ++i) {
          for (int j = piv[i] + 1; j < n; ++j) {
            if (!((pm >> j) & 1U)) {
              free.emplace_back(i, j);
            }
          }
        }
        std::vector<int> digits(free.size(), 0);
        while (true) {
          std::vector<std::vector<long long>> rows(k, std::vector<long long>(n, 0));
          for (int i = 0; i < k; ++i) {
            rows[i][piv[i]] = 1;
          }
          for (std::size_t t = 0; t < free.size(); ++t) {
            rows[free[t].first][free[t].second] = digits[t];
          }
          out.push_back(FqSubspace::span(q, n, rows));
          std::size_t t = 0;
          while (t < digits.size() && ++digits[t] == q) {
            digits[t++] = 0;
          }
          if (t == digits.size()) {
            break;
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  //! A subcomplex of a finite-field building; subspaces[i] labels vertex i.
  struct FqComplex {
    SimplicialComplex       complex;
    std::vector<FqSubspace> subspaces;
  };

  inline FqComplex subspace_order_complex(std::vector<FqSubspace> subspaces,
                                          std::size_t max_facets = default_max_facets) {
    std::sort(subspaces.begin(), subspaces.end(),
              [](FqSubspace const& a, FqSubspace const& b) { return a.key() < b.key(); });
    PosetView p;
    for (auto const& s : subspaces) {
      p.keys.push_back(s.key());
    }
    p.strictly_less = [&subspaces](std::size_t i, std::size_t j) {
      return subspaces[i].dim() < subspaces[j].dim()
             && subspace_leq(subspaces[i], subspaces[j]);
    };
    auto k = order_complex(p, max_facets);
    return {std::move(k), std::move(subspaces)};
  }

  inline FqComplex build_building(int n, int q, BuildingLimits const& limits = {}) {
    bool desk = (n <= 4 && q <= 3) || (n <= 3 && q <= 5);
    if (!desk && !limits.override_caps) {
      throw ResourceLimit("building (n=" + std::to_string(n) + ", q=" + std::to_string(q)
                              + ") is beyond the default desk-scale caps",
                          "nothing built; pass the override to force it");
    }
    return subspace_order_complex(enumerate_subspaces(n, q, limits), limits.max_facets);
  }

  //! Flags of spans of proper nonempty subsets of n independent vectors.
  inline FqComplex building_apartment(int q, std::vector<std::vector<long long>> const& basis) {
    int const n = static_cast<int>(basis.size());
    if (n < 2) {
      throw InputError("an apartment needs at least two vectors");
    }
    if (FqSubspace::span(q, n, basis).dim() != n) {
      throw DomainError("apartment vectors are linearly dependent mod "
                        + std::to_string(q));
    }
    std::vector<FqSubspace> vs;
    for (std::uint32_t m = 1; m + 1 < (1U << n); ++m) {
      std::vector<std::vector<long long>> rows;
      for (int i = 0; i < n; ++i) {
        if ((m >> i) & 1U) {
          rows.push_back(basis[i]);
        }
      }
      vs.push_back(FqSubspace::span(q, n, rows));
    }
    return subspace_order_complex(std::move(vs));
  }

  ////////////////////////////////////////////////////////////////////////
  // Subspaces of Q^n
  ////////////////////////////////////////////////////////////////////////

  class QSubspace {
   public:
    static QSubspace span(int n, std::vector<std::vector<BigRational>> a) {
      for (auto const& v : a) {
        if (static_cast<int>(v.size()) != n) {
          throw InputError("vector of length " + std::to_string(v.size())
                           + " in dimension " + std::to_string(n));
        }
      }
      std::size_t rank = 0;
      for (int c = 0; c < n && rank < a.size(); ++c) {
        std::size_t p = rank;
        while (p < a.size() && a[p][c] == 0) {
          ++p;
        }
        if (p == a.size()) {
          continue;
        }
        std::swap(a[p], a[rank]);
        BigRational inv = 1 / a[rank][c];
        for (auto& x : a[rank]) {
          x *= inv;
        }
        for (std::size_t r = 0; r < a.size(); ++r) {
          if (r != rank && a[r][c] != 0) {
            BigRational f = a[r][c];
            for (int j = 0; j < n; ++j) {
              a[r][j] -= f * a[rank][j];
            }
          }
        }
        ++rank;
      }
      a.resize(rank);
      return QSubspace(n, std::move(a));
    }

    static QSubspace span(int n, std::vector<std::vector<BigInt>> const& vectors) {
      std::vector<std::vector<BigRational>> a;
      for (auto const& v : vectors) {
        a.emplace_back(v.begin(), v.end());
      }
      return span(n, std::move(a));
    }

    int n() const noexcept {
      return n_;
    }

    int dim() const noexcept {
      return static_cast<int>(rows_.size());
    }

    std::vector<std::vector<BigRational>> const& rows() const noexcept {
      return rows_;
    }

    //! "[1,0,1/2;0,1,0]"; exact fraction strings.
    std::string key() const {
      std::string s = "[";
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        s += i ? ";" : "";
        for (std::size_t j = 0; j < rows_[i].size(); ++j) {
          s += (j ? "," : "") + rows_[i][j].str();
        }
      }
      return s + "]";
    }

    bool contains_space(QSubspace const& u) const {
      if (u.dim() > dim()) {
        return false;
      }
      auto both = rows_;
      both.insert(both.end(), u.rows_.begin(), u.rows_.end());
      return span(n_, std::move(both)).dim() == dim();
    }

    friend bool operator==(QSubspace const&, QSubspace const&) = default;

   private:
    QSubspace(int n, std::vector<std::vector<BigRational>> rows)
        : n_(n), rows_(std::move(rows)) {}

    int                                   n_;
    std::vector<std::vector<BigRational>> rows_;
  };

  //! Rational span of the exponent-sum vectors of the subgroup's basis.
  inline QSubspace abelianize(CoreGraph const& g) {
    std::vector<std::vector<BigInt>> vs;
    for (auto const& w : g.subgroup_basis()) {
      auto e = w.exponent_vector();
      vs.emplace_back(e.begin(), e.end());
    }
    return QSubspace::span(g.ambient_rank(), vs);
  }

  inline QSubspace abelianize(FreeFactor const& h) {
    return abelianize(h.core());
  }

  struct QComplex {
    SimplicialComplex      complex;
    std::vector<QSubspace> subspaces;
  };

  //! Apartment of the rational building on n independent integer vectors.
  inline QComplex rational_apartment(std::vector<std::vector<BigInt>> const& basis) {
    int const n = static_cast<int>(basis.size());
    if (QSubspace::span(n, basis).dim() != n) {
      throw DomainError("apartment vectors are linearly dependent over Q");
    }
    std::vector<QSubspace> vs;
    for (std::uint32_t m = 1; m + 1 < (1U << n); ++m) {
      std::vector<std::vector<BigInt>> rows;
      for (int i = 0; i < n; ++i) {
        if ((m >> i) & 1U) {
          rows.push_back(basis[i]);
        }
      }
      vs.push_back(QSubspace::span(n, rows));
    }
    std::sort(vs.begin(), vs.end(),
              [](QSubspace const& a, QSubspace const& b) { return a.key() < b.key(); });
    PosetView p;
    for (auto const& s : vs) {
      p.keys.push_back(s.key());
    }
    p.strictly_less = [&vs](std::size_t i, std::size_t j) {
      return vs[i].dim() < vs[j].dim() && vs[j].contains_space(vs[i]);
    };
    auto k = order_complex(p);
    return {std::move(k), std::move(vs)};
  }

  ////////////////////////////////////////////////////////////////////////
  // From FC_n to the rational building
  ////////////////////////////////////////////////////////////////////////

  struct ApartmentMap {
    FactorComplex    source;
    QComplex         target;
    std::vector<int> vertex_map;  // source vertex -> target vertex
    bool             injective         = false;
    bool             facets_to_facets  = false;
    bool             onto              = false;
    //! Coefficients of the image of the source fundamental cycle on the
    //! target's top faces, in the target's lexicographic face order.
    std::vector<BigInt> cycle_image;
    bool                cycle_image_unit = false;  // every coefficient ±1
    bool                cycle_image_is_cycle = false;

    bool verified() const noexcept {
      return injective && facets_to_facets && onto && cycle_image_unit
             && cycle_image_is_cycle;
    }
  };

  namespace detail {
    // Sign of the permutation sorting v.
    inline int sort_sign(std::vector<int>& v) {
      int sign = 1;
      for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) {
          if (v[j] < v[i]) {
            sign = -sign;
          }
        }
      }
      std::sort(v.begin(), v.end());
      return sign;
    }
  }  // namespace detail

  //! Abelianization on the apartment of a basis of F_n, checked to be a
  //! simplicial isomorphism onto the rational apartment of the exponent
  //! vectors, together with the image of the fundamental cycle.
  inline ApartmentMap induced_apartment_map(int rank, std::vector<Word> const& basis) {
    ApartmentMap m;
    m.source = apartment(rank, basis);
    std::vector<std::vector<BigInt>> vecs;
    for (auto const& w : basis) {
      auto e = w.exponent_vector();
      vecs.emplace_back(e.begin(), e.end());
    }
    if (QSubspace::span(rank, vecs).dim() != rank) {
      throw std::logic_error("exponent vectors of a basis of F_n are dependent");
    }
    m.target = rational_apartment(vecs);

    std::vector<std::string> const& tl = m.target.complex.vertex_labels();
    std::vector<bool>               hit(tl.size(), false);
    m.injective = true;
    for (auto const& f : m.source.factors) {
      std::string key = abelianize(f).key();
      auto        it  = std::lower_bound(tl.begin(), tl.end(), key);
      if (it == tl.end() || *it != key) {
        throw std::logic_error("abelianized factor " + f.key()
                               + " is not a vertex of the target apartment");
      }
      int v = static_cast<int>(it - tl.begin());
      m.injective = m.injective && !hit[v];
      hit[v]      = true;
      m.vertex_map.push_back(v);
    }
    m.onto = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });

    auto const& tf = m.target.complex.facets();
    m.facets_to_facets = true;
    std::vector<BigInt> image(tf.size(), 0);
    auto                z = top_cycle(m.source.complex);
    for (std::size_t i = 0; i < m.source.complex.facets().size(); ++i) {
      std::vector<int> t;
      for (int v : m.source.complex.facets()[i]) {
        t.push_back(m.vertex_map[v]);
      }
      int  sign = detail::sort_sign(t);
      auto it   = std::lower_bound(tf.begin(), tf.end(), t);
      if (it == tf.end() || *it != t) {
        m.facets_to_facets = false;
        continue;
      }
      if (z) {
        image[it - tf.begin()] += sign * (*z)[i];
      }
    }
    m.cycle_image      = image;
    m.cycle_image_unit = z && std::all_of(image.begin(), image.end(),
                                          [](BigInt const& c) { return abs(c) == 1; });
    if (auto zt = top_cycle(m.target.complex); zt && m.cycle_image_unit) {
      // The image is a cycle iff it is ± the target's generator.
      bool same = true, opposite = true;
      for (std::size_t i = 0; i < image.size(); ++i) {
        same     = same && image[i] == (*zt)[i];
        opposite = opposite && image[i] == -(*zt)[i];
      }
      m.cycle_image_is_cycle = same || opposite;
    }
    return m;
  }

  ////////////////////////////////////////////////////////////////////////
  // Steinberg rank
  ////////////////////////////////////////////////////////////////////////

  struct SteinbergReport {
    int                        n = 0;
    int                        q = 0;
    HomologyResult             homology;
    std::optional<std::size_t> computed;  // set when the homology is a wedge of S^{n-2}
    BigInt                     expected;  // q^(n(n-1)/2)
    BigInt                     euler;     // (-1)^(n-2) times the reduced Euler characteristic
    bool                       pass = false;
  };

  inline SteinbergReport steinberg_check(int n, int q, BuildingLimits const& limits = {}) {
    auto            b = build_building(n, q, limits);
    SteinbergReport r;
    r.n        = n;
    r.q        = q;
    r.homology = reduced_homology(b.complex);
    r.computed = is_wedge_of_spheres(r.homology, n - 2);
    r.expected = pow(BigInt(q), n * (n - 1) / 2);
    long long chi = b.complex.euler_characteristic(true);
    r.euler       = (n % 2 == 0) ? chi : -chi;
    r.pass        = r.computed && BigInt(*r.computed) == r.expected && r.euler == r.expected;
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // Lifting integer bases to F_n
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    inline Word power(Word const& w, long long e) {
      Word out(w.rank());
      Word base = e < 0 ? inverse(w) : w;
      for (long long i = 0; i < (e < 0 ? -e : e); ++i) {
        out = out * base;
      }
      return out;
    }
  }  // namespace detail

  //! Basis w_1..w_n of F_n whose exponent vectors are the rows of a
  //! unimodular integer matrix, via an elementary-matrix factorization.
  inline std::vector<Word> lift_unimodular(std::vector<std::vector<long long>> m) {
    int const n = static_cast<int>(m.size());
    if (n < 1 || n > max_rank) {
      throw InputError("matrix size must lie in 1.." + std::to_string(max_rank));
    }
    for (auto const& r : m) {
      if (static_cast<int>(r.size()) != n) {
        throw InputError("matrix must be square");
      }
    }
    struct Op {
      int       kind;  // 0: R_i += c R_j, 1: swap, 2: negate
      int       i, j;
      long long c;
    };
    std::vector<Op> ops;
    auto            add = [&](int i, int j, long long c) {
      for (int t = 0; t < n; ++t) {
        m[i][t] += c * m[j][t];
      }
      ops.push_back({0, i, j, c});
    };
    for (int c = 0; c < n; ++c) {
      // Euclid down column c among rows c..n-1.
      while (true) {
        int best = -1;
        for (int r = c; r < n; ++r) {
          if (m[r][c] != 0 && (best < 0 || std::llabs(m[r][c]) < std::llabs(m[best][c]))) {
            best = r;
          }
        }
        if (best < 0) {
          throw DomainError("matrix is singular, not unimodular");
        }
        if (best != c) {
          std::swap(m[best], m[c]);
          ops.push_back({1, best, c, 0});
        }
        bool done = true;
        for (int r = c + 1; r < n; ++r) {
          if (m[r][c] != 0) {
            add(r, c, -(m[r][c] / m[c][c]));
            done = done && m[r][c] == 0;
          }
        }
        if (done) {
          break;
        }
      }
      if (std::llabs(m[c][c]) != 1) {
        throw DomainError("matrix is not unimodular (determinant is not ±1)");
      }
      if (m[c][c] < 0) {
        for (auto& x : m[c]) {
          x = -x;
        }
        ops.push_back({2, c, c, 0});
      }
    }
    for (int c = n - 1; c >= 0; --c) {
      for (int r = 0; r < c; ++r) {
        if (m[r][c] != 0) {
          add(r, c, -m[r][c]);
        }
      }
    }
    // E_k ... E_1 M = I, so M = E_1^-1 ... E_k^-1: apply the inverses to the
    // standard basis starting from E_k^-1.
    std::vector<Word> w;
    for (int i = 1; i <= n; ++i) {
      w.push_back(Word::generator(n, i));
    }
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
      switch (it->kind) {
        case 0:
          w[it->i] = w[it->i] * detail::power(w[it->j], -it->c);
          break;
        case 1:
          std::swap(w[it->i], w[it->j]);
          break;
        default:
          w[it->i] = inverse(w[it->i]);
      }
    }
    return w;
  }

  //! Complete flag <w_1> < <w_1,w_2> < ... of free factors over the flag of
  //! row spans of a unimodular matrix.
  inline std::vector<FreeFactor> lift_flag(std::vector<std::vector<long long>> const& m) {
    auto const              w = lift_unimodular(m);
    int const               n = static_cast<int>(w.size());
    std::vector<FreeFactor> flag;
    for (int k = 1; k < n; ++k) {
      std::vector<Word> gens(w.begin(), w.begin() + k);
      flag.push_back(FreeFactor::from_words(n, gens));
    }
    return flag;
  }

}  // namespace fcx
