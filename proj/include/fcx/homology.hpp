#pragma once

// Exact reduced simplicial homology over Z.
//
// Boundary matrices are assembled in the canonical vertex order of the
// complex and reduced to Smith normal form with exact integers. Elimination
// always pivots on a smallest nonzero entry (ties broken by row, then
// column), which keeps coefficient growth in check on the sparse 0/±1
// matrices that arise here.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "complexes.hpp"
#include "error.hpp"

namespace fcx {

  using BigInt      = boost::multiprecision::cpp_int;
  using BigRational = boost::multiprecision::cpp_rational;

  //! Sparse integer matrix with exact entries.
  class IntegerMatrix {
   public:
    IntegerMatrix(std::size_t rows, std::size_t cols)
        : cols_(cols), rows_(rows) {}

    IntegerMatrix(std::initializer_list<std::initializer_list<long long>> init)
        : cols_(init.size() == 0 ? 0 : init.begin()->size()), rows_(init.size()) {
      std::size_t r = 0;
      for (auto const& row : init) {
        if (row.size() != cols_) {
          throw InputError("ragged matrix literal");
        }
        std::size_t c = 0;
        for (long long v : row) {
          set(r, c++, v);
        }
        ++r;
      }
    }

    std::size_t rows() const noexcept {
      return rows_.size();
    }

    std::size_t cols() const noexcept {
      return cols_;
    }

    BigInt at(std::size_t r, std::size_t c) const {
      auto it = rows_.at(r).find(c);
      return it == rows_[r].end() ? BigInt(0) : it->second;
    }

    void set(std::size_t r, std::size_t c, BigInt v) {
      if (r >= rows_.size() || c >= cols_) {
        throw InputError("matrix index out of range");
      }
      if (v == 0) {
        rows_[r].erase(c);
      } else {
        rows_[r][c] = std::move(v);
      }
    }

    std::map<std::size_t, BigInt> const& row(std::size_t r) const {
      return rows_.at(r);
    }

    std::size_t nonzeros() const noexcept {
      std::size_t n = 0;
      for (auto const& r : rows_) {
        n += r.size();
      }
      return n;
    }

    bool is_zero() const noexcept {
      return nonzeros() == 0;
    }

    friend IntegerMatrix operator*(IntegerMatrix const& a, IntegerMatrix const& b) {
      if (a.cols() != b.rows()) {
        throw DomainError("matrix product shape mismatch");
      }
      IntegerMatrix out(a.rows(), b.cols());
      for (std::size_t i = 0; i < a.rows(); ++i) {
        std::map<std::size_t, BigInt> acc;
        for (auto const& [k, v] : a.rows_[i]) {
          for (auto const& [j, w] : b.rows_[k]) {
            acc[j] += v * w;
          }
        }
        for (auto& [j, v] : acc) {
          out.set(i, j, std::move(v));
        }
      }
      return out;
    }

   private:
    std::size_t                                cols_;
    std::vector<std::map<std::size_t, BigInt>> rows_;
  };

  //! Nonzero invariant factors d_1 | d_2 | ... of the Smith normal form.
  inline std::vector<BigInt> snf(IntegerMatrix const& m) {
    std::vector<std::map<std::size_t, BigInt>> rows(m.rows());
    std::vector<std::set<std::size_t>>         cols(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
      rows[r] = m.row(r);
      for (auto const& [c, v] : rows[r]) {
        cols[c].insert(r);
      }
    }
    std::vector<bool> row_alive(m.rows(), true);

    // row_i -= q * row_r
    auto row_op = [&](std::size_t i, std::size_t r, BigInt const& q) {
      for (auto const& [j, v] : rows[r]) {
        auto [it, fresh] = rows[i].try_emplace(j, 0);
        it->second -= q * v;
        if (it->second == 0) {
          rows[i].erase(it);
          cols[j].erase(i);
        } else if (fresh) {
          cols[j].insert(i);
        }
      }
    };

    std::vector<BigInt> diag;
    while (true) {
      // Smallest |entry|, first in (row, col) order.
      std::size_t pr = 0, pc = 0;
      BigInt      best = -1;
      for (std::size_t r = 0; r < rows.size() && best != 1; ++r) {
        if (!row_alive[r]) {
          continue;
        }
        for (auto const& [c, v] : rows[r]) {
          BigInt a = abs(v);
          if (best < 0 || a < best) {
            best = a;
            pr   = r;
            pc   = c;
            if (best == 1) {
              break;
            }
          }
        }
      }
      if (best < 0) {
        break;
      }
      BigInt const pivot = rows[pr].at(pc);
      bool         clean = true;
      std::vector<std::size_t> others(cols[pc].begin(), cols[pc].end());
      for (std::size_t i : others) {
        if (i == pr) {
          continue;
        }
        BigInt q = rows[i].at(pc) / pivot;
        if (q != 0) {
          row_op(i, pr, q);
        }
        if (rows[i].count(pc)) {
          clean = false;
        }
      }
      if (!clean) {
        continue;
      }
      // Column pc is now zero off the pivot, so column operations only touch
      // the pivot row.
      for (auto it = rows[pr].begin(); it != rows[pr].end();) {
        if (it->first == pc) {
          ++it;
          continue;
        }
        it->second %= pivot;  // same sign as dividend, |rem| < |pivot|
        if (it->second == 0) {
          cols[it->first].erase(pr);
          it = rows[pr].erase(it);
        } else {
          clean = false;
          ++it;
        }
      }
      if (!clean) {
        continue;
      }
      diag.push_back(abs(pivot));
      cols[pc].erase(pr);
      rows[pr].clear();
      row_alive[pr] = false;
    }
    // diag(a, b) ~ diag(gcd, lcm): enforce the divisibility chain.
    for (std::size_t i = 0; i < diag.size(); ++i) {
      for (std::size_t j = i + 1; j < diag.size(); ++j) {
        BigInt g = gcd(diag[i], diag[j]);
        BigInt l = diag[i] / g * diag[j];
        diag[i]  = g;
        diag[j]  = l;
      }
    }
    return diag;
  }

  //! Boundary maps ∂_0 (augmentation, 1 x f_0) through ∂_dim. Column j of
  //! ∂_d is the boundary of the j-th d-face in lexicographic order; removing
  //! the i-th vertex contributes sign (-1)^i.
  inline std::vector<IntegerMatrix> boundary_matrices(SimplicialComplex const& k) {
    auto                       faces = k.faces();
    std::vector<IntegerMatrix> out;
    if (faces.empty()) {
      return out;
    }
    IntegerMatrix aug(1, faces[0].size());
    for (std::size_t j = 0; j < faces[0].size(); ++j) {
      aug.set(0, j, 1);
    }
    out.push_back(std::move(aug));
    for (std::size_t d = 1; d < faces.size(); ++d) {
      std::map<Simplex, std::size_t> index;
      for (std::size_t i = 0; i < faces[d - 1].size(); ++i) {
        index.emplace(faces[d - 1][i], i);
      }
      IntegerMatrix bd(faces[d - 1].size(), faces[d].size());
      for (std::size_t j = 0; j < faces[d].size(); ++j) {
        Simplex const& s = faces[d][j];
        for (std::size_t i = 0; i < s.size(); ++i) {
          Simplex t = s;
          t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
          bd.set(index.at(t), j, i % 2 == 0 ? 1 : -1);
        }
      }
      out.push_back(std::move(bd));
    }
    return out;
  }

  //! Reduced homology, degrees -1 .. dim.
  class HomologyResult {
   public:
    struct Group {
      std::size_t         betti = 0;
      std::vector<BigInt> torsion;  // invariant factors > 1

      friend bool operator==(Group const&, Group const&) = default;
    };

    HomologyResult() = default;
    explicit HomologyResult(std::vector<Group> groups)
        : groups_(std::move(groups)) {}

    int top_degree() const noexcept {
      return static_cast<int>(groups_.size()) - 2;
    }

    Group const& group(int degree) const {
      static Group const zero;
      if (degree < -1 || degree > top_degree()) {
        return zero;
      }
      return groups_[degree + 1];
    }

    std::size_t betti(int degree) const {
      return group(degree).betti;
    }

    std::vector<BigInt> const& torsion(int degree) const {
      return group(degree).torsion;
    }

    bool torsion_free() const {
      return std::all_of(groups_.begin(), groups_.end(),
                         [](Group const& g) { return g.torsion.empty(); });
    }

    //! Alternating sum of reduced Betti numbers over degrees >= 0, plus 1:
    //! the unreduced Euler characteristic by Euler-Poincaré.
    long long euler_characteristic() const {
      long long chi = 1;
      for (int d = -1; d <= top_degree(); ++d) {
        long long b = static_cast<long long>(betti(d));
        chi += (d % 2 == 0 ? 1 : -1) * b;
      }
      return chi;
    }

    //! "H~_d = Z^b ⊕ Z/t ⊕ ..." for each degree, one per line; degree -1 only
    //! when nonzero.
    std::string str() const {
      std::ostringstream os;
      for (int d = -1; d <= top_degree(); ++d) {
        Group const& g = group(d);
        if (d == -1 && g.betti == 0) {
          continue;
        }
        os << "H~_" << d << " = ";
        std::vector<std::string> parts;
        if (g.betti > 0) {
          parts.push_back("Z^" + std::to_string(g.betti));
        }
        for (BigInt const& t : g.torsion) {
          parts.push_back("Z/" + t.str());
        }
        if (parts.empty()) {
          os << "0";
        }
        for (std::size_t i = 0; i < parts.size(); ++i) {
          os << (i ? " ⊕ " : "") << parts[i];
        }
        os << "\n";
      }
      return os.str();
    }

    friend bool operator==(HomologyResult const&, HomologyResult const&) = default;

   private:
    std::vector<Group> groups_;
  };

  inline HomologyResult reduced_homology(SimplicialComplex const& k) {
    auto const bds = boundary_matrices(k);
    int const  dim = static_cast<int>(bds.size()) - 1;
    // dims[d + 1] = rank of C_d, d = -1..dim
    std::vector<std::size_t> dims{1};
    for (auto const& b : bds) {
      dims.push_back(b.cols());
    }
    // rank and torsion of ∂_d, d = 0..dim
    std::vector<std::size_t>         ranks;
    std::vector<std::vector<BigInt>> torsions;
    for (auto const& b : bds) {
      auto                f = snf(b);
      std::vector<BigInt> tors;
      for (auto const& t : f) {
        if (t > 1) {
          tors.push_back(t);
        }
      }
      ranks.push_back(f.size());
      torsions.push_back(std::move(tors));
    }
    std::vector<HomologyResult::Group> groups;
    for (int d = -1; d <= dim; ++d) {
      std::size_t rank_in  = d >= 0 ? ranks[d] : 0;            // ∂_d
      std::size_t rank_out = d + 1 <= dim ? ranks[d + 1] : 0;  // ∂_{d+1}
      HomologyResult::Group g;
      g.betti = dims[d + 1] - rank_in - rank_out;
      if (d + 1 <= dim) {
        g.torsion = torsions[d + 1];
      }
      groups.push_back(std::move(g));
    }
    return HomologyResult(std::move(groups));
  }

  //! r when reduced homology is Z^r in degree m, zero elsewhere and torsion
  //! free; empty otherwise.
  inline std::optional<std::size_t> is_wedge_of_spheres(HomologyResult const& h,
                                                        int                   m) {
    if (!h.torsion_free()) {
      return std::nullopt;
    }
    for (int d = -1; d <= h.top_degree(); ++d) {
      if (d != m && h.betti(d) != 0) {
        return std::nullopt;
      }
    }
    return h.betti(m);
  }

  inline std::optional<std::size_t> is_wedge_of_spheres(SimplicialComplex const& k,
                                                        int                      m) {
    return is_wedge_of_spheres(reduced_homology(k), m);
  }

  //! Integer basis-free description of the top-dimensional cycles: when
  //! ker ∂_dim has rank one, its primitive generator as coefficients on the
  //! facets-of-top-dimension list (lexicographic order); empty otherwise.
  inline std::optional<std::vector<BigInt>> top_cycle(SimplicialComplex const& k) {
    auto bds = boundary_matrices(k);
    if (bds.empty()) {
      return std::nullopt;
    }
    IntegerMatrix const& b    = bds.back();
    std::size_t const    rows = b.rows(), cols = b.cols();
    // Dense rational RREF of ∂_top.
    std::vector<std::vector<BigRational>> a(rows, std::vector<BigRational>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      for (auto const& [c, v] : b.row(r)) {
        a[r][c] = BigRational(v);
      }
    }
    std::vector<std::size_t> pivots;
    std::size_t              lead = 0;
    for (std::size_t c = 0; c < cols && lead < rows; ++c) {
      std::size_t p = lead;
      while (p < rows && a[p][c] == 0) {
        ++p;
      }
      if (p == rows) {
        continue;
      }
      std::swap(a[p], a[lead]);
      BigRational inv = 1 / a[lead][c];
      for (auto& x : a[lead]) {
        x *= inv;
      }
      for (std::size_t r = 0; r < rows; ++r) {
        if (r != lead && a[r][c] != 0) {
          BigRational f = a[r][c];
          for (std::size_t j = c; j < cols; ++j) {
            a[r][j] -= f * a[lead][j];
          }
        }
      }
      pivots.push_back(c);
      ++lead;
    }
    if (cols - pivots.size() != 1) {
      return std::nullopt;
    }
    std::size_t free_col = 0;
    for (std::size_t c = 0, p = 0; c < cols; ++c) {
      if (p < pivots.size() && pivots[p] == c) {
        ++p;
      } else {
        free_col = c;
      }
    }
    std::vector<BigRational> v(cols, 0);
    v[free_col] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      v[pivots[i]] = -a[i][free_col];
    }
    BigInt den = 1;
    for (auto const& x : v) {
      BigInt d = boost::multiprecision::denominator(x);
      den      = den / gcd(den, d) * d;
    }
    std::vector<BigInt> out;
    BigInt              g = 0;
    for (auto const& x : v) {
      out.push_back(boost::multiprecision::numerator(x) * (den / boost::multiprecision::denominator(x)));
      g = gcd(g, abs(out.back()));
    }
    for (auto& x : out) {
      x /= g;
    }
    return out;
  }

}  // namespace fcx
