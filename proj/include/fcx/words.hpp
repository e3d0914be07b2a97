#pragma once

// Free-group words over a fixed finite basis, together with the
// automorphisms (signed permutations and Whitehead moves) acting on them.
//
// Text syntax: generator 1 is `x`, 2 is `y`, 3 is `z`, then `a`, `b`, ...
// up to 26 generators; the inverse of a generator is its uppercase letter.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace fcx {

  inline constexpr int max_rank = 26;
  //! Largest rank for which the full Whitehead move list is generated.
  inline constexpr int max_move_rank = 6;

  namespace detail {
    inline constexpr std::string_view generator_names
        = "xyzabcdefghijklmnopqrstuvw";
  }  // namespace detail

  //! A basis generator or its inverse.
  struct Letter {
    int index = 1;  // 1..n
    int sign  = 1;  // +1 or -1

    constexpr Letter inverse() const noexcept {
      return {index, -sign};
    }

    //! Position in the order x, X, y, Y, z, Z, ...
    constexpr int ordinal() const noexcept {
      return 2 * (index - 1) + (sign < 0 ? 1 : 0);
    }

    static constexpr Letter from_ordinal(int ord) noexcept {
      return {ord / 2 + 1, ord % 2 == 0 ? 1 : -1};
    }

    char to_char() const noexcept {
      char c = detail::generator_names[index - 1];
      return sign > 0 ? c : static_cast<char>(c - 'a' + 'A');
    }

    friend constexpr bool operator==(Letter, Letter) = default;
    friend constexpr auto operator<=>(Letter a, Letter b) noexcept {
      return a.ordinal() <=> b.ordinal();
    }
  };

  inline std::string generator_name(int index) {
    if (index < 1 || index > max_rank) {
      throw InputError("generator index out of range: "
                       + std::to_string(index));
    }
    return std::string(1, detail::generator_names[index - 1]);
  }

  inline int generator_index(char c) {
    bool      upper = c >= 'A' && c <= 'Z';
    char      lower = upper ? static_cast<char>(c - 'A' + 'a') : c;
    auto      pos   = detail::generator_names.find(lower);
    if (pos == std::string_view::npos || !(upper || (c >= 'a' && c <= 'z'))) {
      throw InputError(std::string("not a generator symbol: '") + c + "'");
    }
    return static_cast<int>(pos) + 1;
  }

  //! A freely reduced word in F_n. Immutable once constructed.
  class Word {
   public:
    Word() = default;

    explicit Word(int rank) : rank_(rank) {
      check_rank(rank);
    }

    //! Freely reduces `letters`; throws InputError on an index outside 1..rank.
    Word(int rank, std::span<Letter const> letters) : rank_(rank) {
      check_rank(rank);
      letters_.reserve(letters.size());
      for (Letter l : letters) {
        if (l.index < 1 || l.index > rank || (l.sign != 1 && l.sign != -1)) {
          throw InputError("letter index " + std::to_string(l.index)
                           + " outside ambient rank "
                           + std::to_string(rank));
        }
        push_reduced(l);
      }
    }

    //! Parses the text syntax. Whitespace is ignored; "" and "1" denote the
    //! identity ('e' is a generator).
    static Word parse(int rank, std::string_view text) {
      check_rank(rank);
      std::vector<Letter> raw;
      std::string_view    trimmed = text;
      while (!trimmed.empty() && trimmed.front() == ' ') {
        trimmed.remove_prefix(1);
      }
      while (!trimmed.empty() && trimmed.back() == ' ') {
        trimmed.remove_suffix(1);
      }
      if (trimmed == "1") {
        return Word(rank);
      }
      for (char c : trimmed) {
        if (c == ' ' || c == '\t') {
          continue;
        }
        int  idx = generator_index(c);
        bool inv = c >= 'A' && c <= 'Z';
        if (idx > rank) {
          throw InputError(std::string("generator '") + c
                           + "' outside ambient rank " + std::to_string(rank));
        }
        raw.push_back({idx, inv ? -1 : 1});
      }
      return Word(rank, raw);
    }

    static Word generator(int rank, int index, int sign = 1) {
      Letter l{index, sign};
      return Word(rank, std::span<Letter const>(&l, 1));
    }

    int rank() const noexcept {
      return rank_;
    }

    std::span<Letter const> letters() const noexcept {
      return letters_;
    }

    std::size_t size() const noexcept {
      return letters_.size();
    }

    bool empty() const noexcept {
      return letters_.empty();
    }

    Letter operator[](std::size_t i) const noexcept {
      return letters_[i];
    }

    std::string str() const {
      std::string out;
      out.reserve(letters_.size());
      for (Letter l : letters_) {
        out.push_back(l.to_char());
      }
      return out;
    }

    //! Exponent sum of each generator, i.e. the image in Z^n.
    std::vector<long long> exponent_vector() const {
      std::vector<long long> v(rank_, 0);
      for (Letter l : letters_) {
        v[l.index - 1] += l.sign;
      }
      return v;
    }

    friend bool operator==(Word const& a, Word const& b) noexcept {
      return a.rank_ == b.rank_ && a.letters_ == b.letters_;
    }

    friend bool operator<(Word const& a, Word const& b) noexcept {
      if (a.letters_.size() != b.letters_.size()) {
        return a.letters_.size() < b.letters_.size();
      }
      return a.letters_ < b.letters_;
    }

   private:
    friend Word concat(Word const&, Word const&);

    static void check_rank(int rank) {
      if (rank < 1 || rank > max_rank) {
        throw InputError("ambient rank must lie in 1..26, got "
                         + std::to_string(rank));
      }
    }

    void push_reduced(Letter l) {
      if (!letters_.empty() && letters_.back() == l.inverse()) {
        letters_.pop_back();
      } else {
        letters_.push_back(l);
      }
    }

    int                 rank_ = 1;
    std::vector<Letter> letters_;
  };

  inline Word free_reduce(int rank, std::span<Letter const> raw) {
    return Word(rank, raw);
  }

  inline Word concat(Word const& a, Word const& b) {
    if (a.rank() != b.rank()) {
      throw RankMismatch(a.rank(), b.rank());
    }
    Word out = a;
    for (Letter l : b.letters()) {
      out.push_reduced(l);
    }
    return out;
  }

  inline Word operator*(Word const& a, Word const& b) {
    return concat(a, b);
  }

  inline Word inverse(Word const& w) {
    std::vector<Letter> out;
    out.reserve(w.size());
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
      out.push_back(it->inverse());
    }
    return Word(w.rank(), out);
  }

  //! Strips matching first/last letters (conjugation) until none remain.
  inline Word cyclic_reduce(Word const& w) {
    auto        ls = w.letters();
    std::size_t lo = 0, hi = ls.size();
    while (hi - lo >= 2 && ls[lo] == ls[hi - 1].inverse()) {
      ++lo;
      --hi;
    }
    return Word(w.rank(), ls.subspan(lo, hi - lo));
  }

  struct WordHash {
    std::size_t operator()(Word const& w) const noexcept {
      std::size_t h = static_cast<std::size_t>(w.rank());
      for (Letter l : w.letters()) {
        h = h * 131 + static_cast<std::size_t>(l.ordinal() + 1);
      }
      return h;
    }
  };

  inline long long gcd_of(std::span<long long const> v) {
    long long g = 0;
    for (long long e : v) {
      g = std::gcd(g, e < 0 ? -e : e);
    }
    return g;
  }

  ////////////////////////////////////////////////////////////////////////
  // Automorphisms
  ////////////////////////////////////////////////////////////////////////

  //! An automorphism of F_n stored as the images of the basis together with
  //! the images of the basis under its inverse.
  class Automorphism {
   public:
    static Automorphism identity(int rank) {
      std::vector<Word> gens;
      for (int i = 1; i <= rank; ++i) {
        gens.push_back(Word::generator(rank, i));
      }
      return Automorphism(rank, gens, gens);
    }

    //! Builds from explicit images and inverse images. Throws DomainError if
    //! the pair does not compose to the identity on the basis.
    Automorphism(int rank, std::vector<Word> images, std::vector<Word> inverse_images)
        : rank_(rank),
          images_(std::move(images)),
          inverse_images_(std::move(inverse_images)) {
      if (static_cast<int>(images_.size()) != rank
          || static_cast<int>(inverse_images_.size()) != rank) {
        throw InputError("automorphism needs exactly one image per generator");
      }
      for (auto const* v : {&images_, &inverse_images_}) {
        for (Word const& w : *v) {
          if (w.rank() != rank) {
            throw RankMismatch(rank, w.rank());
          }
        }
      }
      if (!verify()) {
        throw DomainError("images and inverse images are not mutually inverse");
      }
    }

    int rank() const noexcept {
      return rank_;
    }

    std::vector<Word> const& images() const noexcept {
      return images_;
    }

    std::vector<Word> const& inverse_images() const noexcept {
      return inverse_images_;
    }

    Word const& image(int index) const {
      return images_[index - 1];
    }

    Automorphism inverse() const {
      Automorphism a = *this;
      std::swap(a.images_, a.inverse_images_);
      return a;
    }

    //! Applies to a word: each letter is replaced by the image of its
    //! generator, or by the inverse of that image for an inverse letter.
    Word apply(Word const& w) const {
      if (w.rank() != rank_) {
        throw RankMismatch(rank_, w.rank());
      }
      return substitute(images_, w);
    }

    //! True when both composites fix every basis generator.
    bool verify() const {
      for (int i = 1; i <= rank_; ++i) {
        Word g = Word::generator(rank_, i);
        if (substitute(images_, inverse_images_[i - 1]) != g
            || substitute(inverse_images_, images_[i - 1]) != g) {
          return false;
        }
      }
      return true;
    }

    bool is_identity() const {
      for (int i = 1; i <= rank_; ++i) {
        if (images_[i - 1] != Word::generator(rank_, i)) {
          return false;
        }
      }
      return true;
    }

    //! Integer matrix of the induced map on Z^n; column j is the exponent
    //! vector of the image of generator j.
    std::vector<std::vector<long long>> abelianization() const {
      std::vector<std::vector<long long>> m(rank_,
                                            std::vector<long long>(rank_, 0));
      for (int j = 0; j < rank_; ++j) {
        auto v = images_[j].exponent_vector();
        for (int i = 0; i < rank_; ++i) {
          m[i][j] = v[i];
        }
      }
      return m;
    }

    friend bool operator==(Automorphism const& a, Automorphism const& b) {
      return a.rank_ == b.rank_ && a.images_ == b.images_;
    }

    //! Text form "x->xy, y->y".
    std::string str() const {
      std::string out;
      for (int i = 1; i <= rank_; ++i) {
        if (i > 1) {
          out += ", ";
        }
        Word const& w = images_[i - 1];
        out += generator_name(i) + "->" + (w.empty() ? "1" : w.str());
      }
      return out;
    }

   private:
    static Word substitute(std::vector<Word> const& imgs, Word const& w) {
      std::vector<Letter> raw;
      for (Letter l : w.letters()) {
        auto img = imgs[l.index - 1].letters();
        if (l.sign > 0) {
          raw.insert(raw.end(), img.begin(), img.end());
        } else {
          for (auto it = img.rbegin(); it != img.rend(); ++it) {
            raw.push_back(it->inverse());
          }
        }
      }
      return Word(w.rank(), raw);
    }

    int               rank_;
    std::vector<Word> images_;
    std::vector<Word> inverse_images_;
  };

  inline Word apply(Automorphism const& a, Word const& w) {
    return a.apply(w);
  }

  //! a after b: x -> a(b(x)).
  inline Automorphism compose(Automorphism const& a, Automorphism const& b) {
    if (a.rank() != b.rank()) {
      throw RankMismatch(a.rank(), b.rank());
    }
    std::vector<Word> imgs, invs;
    Automorphism      a_inv = a.inverse();
    Automorphism      b_inv = b.inverse();
    for (int i = 1; i <= a.rank(); ++i) {
      imgs.push_back(a.apply(b.image(i)));
      invs.push_back(b_inv.apply(a_inv.image(i)));
    }
    return Automorphism(a.rank(), std::move(imgs), std::move(invs));
  }

  ////////////////////////////////////////////////////////////////////////
  // Whitehead moves
  ////////////////////////////////////////////////////////////////////////

  struct WhiteheadMove {
    enum class Kind { TypeI, TypeII };

    Kind kind;
    int  rank;
    // TypeI: generator i goes to signed generator signed_perm[i-1].
    std::vector<Letter> signed_perm;
    // TypeII: multiplier a and the set A as a bitmask over letter ordinals.
    Letter        multiplier{};
    std::uint64_t subset = 0;
    Automorphism  automorphism;

    static WhiteheadMove type_one(int rank, std::vector<Letter> perm) {
      std::vector<Word> imgs(rank), invs(rank);
      for (int i = 1; i <= rank; ++i) {
        Letter t         = perm[i - 1];
        imgs[i - 1]      = Word::generator(rank, t.index, t.sign);
        invs[t.index - 1] = Word::generator(rank, i, t.sign);
      }
      return {Kind::TypeI,
              rank,
              std::move(perm),
              {},
              0,
              Automorphism(rank, std::move(imgs), std::move(invs))};
    }

    //! The move (A, a): a fixed; other x go to x a, a^-1 x or a^-1 x a
    //! according to membership of x and x^-1 in A. Requires a in A and
    //! a^-1 not in A.
    static WhiteheadMove type_two(int rank, Letter a, std::uint64_t subset) {
      auto in = [subset](Letter l) {
        return ((subset >> l.ordinal()) & 1U) != 0;
      };
      if (!in(a) || in(a.inverse())) {
        throw DomainError("Whitehead set must contain a but not a^-1");
      }
      Letter        a_inv     = a.inverse();
      std::uint64_t inv_subset = (subset & ~(std::uint64_t(1) << a.ordinal()))
                                 | (std::uint64_t(1) << a_inv.ordinal());
      return {Kind::TypeII,
              rank,
              {},
              a,
              subset,
              Automorphism(rank,
                           type_two_images(rank, a, subset),
                           type_two_images(rank, a_inv, inv_subset))};
    }

    std::string str() const {
      if (kind == Kind::TypeI) {
        return "permute[" + automorphism.str() + "]";
      }
      std::string set;
      for (int ord = 0; ord < 2 * rank; ++ord) {
        if ((subset >> ord) & 1U) {
          set.push_back(Letter::from_ordinal(ord).to_char());
        }
      }
      return std::string("whitehead(") + multiplier.to_char() + ",{" + set
             + "})";
    }

   private:
    static std::vector<Word> type_two_images(int           rank,
                                             Letter        a,
                                             std::uint64_t subset) {
      auto in = [subset](Letter l) {
        return ((subset >> l.ordinal()) & 1U) != 0;
      };
      Word              aw  = Word::generator(rank, a.index, a.sign);
      Word              aiw = inverse(aw);
      std::vector<Word> imgs;
      for (int i = 1; i <= rank; ++i) {
        Word x = Word::generator(rank, i);
        if (i == a.index) {
          imgs.push_back(x);
          continue;
        }
        Letter xl{i, 1};
        Word   img = x;
        if (in(xl)) {
          img = img * aw;
        }
        if (in(xl.inverse())) {
          img = aiw * img;
        }
        imgs.push_back(img);
      }
      return imgs;
    }
  };

  //! Every nontrivial Whitehead automorphism of F_n, deduplicated by basis
  //! images. Type I (signed permutations, lexicographic permutation then
  //! sign mask) precede Type II (ordered by multiplier ordinal, then mask).
  inline std::vector<WhiteheadMove> whitehead_move_list(int rank,
                                                        bool include_type_one
                                                        = true) {
    if (rank < 1 || rank > max_rank) {
      throw InputError("rank out of range");
    }
    if (rank > max_move_rank) {
      throw ResourceLimit("Whitehead move inventory is limited to rank "
                              + std::to_string(max_move_rank),
                          "no moves generated");
    }
    std::vector<WhiteheadMove>  out;
    std::set<std::vector<Word>> seen;
    auto keep = [&](WhiteheadMove&& m) {
      if (m.automorphism.is_identity()) {
        return;
      }
      auto const& imgs = m.automorphism.images();
      if (!seen.insert(imgs).second) {
        return;
      }
      out.push_back(std::move(m));
    };
    if (include_type_one) {
      std::vector<int> perm(rank);
      std::iota(perm.begin(), perm.end(), 1);
      do {
        for (std::uint64_t signs = 0; signs < (std::uint64_t(1) << rank);
             ++signs) {
          std::vector<Letter> sp;
          for (int i = 0; i < rank; ++i) {
            sp.push_back({perm[i], ((signs >> i) & 1U) ? -1 : 1});
          }
          keep(WhiteheadMove::type_one(rank, std::move(sp)));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    int const letters = 2 * rank;
    for (int ord = 0; ord < letters; ++ord) {
      Letter a     = Letter::from_ordinal(ord);
      int    a_inv = a.inverse().ordinal();
      for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << letters);
           ++mask) {
        if (!((mask >> ord) & 1U) || ((mask >> a_inv) & 1U)) {
          continue;
        }
        keep(WhiteheadMove::type_two(rank, a, mask));
      }
    }
    return out;
  }

  inline std::vector<Automorphism> whitehead_moves(int rank) {
    std::vector<Automorphism> out;
    for (auto& m : whitehead_move_list(rank)) {
      out.push_back(std::move(m.automorphism));
    }
    return out;
  }

}  // namespace fcx

template <>
struct std::hash<fcx::Word> : fcx::WordHash {};
