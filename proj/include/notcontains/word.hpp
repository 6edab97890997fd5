#pragma once

// Combinatorics-on-words kernel: symbols, alphabets, primitivity, periods,
// overlaps and the explicit long-primitive-word constructions used to defeat
// conflict-free overlaps.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace notcontains {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

/// Input or precondition failure reported to the caller.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A broken internal invariant; always a bug in this library.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A configured resource cap (paths, patterns, disjuncts, time) was hit.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(std::string reason)
      : Error("cap exceeded: " + reason), reason_(std::move(reason)) {}
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

/// Symbol table. Base letters get ids 0..n-1 in character order; separators
/// are allocated after them, so they sort after every base letter.
class Alphabet {
 public:
  static constexpr char kSeparatorGlyph = '#';

  Alphabet() = default;

  explicit Alphabet(std::string_view letters) : letters_(letters) {
    if (letters_.empty()) throw Error("alphabet must not be empty");
    std::sort(letters_.begin(), letters_.end());
    if (std::adjacent_find(letters_.begin(), letters_.end()) != letters_.end()) {
      throw Error("alphabet letters must be distinct");
    }
    if (letters_.find(kSeparatorGlyph) != std::string::npos) {
      throw Error("alphabet must not contain the reserved letter '#'");
    }
  }

  std::size_t base_size() const noexcept { return letters_.size(); }
  std::size_t size() const noexcept { return letters_.size() + separators_; }
  const std::string& letters() const noexcept { return letters_; }

  bool is_separator(Symbol s) const noexcept { return s >= letters_.size(); }

  Symbol add_separator() { return static_cast<Symbol>(letters_.size() + separators_++); }

  std::optional<Symbol> id_of(char c) const noexcept {
    auto it = std::lower_bound(letters_.begin(), letters_.end(), c);
    if (it == letters_.end() || *it != c) return std::nullopt;
    return static_cast<Symbol>(it - letters_.begin());
  }

  char glyph(Symbol s) const noexcept {
    return is_separator(s) ? kSeparatorGlyph : letters_[s];
  }

  Word encode(std::string_view text) const {
    Word w;
    w.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      auto id = id_of(text[i]);
      if (!id) {
        throw Error("letter '" + std::string(1, text[i]) + "' at position " + std::to_string(i) +
                    " is not in the alphabet");
      }
      w.push_back(*id);
    }
    return w;
  }

  std::string decode(std::span<const Symbol> w) const {
    std::string out;
    out.reserve(w.size());
    for (Symbol s : w) out.push_back(glyph(s));
    return out;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::string letters_;
  std::size_t separators_ = 0;
};

// ---------------------------------------------------------------------------
// Small word utilities.

inline Word power(std::span<const Symbol> w, std::size_t k) {
  Word out;
  out.reserve(w.size() * k);
  for (std::size_t i = 0; i < k; ++i) out.insert(out.end(), w.begin(), w.end());
  return out;
}

inline void append(Word& dst, std::span<const Symbol> src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

template <typename... Ws>
Word concat(const Ws&... parts) {
  Word out;
  out.reserve((std::size(parts) + ... + 0));
  (out.insert(out.end(), std::begin(parts), std::end(parts)), ...);
  return out;
}

inline bool starts_with(std::span<const Symbol> w, std::span<const Symbol> prefix) {
  return prefix.size() <= w.size() && std::equal(prefix.begin(), prefix.end(), w.begin());
}

inline bool ends_with(std::span<const Symbol> w, std::span<const Symbol> suffix) {
  return suffix.size() <= w.size() && std::equal(suffix.begin(), suffix.end(), w.end() - suffix.size());
}

inline Word reversed(std::span<const Symbol> w) { return Word(w.rbegin(), w.rend()); }

/// True iff haystack = u . needle . v for some u, v. The empty word is a factor of everything.
inline bool is_factor(std::span<const Symbol> needle, std::span<const Symbol> haystack) {
  if (needle.empty()) return true;
  if (needle.size() > haystack.size()) return false;
  auto it = std::search(haystack.begin(), haystack.end(),
                        std::boyer_moore_horspool_searcher(needle.begin(), needle.end()));
  return it != haystack.end();
}

/// True iff w has period p, i.e. w[i] == w[i + p] wherever both exist.
inline bool has_period(std::span<const Symbol> w, std::size_t p) {
  for (std::size_t i = 0; i + p < w.size(); ++i) {
    if (w[i] != w[i + p]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Primitivity.

struct PrimitiveRoot {
  Word root;
  std::size_t exponent = 0;
  friend bool operator==(const PrimitiveRoot&, const PrimitiveRoot&) = default;
};

/// w = root^exponent with root primitive and exponent maximal.
inline PrimitiveRoot primitive_root(std::span<const Symbol> w) {
  if (w.empty()) throw Error("primitive root of the empty word is undefined");
  const std::size_t n = w.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p == 0 && has_period(w, p)) {
      return {Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p)), n / p};
    }
  }
  throw InternalError("primitive_root: no period found");
}

/// A word is primitive iff it occurs in ww only at offsets 0 and |w|.
inline bool is_primitive(std::span<const Symbol> w) {
  if (w.empty()) throw Error("primitivity of the empty word is undefined");
  Word ww = concat(w, w);
  auto it = std::search(ww.begin() + 1, ww.end(), w.begin(), w.end());
  return static_cast<std::size_t>(it - ww.begin()) == w.size();
}

inline bool same_primitive_root(std::span<const Symbol> u, std::span<const Symbol> v) {
  return primitive_root(u).root == primitive_root(v).root;
}

// ---------------------------------------------------------------------------
// Overlaps.

/// Two words placed against each other; right[0] sits at position `shift` of left.
struct Alignment {
  Word left;
  Word right;
  std::ptrdiff_t shift = 0;
};

inline std::size_t overlap_size(std::size_t left_len, std::size_t right_len, std::ptrdiff_t shift) {
  const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, shift);
  const std::ptrdiff_t hi =
      std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(left_len), shift + static_cast<std::ptrdiff_t>(right_len));
  return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

inline std::size_t overlap_size(const Alignment& a) {
  return overlap_size(a.left.size(), a.right.size(), a.shift);
}

/// Conflict test on raw spans; see alignment_conflict.
inline bool overlap_has_conflict(std::span<const Symbol> left, std::span<const Symbol> right,
                                 std::ptrdiff_t shift) {
  const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, shift);
  const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(left.size()),
                                                     shift + static_cast<std::ptrdiff_t>(right.size()));
  for (std::ptrdiff_t i = lo; i < hi; ++i) {
    if (left[static_cast<std::size_t>(i)] != right[static_cast<std::size_t>(i - shift)]) return true;
  }
  return false;
}

/// True iff some shared position holds different letters in left and right.
inline bool alignment_conflict(const Alignment& a) { return overlap_has_conflict(a.left, a.right, a.shift); }

/// w is ell-aligned iff no p with 1 <= |p| <= |w| - ell makes w a prefix of p.w,
/// i.e. w has no period in [1, |w| - ell].
inline bool is_ell_aligned(std::span<const Symbol> w, std::size_t ell) {
  if (ell > w.size()) throw Error("is_ell_aligned: ell exceeds the word length");
  for (std::size_t p = 1; p + ell <= w.size(); ++p) {
    if (has_period(w, p)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Constructions.

struct AlphaBeta {
  Word alpha;
  Word beta;
};

/// alpha = u^(2+k) v^2, beta = u^2 v^(2+l) with k|u| = l|v| = lcm(|u|, |v|).
/// Both are primitive and of equal length whenever u and v have distinct roots.
inline AlphaBeta build_two_sided_alpha_beta(std::span<const Symbol> u, std::span<const Symbol> v) {
  if (u.empty() || v.empty()) throw Error("build_two_sided_alpha_beta: u and v must be non-empty");
  if (same_primitive_root(u, v)) throw Error("build_two_sided_alpha_beta: u and v share a primitive root");
  const std::size_t l = std::lcm(u.size(), v.size());
  const std::size_t k_u = l / u.size();
  const std::size_t k_v = l / v.size();
  return {concat(power(u, 2 + k_u), power(v, 2)), concat(power(u, 2), power(v, 2 + k_v))};
}

/// gamma = a^r b^r a^r b^r a^2r b^2r.
inline Word build_gamma_two_sided(std::span<const Symbol> alpha, std::span<const Symbol> beta, std::size_t r) {
  if (r < 2) throw Error("build_gamma_two_sided: r must be at least 2");
  if (alpha.size() != beta.size()) throw Error("build_gamma_two_sided: |alpha| != |beta|");
  Word ar = power(alpha, r);
  Word br = power(beta, r);
  return concat(ar, br, ar, br, power(alpha, 2 * r), power(beta, 2 * r));
}

/// Smallest r >= 2 with r|alpha| > M + |p| + |s|.
inline std::size_t choose_r(std::span<const Symbol> alpha, std::size_t max_piece, std::span<const Symbol> p,
                            std::span<const Symbol> s) {
  if (alpha.empty()) throw Error("choose_r: alpha must be non-empty");
  const std::size_t need = max_piece + p.size() + s.size();
  const std::size_t r = need / alpha.size() + 1;
  return std::max<std::size_t>(2, r);
}

/// gamma_z = u^(2+k) v^2 for the least k with |gamma_z| > max_base.
inline Word build_gamma_z(std::span<const Symbol> u, std::span<const Symbol> v, std::size_t max_base) {
  if (u.empty() || v.empty()) throw Error("build_gamma_z: u and v must be non-empty");
  if (same_primitive_root(u, v)) throw Error("build_gamma_z: u and v share a primitive root");
  const std::size_t base_len = 2 * u.size() + 2 * v.size();
  std::size_t k = 0;
  if (base_len <= max_base) k = (max_base - base_len) / u.size() + 1;
  return concat(power(u, 2 + k), power(v, 2));
}

}  // namespace notcontains
