#pragma once

// Permutations of {1..n}. Points are 1-based in every textual interface
// (cycle notation, files) and 0-based in memory.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlsig/bigint.hpp"
#include "mlsig/errors.hpp"

namespace mlsig {

/// 0-based point index.
using Point = std::uint32_t;

class Permutation {
 public:
  /// The identity on zero points.
  Permutation() = default;

  /// The identity on `degree` points.
  explicit Permutation(std::size_t degree) : images_(degree) {
    std::iota(images_.begin(), images_.end(), Point{0});
  }

  /// Builds from 0-based images; throws DomainError unless bijective.
  static Permutation from_images(std::vector<Point> images) {
    std::vector<bool> hit(images.size(), false);
    for (Point x : images) {
      if (x >= images.size() || hit[x])
        throw DomainError("image array is not a bijection on {1.." + std::to_string(images.size()) + "}");
      hit[x] = true;
    }
    Permutation p;
    p.images_ = std::move(images);
    return p;
  }

  /// Builds from 1-based images, as they appear in files.
  static Permutation from_one_based(std::span<const std::int64_t> images) {
    std::vector<Point> zero(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (images[i] < 1 || static_cast<std::uint64_t>(images[i]) > images.size())
        throw DomainError("image " + std::to_string(images[i]) + " out of range 1.." + std::to_string(images.size()));
      zero[i] = static_cast<Point>(images[i] - 1);
    }
    return from_images(std::move(zero));
  }

  std::size_t degree() const noexcept { return images_.size(); }
  Point operator()(Point x) const noexcept { return images_[x]; }
  std::span<const Point> images() const noexcept { return images_; }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  /// Smallest moved point, or degree() for the identity.
  Point smallest_moved_point() const noexcept {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return static_cast<Point>(i);
    return static_cast<Point>(images_.size());
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  friend Permutation compose(const Permutation& g, const Permutation& h);
  friend Permutation inverse(const Permutation& g);
  friend void compose_into(const Permutation& g, const Permutation& h, Permutation& out);

  std::vector<Point> images_;
};

inline void check_same_degree(const Permutation& g, const Permutation& h) {
  if (g.degree() != h.degree())
    throw DomainError("degree mismatch: " + std::to_string(g.degree()) + " vs " + std::to_string(h.degree()));
}

/// (g*h)(x) = g(h(x)): the right factor acts first.
inline Permutation compose(const Permutation& g, const Permutation& h) {
  check_same_degree(g, h);
  Permutation out;
  out.images_.resize(g.degree());
  for (std::size_t x = 0; x < g.degree(); ++x) out.images_[x] = g.images_[h.images_[x]];
  return out;
}

/// compose() writing into an existing buffer; `out` must not alias g or h.
inline void compose_into(const Permutation& g, const Permutation& h, Permutation& out) {
  check_same_degree(g, h);
  out.images_.resize(g.degree());
  for (std::size_t x = 0; x < g.degree(); ++x) out.images_[x] = g.images_[h.images_[x]];
}

inline Permutation operator*(const Permutation& g, const Permutation& h) { return compose(g, h); }

inline Permutation inverse(const Permutation& g) {
  Permutation out;
  out.images_.resize(g.degree());
  for (std::size_t x = 0; x < g.degree(); ++x) out.images_[g.images_[x]] = static_cast<Point>(x);
  return out;
}

/// g^e for e >= 0 by square-and-multiply.
inline Permutation power(const Permutation& g, std::uint64_t e) {
  Permutation result(g.degree());
  Permutation base = g;
  while (e > 0) {
    if (e & 1) result = compose(result, base);
    base = compose(base, base);
    e >>= 1;
  }
  return result;
}

/// Disjoint cycles of length >= 2 in canonical form: each cycle starts at its
/// least point, cycles sorted by least point.
inline std::vector<std::vector<Point>> cycles(const Permutation& g) {
  std::vector<std::vector<Point>> out;
  std::vector<bool> seen(g.degree(), false);
  for (Point x = 0; x < g.degree(); ++x) {
    if (seen[x] || g(x) == x) continue;
    std::vector<Point> cyc;
    for (Point y = x; !seen[y]; y = g(y)) {
      seen[y] = true;
      cyc.push_back(y);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

/// Length of the cycle of g through x.
inline std::size_t cycle_length(const Permutation& g, Point x) {
  std::size_t len = 1;
  for (Point y = g(x); y != x; y = g(y)) ++len;
  return len;
}

/// Least t >= 1 with g^t = identity (lcm of the cycle lengths).
inline BigInt element_order(const Permutation& g) {
  BigInt order = 1;
  for (const auto& c : cycles(g)) order = boost::multiprecision::lcm(order, BigInt(c.size()));
  return order;
}

inline std::string format_cycles(const Permutation& g) {
  auto cs = cycles(g);
  if (cs.empty()) return "()";
  std::string out;
  for (const auto& c : cs) {
    out += '(';
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(c[i] + 1);
    }
    out += ')';
  }
  return out;
}

/// Parses disjoint-cycle notation such as "(1,4,3,8)(2,5,6,9)" with 1-based
/// points; "()" is the identity. Whitespace is ignored.
inline Permutation parse_cycles(std::string_view text, std::size_t degree) {
  std::vector<Point> images(degree);
  std::iota(images.begin(), images.end(), Point{0});
  std::vector<bool> used(degree, false);
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("cycle notation '" + std::string(text) + "', column " + std::to_string(pos + 1) + ": " + what);
  };
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r')) ++pos;
  };
  skip_ws();
  if (pos == text.size()) throw fail("empty input");
  while (true) {
    skip_ws();
    if (pos == text.size()) break;
    if (text[pos] != '(') throw fail("expected '('");
    ++pos;
    std::vector<Point> cyc;
    skip_ws();
    if (pos < text.size() && text[pos] == ')') {
      ++pos;
      continue;
    }
    while (true) {
      skip_ws();
      std::size_t start = pos;
      std::uint64_t value = 0;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        value = value * 10 + static_cast<std::uint64_t>(text[pos] - '0');
        if (value > degree + 1) value = degree + 1;
        ++pos;
      }
      if (pos == start) throw fail("expected a point");
      if (value < 1 || value > degree) throw fail("point " + std::string(text.substr(start, pos - start)) + " outside 1.." + std::to_string(degree));
      Point p = static_cast<Point>(value - 1);
      if (used[p]) throw fail("point " + std::to_string(value) + " repeated");
      used[p] = true;
      cyc.push_back(p);
      skip_ws();
      if (pos == text.size()) throw fail("unterminated cycle");
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      throw fail("expected ',' or ')'");
    }
    for (std::size_t i = 0; i < cyc.size(); ++i) images[cyc[i]] = cyc[(i + 1) % cyc.size()];
  }
  return Permutation::from_images(std::move(images));
}

inline std::ostream& operator<<(std::ostream& os, const Permutation& g) { return os << format_cycles(g); }

struct PermutationHash {
  std::size_t operator()(const Permutation& g) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Point x : g.images()) {
      h ^= x;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Generators of a permutation group; list order is significant.
struct GeneratorSet {
  std::size_t degree = 0;
  std::vector<Permutation> gens;
  std::string name;
};

}  // namespace mlsig
