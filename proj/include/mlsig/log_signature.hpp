#pragma once

// Logarithmic signatures: ordered blocks A_1..A_s of group elements such
// that every g in G is uniquely a product a_1 * a_2 * ... * a_s with a_i in
// A_i. Products follow compose(): a_s acts first on points.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "mlsig/bigint.hpp"
#include "mlsig/errors.hpp"
#include "mlsig/permutation.hpp"
#include "mlsig/stabilizer_chain.hpp"

namespace mlsig {

enum class Provenance { chain, refined, solvable, cyclic, manual };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::chain: return "chain";
    case Provenance::refined: return "refined";
    case Provenance::solvable: return "solvable";
    case Provenance::cyclic: return "cyclic";
    case Provenance::manual: return "manual";
  }
  return "manual";
}

inline Provenance provenance_from_string(const std::string& s) {
  if (s == "chain") return Provenance::chain;
  if (s == "refined") return Provenance::refined;
  if (s == "solvable") return Provenance::solvable;
  if (s == "cyclic") return Provenance::cyclic;
  if (s == "manual") return Provenance::manual;
  throw ParseError("unknown provenance tag '" + s + "'");
}

/// Ties a block to the stabilizer-chain level it is a transversal of. A level
/// refined into cyclic sets is spread over `parts` consecutive blocks, and
/// the product set of those blocks is the level transversal.
struct BlockAnnotation {
  std::size_t level = 0;  // 0-based chain level
  Point base_point = 0;   // 0-based
  std::size_t part = 0;   // 0-based index among the level's blocks
  std::size_t parts = 1;
  bool refinement_failed = false;

  friend bool operator==(const BlockAnnotation&, const BlockAnnotation&) = default;
};

class LogSignature {
 public:
  using Block = std::vector<Permutation>;

  LogSignature() = default;

  /// Validates that blocks are nonempty, entries share `degree`, and entries
  /// within a block are pairwise distinct.
  LogSignature(std::size_t degree, std::vector<Block> blocks, Provenance provenance = Provenance::manual,
               std::vector<BlockAnnotation> annotations = {}, std::optional<std::string> group = std::nullopt)
      : degree_(degree),
        blocks_(std::move(blocks)),
        provenance_(provenance),
        annotations_(std::move(annotations)),
        group_(std::move(group)) {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (blocks_[i].empty()) throw DomainError("block " + std::to_string(i + 1) + " is empty");
      std::unordered_set<Permutation, PermutationHash> seen;
      for (std::size_t j = 0; j < blocks_[i].size(); ++j) {
        if (blocks_[i][j].degree() != degree_)
          throw DomainError("block " + std::to_string(i + 1) + " entry " + std::to_string(j + 1) + " has degree " +
                            std::to_string(blocks_[i][j].degree()) + ", expected " + std::to_string(degree_));
        if (!seen.insert(blocks_[i][j]).second)
          throw DomainError("block " + std::to_string(i + 1) + " repeats entry " + format_cycles(blocks_[i][j]));
      }
    }
    if (!annotations_.empty() && annotations_.size() != blocks_.size())
      throw DomainError("annotation count does not match block count");
  }

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const Block& block(std::size_t i) const { return blocks_.at(i); }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  Provenance provenance() const noexcept { return provenance_; }
  const std::vector<BlockAnnotation>& annotations() const noexcept { return annotations_; }
  bool has_level_annotations() const noexcept { return !annotations_.empty() || blocks_.empty(); }
  const std::optional<std::string>& group() const noexcept { return group_; }
  void set_group(std::optional<std::string> name) { group_ = std::move(name); }

  std::vector<std::size_t> block_sizes() const {
    std::vector<std::size_t> r;
    for (const auto& b : blocks_) r.push_back(b.size());
    return r;
  }

  BigInt size_product() const {
    BigInt p = 1;
    for (const auto& b : blocks_) p *= b.size();
    return p;
  }

  friend bool operator==(const LogSignature&, const LogSignature&) = default;

 private:
  std::size_t degree_ = 0;
  std::vector<Block> blocks_;
  Provenance provenance_ = Provenance::manual;
  std::vector<BlockAnnotation> annotations_;
  std::optional<std::string> group_;
};

/// Digits j_1..j_s, 0-based: digit i selects entry j_i of block i.
struct FactorizationIndex {
  std::vector<std::size_t> digits;

  friend bool operator==(const FactorizationIndex&, const FactorizationIndex&) = default;
};

inline std::size_t ls_length(const LogSignature& ls) {
  std::size_t total = 0;
  for (const auto& b : ls.blocks()) total += b.size();
  return total;
}

/// Sum of a_j * p_j over |G| = prod p_j^a_j; no LS of G is shorter.
inline BigInt minimal_length(const PrimeFactorization& f) {
  BigInt total = 0;
  for (const auto& pp : f.factors) total += pp.prime * pp.exponent;
  return total;
}

inline bool is_minimal(const LogSignature& ls, const PrimeFactorization& f) {
  if (ls.size_product() != f.value)
    throw DomainError("block sizes multiply to " + to_string(ls.size_product()) + ", not " + to_string(f.value));
  return BigInt(ls_length(ls)) == minimal_length(f);
}

// ---------------------------------------------------------------------------
// Verification

enum class VerificationMethod { exhaustive, structural };

inline std::string to_string(VerificationMethod m) {
  return m == VerificationMethod::exhaustive ? "exhaustive" : "structural";
}

struct CollisionWitness {
  FactorizationIndex first;
  FactorizationIndex second;
};

struct VerificationReport {
  bool passed = false;
  VerificationMethod method = VerificationMethod::exhaustive;
  std::uint64_t products_checked = 0;
  std::optional<CollisionWitness> collision;
  /// Set on failures other than collisions (size or coverage deficits,
  /// membership violations).
  std::string deficit;
};

inline constexpr std::uint64_t default_verification_budget = 10'000'000;

namespace detail {

// Open-addressing set of image arrays. Entries are numbered densely in
// insertion order and copied into a flat arena of `Cell`s (uint8_t when
// degree <= 256). Memory is count * degree * sizeof(Cell) for the arena
// plus 8 bytes per hash slot, with at least two slots per entry.
template <typename Cell>
class ProductSet {
 public:
  ProductSet(std::size_t degree, std::uint64_t expected) : degree_(degree) {
    std::uint64_t cap = 16;
    while (cap < expected * 2) cap <<= 1;
    slots_.assign(cap, 0);
    arena_.reserve(static_cast<std::size_t>(expected) * degree);
  }

  std::uint64_t size() const noexcept { return count_; }

  /// Inserts the images as entry size(); returns the number of an equal
  /// earlier entry instead if there is one.
  std::optional<std::uint64_t> insert(std::span<const Point> images) {
    const std::uint64_t mask = slots_.size() - 1;
    std::uint64_t h = hash(images) & mask;
    while (slots_[h] != 0) {
      if (equal(slots_[h] - 1, images)) return slots_[h] - 1;
      h = (h + 1) & mask;
    }
    slots_[h] = ++count_;
    for (Point x : images) arena_.push_back(static_cast<Cell>(x));
    return std::nullopt;
  }

 private:
  static std::uint64_t hash(std::span<const Point> images) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (Point x : images) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return h;
  }

  bool equal(std::uint64_t entry, std::span<const Point> images) const {
    const std::size_t at = static_cast<std::size_t>(entry) * degree_;
    for (std::size_t x = 0; x < degree_; ++x)
      if (arena_[at + x] != images[x]) return false;
    return true;
  }

  std::size_t degree_;
  std::uint64_t count_ = 0;
  std::vector<std::uint64_t> slots_;
  std::vector<Cell> arena_;
};

/// Mixed radix, last block least significant.
inline FactorizationIndex digits_of_ordinal(std::uint64_t ordinal, const std::vector<std::size_t>& radices) {
  FactorizationIndex out;
  out.digits.assign(radices.size(), 0);
  for (std::size_t i = radices.size(); i-- > 0;) {
    out.digits[i] = static_cast<std::size_t>(ordinal % radices[i]);
    ordinal /= radices[i];
  }
  return out;
}

template <typename Cell>
VerificationReport enumerate_products(const LogSignature& ls, std::uint64_t total) {
  VerificationReport report;
  report.method = VerificationMethod::exhaustive;
  const std::size_t s = ls.block_count();
  const std::size_t n = ls.degree();
  const auto radices = ls.block_sizes();
  ProductSet<Cell> seen(n, total);

  if (s == 0) {
    seen.insert(Permutation(n).images());
    report.products_checked = 1;
    report.passed = true;
    return report;
  }

  // prefix[i] = a_1 * ... * a_i for the current digits; prefix[0] = identity.
  std::vector<Permutation> prefix(s + 1, Permutation(n));
  std::vector<std::size_t> digits(s, 0);
  for (std::size_t i = 0; i < s; ++i) compose_into(prefix[i], ls.block(i)[0], prefix[i + 1]);

  std::uint64_t ordinal = 0;
  while (true) {
    if (auto earlier = seen.insert(prefix[s].images())) {
      report.passed = false;
      report.products_checked = ordinal + 1;
      report.collision = CollisionWitness{digits_of_ordinal(*earlier, radices), digits_of_ordinal(ordinal, radices)};
      return report;
    }
    ++ordinal;
    // Advance the odometer; the last block varies fastest.
    std::size_t i = s;
    while (i > 0) {
      --i;
      if (++digits[i] < radices[i]) break;
      digits[i] = 0;
      if (i == 0) {
        report.passed = true;
        report.products_checked = ordinal;
        return report;
      }
    }
    for (std::size_t k = i; k < s; ++k) compose_into(prefix[k], ls.block(k)[digits[k]], prefix[k + 1]);
  }
}

}  // namespace detail

/// Direct check: enumerates all prod r_i products and passes iff
/// they are pairwise distinct; with prod r_i = |G| and every entry in G this
/// is exactly the unique-factorization property.
///
/// The seen-set stores every product: about degree + 16 bytes per product
/// for degree <= 256, so the default budget of 10^7 products at degree 24
/// needs roughly 500 MB. The index space splits by the first block's digit if the
/// enumeration is ever farmed out to workers; the verdict does not depend on
/// the split.
inline VerificationReport verify_exhaustive(const LogSignature& ls, const StabilizerChain& chain,
                                            std::uint64_t budget = default_verification_budget) {
  if (ls.degree() != chain.degree())
    throw DomainError("LS degree " + std::to_string(ls.degree()) + " differs from group degree " +
                      std::to_string(chain.degree()));
  VerificationReport report;
  report.method = VerificationMethod::exhaustive;
  const BigInt product = ls.size_product();
  const BigInt order = chain.order();
  if (product != order) {
    report.passed = false;
    report.deficit = "block sizes multiply to " + to_string(product) + " but |G| = " + to_string(order);
    return report;
  }
  if (product > budget)
    throw BudgetExceeded("exhaustive verification of " + to_string(product) + " products exceeds the budget of " +
                         std::to_string(budget));
  for (std::size_t i = 0; i < ls.block_count(); ++i)
    for (std::size_t j = 0; j < ls.block(i).size(); ++j)
      if (!contains(chain, ls.block(i)[j]))
        throw NotMember("block " + std::to_string(i + 1) + " entry " + std::to_string(j + 1) + " (" +
                        format_cycles(ls.block(i)[j]) + ") is not in the group");
  const auto total = static_cast<std::uint64_t>(product);
  if (ls.degree() <= 256) return detail::enumerate_products<std::uint8_t>(ls, total);
  return detail::enumerate_products<Point>(ls, total);
}

/// Expands the product set B_first * ... * B_{first+count-1} in enumeration
/// order (last block fastest).
inline std::vector<Permutation> expand_products(const std::vector<std::vector<Permutation>>& blocks, std::size_t first,
                                                std::size_t count, std::size_t degree) {
  std::vector<Permutation> acc{Permutation(degree)};
  for (std::size_t b = first; b < first + count; ++b) {
    std::vector<Permutation> next;
    next.reserve(acc.size() * blocks[b].size());
    for (const auto& prefix : acc)
      for (const auto& e : blocks[b]) next.push_back(compose(prefix, e));
    acc = std::move(next);
  }
  return acc;
}

/// Level-by-level check for transversal-structured LSs. Each chain level must
/// be covered, in order, by a run of annotated blocks whose entries lie in
/// the level group and whose product set maps the level base point onto the
/// level orbit bijectively. For such LSs that is equivalent to unique
/// factorization, at cost O(length * degree) plus the expansion of refined
/// levels.
inline VerificationReport verify_structural(const LogSignature& ls, const StabilizerChain& chain) {
  if (!ls.has_level_annotations())
    throw DomainError("structural verification needs per-block level annotations (chain or refined provenance)");
  if (ls.degree() != chain.degree())
    throw DomainError("LS degree " + std::to_string(ls.degree()) + " differs from group degree " +
                      std::to_string(chain.degree()));
  VerificationReport report;
  report.method = VerificationMethod::structural;
  auto fail = [&](std::string why) {
    report.passed = false;
    report.deficit = std::move(why);
    return report;
  };
  const auto& anns = ls.annotations();
  const auto& levels = chain.levels();
  std::size_t b = 0;
  for (std::size_t lv = 0; lv < levels.size(); ++lv) {
    const auto& level = levels[lv];
    if (b >= anns.size()) return fail("chain level " + std::to_string(lv + 1) + " is not covered by any block");
    const auto& first = anns[b];
    if (first.level != lv || first.part != 0)
      return fail("block " + std::to_string(b + 1) + " should start chain level " + std::to_string(lv + 1));
    if (first.base_point != level.base)
      return fail("block " + std::to_string(b + 1) + " is annotated with base point " +
                  std::to_string(first.base_point + 1) + " but the chain uses " + std::to_string(level.base + 1));
    const std::size_t parts = first.parts;
    if (parts == 0 || b + parts > anns.size()) return fail("level " + std::to_string(lv + 1) + " has a truncated block run");
    for (std::size_t p = 0; p < parts; ++p) {
      const auto& a = anns[b + p];
      if (a.level != lv || a.part != p || a.parts != parts || a.base_point != level.base)
        return fail("inconsistent annotations in block " + std::to_string(b + p + 1));
      for (std::size_t j = 0; j < ls.block(b + p).size(); ++j) {
        const auto& e = ls.block(b + p)[j];
        auto r = sift(levels, e, lv);
        if (!(r.level == levels.size() && r.residue.is_identity()))
          return fail("block " + std::to_string(b + p + 1) + " entry " + std::to_string(j + 1) + " (" + format_cycles(e) +
                      ") is not in the level-" + std::to_string(lv + 1) + " group");
      }
    }
    auto products = expand_products(ls.blocks(), b, parts, ls.degree());
    report.products_checked += products.size();
    if (products.size() != level.orbit_size())
      return fail("level " + std::to_string(lv + 1) + " blocks give " + std::to_string(products.size()) +
                  " products for an orbit of size " + std::to_string(level.orbit_size()));
    std::vector<bool> hit(chain.degree(), false);
    for (const auto& h : products) {
      Point x = h(level.base);
      if (hit[x])
        return fail("level " + std::to_string(lv + 1) + " maps base point " + std::to_string(level.base + 1) +
                    " to " + std::to_string(x + 1) + " twice");
      hit[x] = true;
    }
    b += parts;
  }
  if (b != ls.block_count()) return fail(std::to_string(ls.block_count() - b) + " blocks beyond the last chain level");
  report.passed = true;
  return report;
}

}  // namespace mlsig
