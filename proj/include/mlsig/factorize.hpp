#pragma once

// Recovering the digits j_1..j_s with g = A_1[j_1] * ... * A_s[j_s].

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlsig/bigint.hpp"
#include "mlsig/errors.hpp"
#include "mlsig/log_signature.hpp"
#include "mlsig/permutation.hpp"

namespace mlsig {

inline Permutation reconstruct(const LogSignature& ls, const FactorizationIndex& index) {
  if (index.digits.size() != ls.block_count())
    throw DomainError("expected " + std::to_string(ls.block_count()) + " digits, got " +
                      std::to_string(index.digits.size()));
  Permutation g(ls.degree());
  Permutation tmp;
  for (std::size_t i = 0; i < ls.block_count(); ++i) {
    if (index.digits[i] >= ls.block(i).size())
      throw DomainError("digit " + std::to_string(index.digits[i]) + " out of range for block " + std::to_string(i + 1) +
                        " of size " + std::to_string(ls.block(i).size()));
    compose_into(g, ls.block(i)[index.digits[i]], tmp);
    std::swap(g, tmp);
  }
  return g;
}

/// Lookup tables for LSs with level annotations (chain, refined, or
/// randomized chain LSs). For each level, the image of the level base point
/// under the product of the level's blocks determines the level's digits.
class TameIndexer {
 public:
  explicit TameIndexer(const LogSignature& ls) : ls_(ls) {
    if (!ls.has_level_annotations())
      throw DomainError("tame factorization needs per-block level annotations");
    const auto& anns = ls.annotations();
    for (std::size_t b = 0; b < ls.block_count();) {
      const auto& a = anns[b];
      if (a.part != 0 || a.parts == 0 || b + a.parts > ls.block_count())
        throw DomainError("malformed level annotations at block " + std::to_string(b + 1));
      LevelTable table;
      table.base = a.base_point;
      table.first_block = b;
      table.block_count = a.parts;
      table.slot.assign(ls.degree(), -1);
      // Odometer over the level's blocks, last block fastest.
      std::vector<std::size_t> digits(a.parts, 0);
      for (const auto& h : expand_products(ls.blocks(), b, a.parts, ls.degree())) {
        Point x = h(a.base_point);
        if (table.slot[x] >= 0)
          throw DomainError("blocks of level " + std::to_string(a.level + 1) + " map the base point to " +
                            std::to_string(x + 1) + " twice");
        table.slot[x] = static_cast<std::int64_t>(table.digits.size());
        table.digits.push_back(digits);
        table.inverses.push_back(inverse(h));
        for (std::size_t k = a.parts; k-- > 0;) {
          if (++digits[k] < ls.block(b + k).size()) break;
          digits[k] = 0;
        }
      }
      levels_.push_back(std::move(table));
      b += a.parts;
    }
  }

  const LogSignature& ls() const noexcept { return ls_; }

  /// Digits of g, one level at a time: read the image of the level base
  /// point, look up the digits, strip the level factor from the left.
  /// Throws NotMember if g is not generated by the LS.
  FactorizationIndex factorize(Permutation g) const {
    check_same_degree(Permutation(ls_.degree()), g);
    FactorizationIndex out;
    out.digits.assign(ls_.block_count(), 0);
    Permutation tmp;
    for (const auto& t : levels_) {
      std::int64_t slot = t.slot[g(t.base)];
      if (slot < 0) throw NotMember("element is not factorizable by this LS");
      const auto& d = t.digits[static_cast<std::size_t>(slot)];
      for (std::size_t k = 0; k < t.block_count; ++k) out.digits[t.first_block + k] = d[k];
      compose_into(t.inverses[static_cast<std::size_t>(slot)], g, tmp);
      std::swap(g, tmp);
    }
    if (!g.is_identity()) throw NotMember("element is not factorizable by this LS (non-trivial residue)");
    return out;
  }

 private:
  struct LevelTable {
    Point base = 0;
    std::size_t first_block = 0;
    std::size_t block_count = 0;
    std::vector<std::int64_t> slot;  // base-point image -> row, or -1
    std::vector<std::vector<std::size_t>> digits;
    std::vector<Permutation> inverses;  // inverse of the level product
  };

  LogSignature ls_;
  std::vector<LevelTable> levels_;
};

inline FactorizationIndex factorize_tame(const Permutation& g, const TameIndexer& indexer) {
  return indexer.factorize(g);
}

/// Meet in the middle: blocks are split where the two halves' product
/// counts are most balanced, the right half's products are tabulated, and
/// for each left product l the table is probed with l^-1 * g.
inline FactorizationIndex factorize_generic(const Permutation& g, const LogSignature& ls,
                                            std::uint64_t budget = default_verification_budget) {
  check_same_degree(Permutation(ls.degree()), g);
  const std::size_t s = ls.block_count();
  if (ls.size_product() > budget)
    throw BudgetExceeded("generic factorization over " + to_string(ls.size_product()) +
                         " products exceeds the budget of " + std::to_string(budget));
  const auto total = static_cast<std::uint64_t>(ls.size_product());

  std::size_t split = 0;
  std::uint64_t best = total;
  std::uint64_t left = 1;
  for (std::size_t k = 0; k <= s; ++k) {
    if (k > 0) left *= ls.block(k - 1).size();
    std::uint64_t right = total / left;
    std::uint64_t worst = std::max(left, right);
    if (worst < best) {
      best = worst;
      split = k;
    }
  }

  auto radices = ls.block_sizes();
  std::vector<std::size_t> left_radices(radices.begin(), radices.begin() + static_cast<std::ptrdiff_t>(split));
  std::vector<std::size_t> right_radices(radices.begin() + static_cast<std::ptrdiff_t>(split), radices.end());

  std::unordered_map<Permutation, std::uint64_t, PermutationHash> right_products;
  {
    auto products = expand_products(ls.blocks(), split, s - split, ls.degree());
    right_products.reserve(products.size());
    for (std::uint64_t k = 0; k < products.size(); ++k) right_products.emplace(std::move(products[k]), k);
  }
  auto left_products = expand_products(ls.blocks(), 0, split, ls.degree());
  for (std::uint64_t k = 0; k < left_products.size(); ++k) {
    auto it = right_products.find(compose(inverse(left_products[k]), g));
    if (it == right_products.end()) continue;
    FactorizationIndex out;
    auto l = detail::digits_of_ordinal(k, left_radices);
    auto r = detail::digits_of_ordinal(it->second, right_radices);
    out.digits = l.digits;
    out.digits.insert(out.digits.end(), r.digits.begin(), r.digits.end());
    return out;
  }
  throw NotMember("element " + format_cycles(g) + " has no factorization over this LS");
}

}  // namespace mlsig
