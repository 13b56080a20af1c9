#pragma once

// Constructions of logarithmic signatures:
//   * chain_ls        transversals of a stabilizer chain
//   * mls_cyclic      minimal LS of a cyclic set {x^0, ..., x^(s-1)}
//   * mls_solvable    minimal LS from a prime-index composition series
//   * refine_ls       replaces composite transversal blocks by products of
//                     cyclic sets that move the level base point sharply
//                     transitively
//   * build_mls       dispatch between the above

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlsig/bigint.hpp"
#include "mlsig/errors.hpp"
#include "mlsig/log_signature.hpp"
#include "mlsig/permutation.hpp"
#include "mlsig/random.hpp"
#include "mlsig/stabilizer_chain.hpp"

namespace mlsig {

/// The cyclic set {x^0, x^1, ..., x^(size-1)}.
struct CyclicSetSpec {
  Permutation generator;
  std::size_t size = 1;

  std::vector<Permutation> elements() const {
    std::vector<Permutation> out{Permutation(generator.degree())};
    for (std::size_t i = 1; i < size; ++i) out.push_back(compose(generator, out.back()));
    return out;
  }
};

/// Cyclic sets A_1..A_m whose product A_1 * ... * A_m should map the base
/// point of a chain level onto its orbit bijectively.
struct ProductDecomposition {
  std::vector<CyclicSetSpec> factors;
  std::size_t level = 0;
  Point base_point = 0;
  std::size_t orbit_size = 0;

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> s;
    for (const auto& f : factors) s.push_back(f.size);
    return s;
  }
};

struct CompositionStep {
  /// G_i, a normal subgroup of the previous term with prime index.
  StabilizerChain subgroup;
  std::size_t index = 0;
  /// t_i in G_(i-1) whose coset generates G_(i-1) / G_i.
  Permutation witness;
};

/// G = G_0 > G_1 > ... > G_m = 1 with prime indices, outermost step first.
struct CompositionSeries {
  StabilizerChain group;
  std::vector<CompositionStep> steps;

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> q;
    for (const auto& s : steps) q.push_back(s.index);
    return q;
  }
};

namespace detail {

inline std::vector<std::size_t> ascending_primes(std::size_t n) {
  std::vector<std::size_t> out;
  for (const auto& p : factor_integer(BigInt(n)).prime_multiset()) out.push_back(static_cast<std::size_t>(p));
  return out;
}

}  // namespace detail

/// Minimal LS of the cyclic set {x^i : 0 <= i < s}. With the prime factors
/// q_1 <= ... <= q_k of s and weights w_1 = 1, w_(t+1) = w_t * q_t, block t
/// is [x^(j * w_t) : 0 <= j < q_t]. Every 0 <= i < s is uniquely sum j_t w_t,
/// so the products cover the set once each, and the largest represented
/// exponent is s - 1.
inline LogSignature mls_cyclic(const CyclicSetSpec& spec) {
  if (spec.size < 1) throw DomainError("cyclic set size must be at least 1");
  if (BigInt(spec.size) > element_order(spec.generator))
    throw DomainError("cyclic set size " + std::to_string(spec.size) + " exceeds the generator order " +
                      to_string(element_order(spec.generator)));
  const std::size_t n = spec.generator.degree();
  std::vector<LogSignature::Block> blocks;
  Permutation step = spec.generator;  // x^(w_t)
  for (std::size_t q : detail::ascending_primes(spec.size)) {
    LogSignature::Block block{Permutation(n)};
    for (std::size_t j = 1; j < q; ++j) block.push_back(compose(step, block.back()));
    step = compose(step, block.back());
    blocks.push_back(std::move(block));
  }
  return LogSignature(n, std::move(blocks), Provenance::cyclic);
}

/// Composition series with prime indices for a solvable group: the derived
/// series, with each abelian layer split into prime steps. Within a layer
/// the primes come out ascending from the top; ties between generators go to
/// the earlier generator.
inline CompositionSeries composition_series_solvable(const StabilizerChain& group) {
  auto derived = derived_series(group);
  if (!derived.back().is_trivial()) throw DomainError("group is not solvable");
  CompositionSeries series;
  series.group = group;
  const std::size_t n = group.degree();

  for (std::size_t layer = 0; layer + 1 < derived.size(); ++layer) {
    const auto& top = derived[layer];
    // Build upward from the next derived term. Taking the largest prime
    // available each time makes the primes ascend when read top-down.
    std::vector<Permutation> gens = derived[layer + 1].generators();
    StabilizerChain below = derived[layer + 1];
    std::vector<CompositionStep> upward;
    while (below.order() < top.order()) {
      std::size_t best_prime = 0;
      Permutation best;
      for (const auto& g : top.generators()) {
        // Order of g modulo `below`; the quotient is abelian so `below` is
        // normal in every intermediate group.
        std::size_t e = 1;
        Permutation pw = g;
        while (!contains(below, pw)) {
          pw = compose(g, pw);
          ++e;
        }
        if (e == 1) continue;
        std::size_t p = detail::ascending_primes(e).back();
        if (p > best_prime) {
          best_prime = p;
          best = power(g, e / p);
        }
      }
      gens.push_back(best);
      StabilizerChain above = chain_of(n, gens);
      upward.push_back(CompositionStep{below, best_prime, best});
      below = std::move(above);
    }
    for (auto it = upward.rbegin(); it != upward.rend(); ++it) series.steps.push_back(std::move(*it));
  }
  return series;
}

/// Minimal LS of a solvable group: block i is [t_i^0, ..., t_i^(q_i - 1)]
/// for the i-th composition step, outermost first.
inline LogSignature mls_solvable(const StabilizerChain& group) {
  auto series = composition_series_solvable(group);
  std::vector<LogSignature::Block> blocks;
  for (const auto& step : series.steps)
    blocks.push_back(CyclicSetSpec{step.witness, step.index}.elements());
  return LogSignature(group.degree(), std::move(blocks), Provenance::solvable);
}

/// One block per chain level: the level transversal, identity first and the
/// other representatives by increasing image of the base point.
inline LogSignature chain_ls(const StabilizerChain& chain) {
  std::vector<LogSignature::Block> blocks;
  std::vector<BlockAnnotation> annotations;
  for (std::size_t i = 0; i < chain.depth(); ++i) {
    blocks.push_back(chain.level(i).transversal);
    annotations.push_back(BlockAnnotation{i, chain.level(i).base, 0, 1, false});
  }
  return LogSignature(chain.degree(), std::move(blocks), Provenance::chain, std::move(annotations));
}

namespace detail {

inline std::size_t orbit_size_in_level(const StabilizerChain& chain, std::size_t level, Point w) {
  const auto& gens = chain.level(level).generators;
  std::vector<bool> seen(chain.degree(), false);
  std::vector<Point> stack{w};
  seen[w] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    Point x = stack.back();
    stack.pop_back();
    for (const auto& g : gens) {
      Point y = g(x);
      if (!seen[y]) {
        seen[y] = true;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count;
}

inline bool in_level_group(const StabilizerChain& chain, std::size_t level, const Permutation& g) {
  auto r = sift(chain.levels(), g, level);
  return r.level == chain.depth() && r.residue.is_identity();
}

}  // namespace detail

/// True iff the product set A_1 * ... * A_m maps w to every point of its
/// orbit under the level group exactly once. Throws DomainError if an element
/// lies outside the level group or the set sizes do not multiply to the
/// orbit size.
inline bool sharply_transitive_sets(std::span<const std::vector<Permutation>> sets, const StabilizerChain& chain,
                                    std::size_t level, Point w) {
  if (level >= chain.depth()) throw DomainError("chain level out of range");
  if (w >= chain.degree()) throw DomainError("point out of range");
  const std::size_t orbit = detail::orbit_size_in_level(chain, level, w);
  std::size_t product = 1;
  for (const auto& s : sets) product *= s.size();
  if (product != orbit)
    throw DomainError("set sizes multiply to " + std::to_string(product) + " but the orbit has size " +
                      std::to_string(orbit));
  for (const auto& s : sets)
    for (const auto& e : s)
      if (!detail::in_level_group(chain, level, e))
        throw DomainError("element " + format_cycles(e) + " is not in the level group");
  std::vector<LogSignature::Block> blocks(sets.begin(), sets.end());
  std::vector<bool> hit(chain.degree(), false);
  for (const auto& h : expand_products(blocks, 0, blocks.size(), chain.degree())) {
    Point x = h(w);
    if (hit[x]) return false;
    hit[x] = true;
  }
  return true;
}

inline bool sharply_transitive_check(const ProductDecomposition& decomp, const StabilizerChain& chain,
                                     std::size_t level, Point w) {
  std::vector<std::vector<Permutation>> sets;
  for (const auto& f : decomp.factors) sets.push_back(f.elements());
  return sharply_transitive_sets(sets, chain, level, w);
}

inline bool sharply_transitive_check(const ProductDecomposition& decomp, const StabilizerChain& chain) {
  return sharply_transitive_check(decomp, chain, decomp.level, decomp.base_point);
}

struct RefineOptions {
  /// Bound on candidate elements scanned per factor list and, separately, on
  /// search nodes visited.
  std::uint64_t candidate_cap = 2'000'000;
  /// When set, candidates are visited in a seeded random order (every element
  /// once for groups within the cap, independent draws otherwise).
  std::optional<std::uint64_t> random_seed;
};

namespace detail {

class TransversalSearch {
 public:
  TransversalSearch(const StabilizerChain& level_group, Point w, std::vector<std::size_t> targets,
                    const RefineOptions& options)
      : group_(level_group), w_(w), targets_(std::move(targets)), options_(options) {
    for (auto q : targets_) orbit_ *= q;
  }

  /// Single element x with w on an orbit-length cycle; its powers are then
  /// split into cyclic sets by the mixed-radix weights.
  std::optional<std::vector<CyclicSetSpec>> single_cycle() {
    std::optional<Permutation> found;
    scan([&](const Permutation& x) {
      if (cycle_length(x, w_) == orbit_) {
        found = x;
        return true;
      }
      return false;
    });
    if (!found) return std::nullopt;
    std::vector<CyclicSetSpec> factors;
    Permutation step = *found;
    for (auto q : targets_) {
      factors.push_back(CyclicSetSpec{step, q});
      step = power(step, q);
    }
    return factors;
  }

  /// Depth-first search over (x_m, ..., x_1), innermost factor first. The
  /// image set of w under the chosen suffix must grow by exactly a factor of
  /// q_t at each step.
  std::optional<std::vector<CyclicSetSpec>> tuples() {
    const std::size_t m = targets_.size();
    candidates_.assign(m, {});
    for (std::size_t t = 0; t < m; ++t) {
      bool reused = false;
      for (std::size_t u = 0; u < t; ++u)
        if (targets_[u] == targets_[t]) {
          candidates_[t] = candidates_[u];
          reused = true;
          break;
        }
      if (reused) continue;
      const BigInt q(targets_[t]);
      scan([&](const Permutation& x) {
        if (element_order(x) % q == 0) candidates_[t].push_back(x);
        return false;
      });
    }
    chosen_.assign(m, Permutation());
    std::vector<Point> image{w_};
    std::vector<bool> hit(group_.degree(), false);
    hit[w_] = true;
    nodes_ = 0;
    if (!descend(m, image, hit)) return std::nullopt;
    std::vector<CyclicSetSpec> factors;
    for (std::size_t t = 0; t < m; ++t) factors.push_back(CyclicSetSpec{chosen_[t], targets_[t]});
    return factors;
  }

 private:
  template <typename Visit>
  void scan(Visit visit) {
    if (options_.random_seed) {
      Rng rng(*options_.random_seed);
      const BigInt order = group_.order();
      if (order > options_.candidate_cap) {
        for (std::uint64_t k = 0; k < options_.candidate_cap; ++k)
          if (visit(random_element(group_, rng))) return;
        return;
      }
      // Small enough to visit every element once, in shuffled index order.
      std::vector<std::uint64_t> order_idx(static_cast<std::size_t>(order));
      for (std::size_t k = 0; k < order_idx.size(); ++k) order_idx[k] = k;
      rng.shuffle(std::span<std::uint64_t>(order_idx));
      for (auto k : order_idx)
        if (visit(element_at(group_, k))) return;
      return;
    }
    std::uint64_t k = 0;
    for (ElementEnumerator it(group_); !it.done() && k < options_.candidate_cap; it.advance(), ++k)
      if (visit(it.current())) return;
  }

  // Chooses factor t-1 (0-based) given the image set of the factors after it.
  bool descend(std::size_t t, const std::vector<Point>& image, std::vector<bool>& hit) {
    if (t == 0) return image.size() == orbit_;
    const std::size_t idx = t - 1;
    const std::size_t q = targets_[idx];
    for (const auto& x : candidates_[idx]) {
      if (++nodes_ > options_.candidate_cap) return false;
      std::vector<Point> grown = image;
      std::vector<Point> layer = image;
      bool ok = true;
      for (std::size_t a = 1; a < q && ok; ++a) {
        for (auto& p : layer) {
          p = x(p);
          if (hit[p]) {
            ok = false;
            break;
          }
          hit[p] = true;
          grown.push_back(p);
        }
      }
      if (ok) {
        chosen_[idx] = x;
        if (descend(idx, grown, hit)) return true;
      }
      for (std::size_t k = image.size(); k < grown.size(); ++k) hit[grown[k]] = false;
    }
    return false;
  }

  const StabilizerChain& group_;
  Point w_;
  std::vector<std::size_t> targets_;
  RefineOptions options_;
  std::size_t orbit_ = 1;
  std::vector<std::vector<Permutation>> candidates_;
  std::vector<Permutation> chosen_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Searches the level-`level` group for cyclic sets of sizes `targets`
/// (in that order, outermost first) whose product moves the level base
/// point sharply transitively over the level orbit. Tries a single element
/// with an orbit-length cycle first, then a depth-first tuple search over
/// candidates in element_at order (filtered to orders divisible by the set
/// size). Returns nullopt when nothing is found within the caps.
inline std::optional<ProductDecomposition> refine_block(const StabilizerChain& chain, std::size_t level,
                                                        std::vector<std::size_t> targets,
                                                        const RefineOptions& options = {}) {
  if (level >= chain.depth()) throw DomainError("chain level out of range");
  const auto& lvl = chain.level(level);
  std::size_t product = 1;
  for (auto q : targets) product *= q;
  if (product != lvl.orbit_size())
    throw DomainError("targets multiply to " + std::to_string(product) + " but level " + std::to_string(level + 1) +
                      " has an orbit of size " + std::to_string(lvl.orbit_size()));
  StabilizerChain level_group = chain.stabilizer(level);
  detail::TransversalSearch search(level_group, lvl.base, targets, options);
  auto factors = search.single_cycle();
  if (!factors) factors = search.tuples();
  if (!factors) return std::nullopt;
  ProductDecomposition d{std::move(*factors), level, lvl.base, lvl.orbit_size()};
  return d;
}

/// Refines every composite-size block of a chain LS into cyclic sets of
/// prime sizes. The ascending prime order is tried first, then the other
/// orderings of the same primes. Blocks that cannot be refined are kept and
/// flagged in their annotation.
inline LogSignature refine_ls(const LogSignature& ls, const StabilizerChain& chain, const RefineOptions& options = {}) {
  if (ls.provenance() != Provenance::chain || !ls.has_level_annotations())
    throw DomainError("refine_ls needs a chain LS with level annotations");
  std::vector<LogSignature::Block> blocks;
  std::vector<BlockAnnotation> annotations;
  for (std::size_t b = 0; b < ls.block_count(); ++b) {
    const auto& ann = ls.annotations()[b];
    const auto& block = ls.block(b);
    auto primes = detail::ascending_primes(block.size());
    std::optional<ProductDecomposition> found;
    if (primes.size() > 1) {
      auto order = primes;
      do {
        found = refine_block(chain, ann.level, order, options);
      } while (!found && std::next_permutation(order.begin(), order.end()));
    }
    if (!found) {
      blocks.push_back(block);
      BlockAnnotation kept = ann;
      kept.refinement_failed = primes.size() > 1;
      annotations.push_back(kept);
      continue;
    }
    const std::size_t parts = found->factors.size();
    for (std::size_t t = 0; t < parts; ++t) {
      blocks.push_back(found->factors[t].elements());
      annotations.push_back(BlockAnnotation{ann.level, ann.base_point, t, parts, false});
    }
  }
  return LogSignature(ls.degree(), std::move(blocks), Provenance::refined, std::move(annotations), ls.group());
}

struct BuildResult {
  LogSignature ls;
  bool minimal = false;
  /// "solvable" or "chain+refine".
  std::string method;
};

inline BuildResult build_mls(const StabilizerChain& chain, const RefineOptions& options = {}) {
  const auto f = factor_integer(chain.order());
  if (is_solvable(chain)) {
    auto ls = mls_solvable(chain);
    bool minimal = is_minimal(ls, f);
    return {std::move(ls), minimal, "solvable"};
  }
  auto ls = refine_ls(chain_ls(chain), chain, options);
  bool minimal = is_minimal(ls, f);
  return {std::move(ls), minimal, "chain+refine"};
}

}  // namespace mlsig
