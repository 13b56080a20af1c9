#pragma once

// Stabilizer chains (bases and strong generating sets) built by the
// deterministic Schreier-Sims algorithm.
//
// Level i holds the group G^(i) fixing base points b_0..b_{i-1} pointwise,
// the orbit of b_i under G^(i), and for each orbit point x a representative
// u_x in G^(i) with u_x(b_i) = x. The orbit is stored base point first and
// the remaining points ascending, so u_{b_i} = identity is always entry 0.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "mlsig/bigint.hpp"
#include "mlsig/errors.hpp"
#include "mlsig/permutation.hpp"

namespace mlsig {

struct ChainLevel {
  Point base = 0;
  std::vector<Permutation> generators;
  std::vector<Point> orbit;
  std::vector<Permutation> transversal;
  /// position[x] = index of x in `orbit`, or -1.
  std::vector<std::int32_t> position;

  std::size_t orbit_size() const noexcept { return orbit.size(); }
  bool in_orbit(Point x) const noexcept { return position[x] >= 0; }
  const Permutation& representative(Point x) const { return transversal[static_cast<std::size_t>(position[x])]; }
};

class StabilizerChain {
 public:
  StabilizerChain() = default;
  StabilizerChain(std::size_t degree, std::vector<Permutation> generators, std::vector<ChainLevel> levels)
      : degree_(degree), generators_(std::move(generators)), levels_(std::move(levels)) {}

  std::size_t degree() const noexcept { return degree_; }
  /// The generators the chain was built from (identities removed).
  const std::vector<Permutation>& generators() const noexcept { return generators_; }
  const std::vector<ChainLevel>& levels() const noexcept { return levels_; }
  const ChainLevel& level(std::size_t i) const { return levels_.at(i); }
  std::size_t depth() const noexcept { return levels_.size(); }

  std::vector<Point> base() const {
    std::vector<Point> b;
    for (const auto& l : levels_) b.push_back(l.base);
    return b;
  }

  std::vector<std::size_t> orbit_sizes() const {
    std::vector<std::size_t> s;
    for (const auto& l : levels_) s.push_back(l.orbit_size());
    return s;
  }

  BigInt order() const {
    BigInt o = 1;
    for (const auto& l : levels_) o *= l.orbit_size();
    return o;
  }

  bool is_trivial() const noexcept { return levels_.empty(); }

  /// The chain of G^(first), the subgroup fixing b_0..b_{first-1}.
  StabilizerChain stabilizer(std::size_t first) const {
    if (first > levels_.size()) throw DomainError("stabilizer level out of range");
    std::vector<ChainLevel> tail(levels_.begin() + static_cast<std::ptrdiff_t>(first), levels_.end());
    std::vector<Permutation> gens = tail.empty() ? std::vector<Permutation>{} : tail.front().generators;
    return StabilizerChain(degree_, std::move(gens), std::move(tail));
  }

 private:
  std::size_t degree_ = 0;
  std::vector<Permutation> generators_;
  std::vector<ChainLevel> levels_;
};

struct SiftResult {
  Permutation residue;
  /// Index of the level where sifting stopped; depth() if it went through.
  std::size_t level = 0;
};

/// Strips g through the levels starting at `first`.
inline SiftResult sift(const std::vector<ChainLevel>& levels, Permutation g, std::size_t first = 0) {
  Permutation tmp;
  for (std::size_t i = first; i < levels.size(); ++i) {
    const auto& l = levels[i];
    Point x = g(l.base);
    if (!l.in_orbit(x)) return {std::move(g), i};
    compose_into(inverse(l.representative(x)), g, tmp);
    std::swap(g, tmp);
  }
  return {std::move(g), levels.size()};
}

inline SiftResult sift(const StabilizerChain& chain, const Permutation& g, std::size_t first = 0) {
  check_same_degree(Permutation(chain.degree()), g);
  return sift(chain.levels(), g, first);
}

namespace detail {

inline void compute_orbit(ChainLevel& level, std::size_t degree) {
  level.position.assign(degree, -1);
  std::vector<std::optional<Permutation>> rep(degree);
  rep[level.base] = Permutation(degree);
  std::deque<Point> queue{level.base};
  std::vector<Point> found{level.base};
  while (!queue.empty()) {
    Point x = queue.front();
    queue.pop_front();
    for (const auto& s : level.generators) {
      Point y = s(x);
      if (rep[y]) continue;
      rep[y] = compose(s, *rep[x]);
      found.push_back(y);
      queue.push_back(y);
    }
  }
  std::sort(found.begin() + 1, found.end());
  level.orbit = found;
  level.transversal.clear();
  for (std::size_t k = 0; k < found.size(); ++k) {
    level.position[found[k]] = static_cast<std::int32_t>(k);
    level.transversal.push_back(std::move(*rep[found[k]]));
  }
}

}  // namespace detail

/// Deterministic Schreier-Sims. The base starts with `base_hint` (points
/// are 0-based here) and is extended by the smallest point moved by the
/// element that needs a new level. Levels with a trivial orbit are dropped.
inline StabilizerChain build_chain(const GeneratorSet& gens, std::span<const Point> base_hint = {}) {
  const std::size_t n = gens.degree;
  std::vector<Permutation> generators;
  for (const auto& g : gens.gens) {
    if (g.degree() != n)
      throw DomainError("generator of degree " + std::to_string(g.degree()) + " in a set of degree " + std::to_string(n));
    if (!g.is_identity()) generators.push_back(g);
  }

  std::vector<ChainLevel> levels;
  auto in_base = [&](Point p) {
    return std::any_of(levels.begin(), levels.end(), [p](const ChainLevel& l) { return l.base == p; });
  };
  for (Point p : base_hint) {
    if (p >= n) throw DomainError("base hint point out of range");
    if (!in_base(p)) levels.push_back(ChainLevel{p, {}, {}, {}, {}});
  }
  for (const auto& g : generators) {
    bool fixes_base = std::all_of(levels.begin(), levels.end(), [&](const ChainLevel& l) { return g(l.base) == l.base; });
    if (fixes_base) levels.push_back(ChainLevel{g.smallest_moved_point(), {}, {}, {}, {}});
  }
  for (const auto& g : generators) {
    for (auto& l : levels) {
      l.generators.push_back(g);
      if (g(l.base) != l.base) break;
    }
  }
  for (auto& l : levels) detail::compute_orbit(l, n);

  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(levels.size()) - 1;
  while (i >= 0) {
    bool extended = false;
    const auto level_index = static_cast<std::size_t>(i);
    // `levels` may grow below, so the level is re-indexed on every access.
    for (std::size_t k = 0; !extended && k < levels[level_index].orbit.size(); ++k) {
      for (std::size_t si = 0; !extended && si < levels[level_index].generators.size(); ++si) {
        const auto& lvl = levels[level_index];
        const auto& s = lvl.generators[si];
        Point x = lvl.orbit[k];
        Point y = s(x);
        Permutation schreier = compose(inverse(lvl.representative(y)), compose(s, lvl.transversal[k]));
        if (schreier.is_identity()) continue;
        auto [residue, stop] = sift(levels, std::move(schreier), static_cast<std::size_t>(i) + 1);
        if (residue.is_identity()) continue;
        if (stop == levels.size()) {
          levels.push_back(ChainLevel{residue.smallest_moved_point(), {}, {}, {}, {}});
        }
        for (std::size_t l = static_cast<std::size_t>(i) + 1; l <= stop; ++l) {
          levels[l].generators.push_back(residue);
          detail::compute_orbit(levels[l], n);
        }
        i = static_cast<std::ptrdiff_t>(stop);
        extended = true;
      }
    }
    if (!extended) --i;
  }

  std::erase_if(levels, [](const ChainLevel& l) { return l.orbit.size() <= 1; });
  return StabilizerChain(n, std::move(generators), std::move(levels));
}

inline StabilizerChain build_chain(const GeneratorSet& gens, std::initializer_list<Point> base_hint) {
  std::vector<Point> hint(base_hint);
  return build_chain(gens, std::span<const Point>(hint));
}

/// Subgroup generated by `gens` inside the symmetric group of `degree`.
inline StabilizerChain chain_of(std::size_t degree, std::vector<Permutation> gens) {
  return build_chain(GeneratorSet{degree, std::move(gens), {}});
}

inline bool contains(const StabilizerChain& chain, const Permutation& g) {
  auto r = sift(chain, g);
  return r.level == chain.depth() && r.residue.is_identity();
}

/// Element with the given mixed-radix index: level 0 is the most significant
/// digit, digit d at level i selects transversal[d]. element_at(0) = identity.
inline Permutation element_at(const StabilizerChain& chain, BigInt index) {
  if (index < 0 || index >= chain.order()) throw DomainError("element index out of range");
  const auto& levels = chain.levels();
  std::vector<std::size_t> digits(levels.size());
  for (std::size_t i = levels.size(); i-- > 0;) {
    digits[i] = static_cast<std::size_t>(index % levels[i].orbit_size());
    index /= levels[i].orbit_size();
  }
  Permutation g(chain.degree());
  Permutation tmp;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    compose_into(g, levels[i].transversal[digits[i]], tmp);
    std::swap(g, tmp);
  }
  return g;
}

/// Inverse of element_at; throws NotMember for elements outside the group.
inline BigInt index_of(const StabilizerChain& chain, Permutation g) {
  check_same_degree(Permutation(chain.degree()), g);
  BigInt index = 0;
  Permutation tmp;
  for (const auto& l : chain.levels()) {
    Point x = g(l.base);
    if (!l.in_orbit(x)) throw NotMember("element " + format_cycles(g) + " is not in the group");
    index = index * l.orbit_size() + l.position[x];
    compose_into(inverse(l.representative(x)), g, tmp);
    std::swap(g, tmp);
  }
  if (!g.is_identity()) throw NotMember("element is not in the group (non-trivial residue)");
  return index;
}

/// Walks the group in element_at order, reusing partial products so each
/// step costs O(degree) amortized instead of a full mixed-radix decode.
class ElementEnumerator {
 public:
  explicit ElementEnumerator(const StabilizerChain& chain)
      : chain_(&chain), digits_(chain.depth(), 0), prefix_(chain.depth() + 1, Permutation(chain.degree())) {
    for (std::size_t i = 0; i < chain.depth(); ++i)
      compose_into(prefix_[i], chain.level(i).transversal[0], prefix_[i + 1]);
  }
  // Keeps a pointer to the chain.
  explicit ElementEnumerator(StabilizerChain&&) = delete;

  bool done() const noexcept { return done_; }
  const Permutation& current() const noexcept { return prefix_.back(); }

  void advance() {
    const auto& levels = chain_->levels();
    std::size_t i = levels.size();
    while (true) {
      if (i == 0) {
        done_ = true;
        return;
      }
      --i;
      if (++digits_[i] < levels[i].orbit_size()) break;
      digits_[i] = 0;
    }
    for (std::size_t k = i; k < levels.size(); ++k)
      compose_into(prefix_[k], levels[k].transversal[digits_[k]], prefix_[k + 1]);
  }

 private:
  const StabilizerChain* chain_;
  std::vector<std::size_t> digits_;
  std::vector<Permutation> prefix_;
  bool done_ = false;
};

/// Uniform random element; `rng.below(n)` must be uniform on [0, n).
template <typename Rng>
Permutation random_element(const StabilizerChain& chain, Rng& rng) {
  Permutation g(chain.degree());
  Permutation tmp;
  for (const auto& l : chain.levels()) {
    compose_into(g, l.transversal[static_cast<std::size_t>(rng.below(l.orbit_size()))], tmp);
    std::swap(g, tmp);
  }
  return g;
}

/// Smallest normal subgroup of `group` containing `elems`.
inline StabilizerChain normal_closure(const StabilizerChain& group, std::span<const Permutation> elems) {
  std::vector<Permutation> gens;
  for (const auto& e : elems)
    if (!e.is_identity()) gens.push_back(e);
  StabilizerChain closure = chain_of(group.degree(), gens);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    for (const auto& g : group.generators()) {
      Permutation conj = compose(g, compose(gens[k], inverse(g)));
      if (!contains(closure, conj)) {
        gens.push_back(std::move(conj));
        closure = chain_of(group.degree(), gens);
      }
    }
  }
  return closure;
}

inline Permutation commutator(const Permutation& a, const Permutation& b) {
  return compose(inverse(a), compose(inverse(b), compose(a, b)));
}

inline StabilizerChain derived_subgroup(const StabilizerChain& group) {
  std::vector<Permutation> comms;
  const auto& gens = group.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      Permutation c = commutator(gens[i], gens[j]);
      if (!c.is_identity()) comms.push_back(std::move(c));
    }
  return normal_closure(group, comms);
}

/// G = D_0 > D_1 > ... ending at the trivial group or at a perfect
/// non-trivial subgroup (the last entry then equals its own derived group).
inline std::vector<StabilizerChain> derived_series(const StabilizerChain& group) {
  std::vector<StabilizerChain> series{group};
  while (!series.back().is_trivial()) {
    StabilizerChain next = derived_subgroup(series.back());
    if (next.order() == series.back().order()) break;
    series.push_back(std::move(next));
  }
  return series;
}

inline bool is_solvable(const StabilizerChain& group) { return derived_series(group).back().is_trivial(); }

}  // namespace mlsig
