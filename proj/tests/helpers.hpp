#pragma once

#include <string>

#include "mlsig/mlsig.hpp"

namespace testing_support {

inline mlsig::StabilizerChain chain_for(const std::string& name) { return mlsig::build_chain(mlsig::load_group(name)); }

/// Replaces entry `j` of a chain-LS block with another representative of
/// entry `k`'s coset: block[k] * h for h a non-identity element of the next
/// level group. Entries stay distinct but two products now coincide.
inline mlsig::LogSignature duplicate_coset(const mlsig::LogSignature& ls, const mlsig::StabilizerChain& chain,
                                           std::size_t block, std::size_t j, std::size_t k) {
  const auto& ann = ls.annotations().at(block);
  const auto& h = chain.level(ann.level + 1).generators.at(0);
  auto blocks = ls.blocks();
  blocks[block][j] = mlsig::compose(blocks[block][k], h);
  return mlsig::LogSignature(ls.degree(), std::move(blocks), ls.provenance(), ls.annotations(), ls.group());
}

}  // namespace testing_support
