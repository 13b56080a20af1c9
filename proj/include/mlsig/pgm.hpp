#pragma once

// A demonstration of the PGM secret-key mapping. The key is a pair of tame
// LSs (alpha, beta) for the same group; a message m in [0, |G|) is read as
// digits for alpha, turned into the group element those digits select, and
// that element's digits under beta are the ciphertext. Not hardened in any
// way: no padding, no key wrapping, no security claims.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlsig/bigint.hpp"
#include "mlsig/construct.hpp"
#include "mlsig/errors.hpp"
#include "mlsig/factorize.hpp"
#include "mlsig/log_signature.hpp"
#include "mlsig/ls_io.hpp"
#include "mlsig/random.hpp"
#include "mlsig/stabilizer_chain.hpp"

namespace mlsig {

/// Shuffles every block and, on every level but the last, right-multiplies
/// each entry by a random element of the next level group. Images of the
/// level base point are unchanged, so the result stays transversal-structured.
inline LogSignature randomize_ls(const LogSignature& ls, const StabilizerChain& chain, std::uint64_t seed) {
  if (ls.provenance() != Provenance::chain || !ls.has_level_annotations())
    throw DomainError("randomize_ls needs a chain LS with level annotations");
  Rng rng(seed);
  std::vector<LogSignature::Block> blocks;
  for (std::size_t b = 0; b < ls.block_count(); ++b) {
    const auto& ann = ls.annotations()[b];
    if (ann.level >= chain.depth()) throw DomainError("annotation refers to a level the chain does not have");
    LogSignature::Block block = ls.block(b);
    rng.shuffle(std::span<Permutation>(block));
    if (ann.level + 1 < chain.depth()) {
      StabilizerChain next = chain.stabilizer(ann.level + 1);
      for (auto& t : block) t = compose(t, random_element(next, rng));
    }
    blocks.push_back(std::move(block));
  }
  return LogSignature(ls.degree(), std::move(blocks), Provenance::chain, ls.annotations(), ls.group());
}

/// Mixed radix with the last block least significant.
inline FactorizationIndex digits_of(BigInt value, const std::vector<std::size_t>& radices) {
  FactorizationIndex out;
  out.digits.assign(radices.size(), 0);
  for (std::size_t i = radices.size(); i-- > 0;) {
    out.digits[i] = static_cast<std::size_t>(value % radices[i]);
    value /= radices[i];
  }
  return out;
}

inline BigInt value_of(const FactorizationIndex& index, const std::vector<std::size_t>& radices) {
  BigInt value = 0;
  for (std::size_t i = 0; i < radices.size(); ++i) value = value * radices[i] + index.digits[i];
  return value;
}

class PgmKey {
 public:
  static constexpr int format_version = 1;

  PgmKey(std::string group, std::uint64_t seed, LogSignature alpha, LogSignature beta)
      : group_(std::move(group)),
        seed_(seed),
        alpha_(std::move(alpha)),
        beta_(std::move(beta)),
        alpha_index_(alpha_),
        beta_index_(beta_) {
    if (alpha_.size_product() != beta_.size_product())
      throw DomainError("key LSs cover groups of different orders");
    if (alpha_.degree() != beta_.degree()) throw DomainError("key LSs have different degrees");
  }

  const std::string& group() const noexcept { return group_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const LogSignature& alpha() const noexcept { return alpha_; }
  const LogSignature& beta() const noexcept { return beta_; }
  BigInt message_space() const { return alpha_.size_product(); }

  BigInt encrypt(const BigInt& m) const { return map(m, alpha_, beta_index_); }
  BigInt decrypt(const BigInt& c) const { return map(c, beta_, alpha_index_); }

  friend bool operator==(const PgmKey& a, const PgmKey& b) {
    return a.group_ == b.group_ && a.seed_ == b.seed_ && a.alpha_ == b.alpha_ && a.beta_ == b.beta_;
  }

 private:
  BigInt map(const BigInt& value, const LogSignature& from, const TameIndexer& to) const {
    if (value < 0 || value >= message_space())
      throw DomainError("message " + to_string(value) + " outside [0, " + to_string(message_space()) + ")");
    Permutation g = reconstruct(from, digits_of(value, from.block_sizes()));
    return value_of(to.factorize(g), to.ls().block_sizes());
  }

  std::string group_;
  std::uint64_t seed_;
  LogSignature alpha_;
  LogSignature beta_;
  TameIndexer alpha_index_;
  TameIndexer beta_index_;
};

/// Both LSs are randomized copies of chain_ls(chain) under seeds derived
/// from `seed`, and both are verified structurally before use.
inline PgmKey keygen(const StabilizerChain& chain, std::uint64_t seed, const std::string& group_name = "") {
  LogSignature base = chain_ls(chain);
  if (!group_name.empty()) base.set_group(group_name);
  LogSignature alpha = randomize_ls(base, chain, splitmix64(seed));
  LogSignature beta = randomize_ls(base, chain, splitmix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL));
  for (const auto* ls : {&alpha, &beta})
    if (!verify_structural(*ls, chain).passed) throw Error("generated key failed structural verification");
  return PgmKey(group_name, seed, std::move(alpha), std::move(beta));
}

inline BigInt encrypt(const PgmKey& key, const BigInt& m) { return key.encrypt(m); }
inline BigInt decrypt(const PgmKey& key, const BigInt& c) { return key.decrypt(c); }

// Key file: a header followed by the two LSs in canonical LS layout.
//
//   {
//     "format": "mlsig-pgm-key",
//     "version": 1,
//     "group": "M11",
//     "seed": 42,
//     "alpha": { ...LS... },
//     "beta": { ...LS... }
//   }

inline void write_key(const PgmKey& key, std::ostream& os) {
  os << "{\n";
  os << "  \"format\": \"mlsig-pgm-key\",\n";
  os << "  \"version\": " << PgmKey::format_version << ",\n";
  os << "  \"group\": " << detail::quote_json(key.group()) << ",\n";
  os << "  \"seed\": " << key.seed() << ",\n";
  os << "  \"alpha\": ";
  detail::write_ls_body(key.alpha(), os, "  ");
  os << ",\n  \"beta\": ";
  detail::write_ls_body(key.beta(), os, "  ");
  os << "\n}\n";
}

inline std::string key_to_string(const PgmKey& key) {
  std::ostringstream os;
  write_key(key, os);
  return os.str();
}

inline PgmKey read_key(std::istream& in, const std::string& source = "<key>") {
  auto doc = detail::parse_json_text(in, source);
  const std::string where = source + ":";
  if (!doc.is_object()) throw ParseError(where + ": expected an object");
  detail::require_keys(doc, {"format", "version", "group", "seed", "alpha", "beta"}, where);
  if (doc.value("format", "") != "mlsig-pgm-key") throw ParseError(where + "/format: expected \"mlsig-pgm-key\"");
  if (detail::get_int(doc, "version", where) != PgmKey::format_version)
    throw ParseError(where + "/version: unsupported key format version");
  if (!doc.contains("group") || !doc["group"].is_string()) throw ParseError(where + "/group: expected a string");
  if (!doc.contains("seed") || !doc["seed"].is_number_unsigned())
    throw ParseError(where + "/seed: expected a non-negative integer");
  if (!doc.contains("alpha") || !doc.contains("beta")) throw ParseError(where + ": missing \"alpha\" or \"beta\"");
  try {
    return PgmKey(doc["group"].get<std::string>(), doc["seed"].get<std::uint64_t>(),
                  detail::ls_from_json(doc["alpha"], where + "/alpha"), detail::ls_from_json(doc["beta"], where + "/beta"));
  } catch (const DomainError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

inline PgmKey read_key_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_key(in, path);
}

}  // namespace mlsig
