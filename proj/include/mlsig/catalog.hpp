#pragma once

// Bundled groups and the sporadic-group arithmetic table.
//
// Group files are plain text:
//
//   # comment
//   degree 11
//   (2,10)(4,11)(5,7)(8,9)
//   (1,4,3,8)(2,5,6,9)
//
// The rows file is JSON; see write_rows for the layout.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mlsig/bigint.hpp"
#include "mlsig/errors.hpp"
#include "mlsig/log_signature.hpp"
#include "mlsig/permutation.hpp"
#include "mlsig/stabilizer_chain.hpp"

namespace mlsig {

struct GroupSpec {
  std::string name;
  std::size_t degree = 0;
  std::vector<std::string> generators;  // cycle notation, 1-based
  std::optional<BigInt> expected_order;
  std::string source;
};

inline const std::vector<GroupSpec>& builtin_groups() {
  static const std::vector<GroupSpec> groups = {
      {"M11", 11, {"(2,10)(4,11)(5,7)(8,9)", "(1,4,3,8)(2,5,6,9)"}, BigInt(7920), "Mathieu group, natural action"},
      {"M12",
       12,
       {"(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)", "(1,12)(2,11)(3,6)(4,8)(5,9)(7,10)"},
       BigInt(95040),
       "Mathieu group, natural action"},
      {"M22",
       22,
       {"(1,2,3,4,5,6,7,8,9,10,11)(12,13,14,15,16,17,18,19,20,21,22)",
        "(1,4,5,9,3)(2,8,10,7,6)(12,15,16,20,14)(13,19,21,18,17)",
        "(1,21)(2,10,8,6)(3,13,4,17)(5,19,9,18)(11,22)(12,14,16,20)"},
       BigInt(443520),
       "Mathieu group, natural action"},
      {"M23",
       23,
       {"(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23)",
        "(3,17,10,7,9)(4,13,14,19,5)(8,18,11,12,23)(15,20,22,21,16)"},
       BigInt(10200960),
       "Mathieu group, natural action"},
      {"M24",
       24,
       {"(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23)",
        "(3,17,10,7,9)(4,13,14,19,5)(8,18,11,12,23)(15,20,22,21,16)",
        "(1,24)(2,23)(3,12)(4,16)(5,18)(6,10)(7,20)(8,14)(9,21)(11,17)(13,22)(15,19)"},
       BigInt(244823040),
       "Mathieu group, natural action"},
      {"PSL(2,7)", 8, {"(1,2,3,4,5,6,7)", "(1,8)(2,7)(3,4)(5,6)"}, BigInt(168), "action on the projective line over GF(7)"},
      {"PSL(2,11)",
       12,
       {"(1,2,3,4,5,6,7,8,9,10,11)", "(1,12)(2,11)(3,6)(4,8)(5,9)(7,10)"},
       BigInt(660),
       "action on the projective line over GF(11)"},
      {"Q8", 8, {"(1,2,5,6)(3,4,7,8)", "(1,3,5,7)(2,8,6,4)"}, BigInt(8), "quaternion group, regular action"},
      {"SL(2,3)", 8, {"(1,4,7)(2,8,5)", "(1,6,2,3)(4,7,8,5)"}, BigInt(24), "action on the nonzero vectors of GF(3)^2"},
      {"C2xC2xC2", 6, {"(1,2)", "(3,4)", "(5,6)"}, BigInt(8), "elementary abelian group of order 8"},
  };
  return groups;
}

namespace detail {

inline std::string cycle_string(std::size_t first, std::size_t last) {
  std::string s = "(";
  for (std::size_t i = first; i <= last; ++i) s += (i > first ? "," : "") + std::to_string(i);
  return s + ")";
}

inline BigInt factorial(std::size_t n) {
  BigInt f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

inline constexpr std::size_t max_family_degree = 4096;

/// Cn, Dn (order 2n), Sn, An for a name like "D6".
inline std::optional<GroupSpec> family_group(const std::string& name) {
  if (name.size() < 2 || !std::isdigit(static_cast<unsigned char>(name[1]))) return std::nullopt;
  const char family = name[0];
  if (family != 'C' && family != 'D' && family != 'S' && family != 'A') return std::nullopt;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
  if (name[1] == '0' || name.size() > 5) return std::nullopt;
  const std::size_t n = std::stoul(name.substr(1));
  if (n > max_family_degree) throw DomainError(name + ": degree above " + std::to_string(max_family_degree));

  GroupSpec g;
  g.name = name;
  g.degree = n;
  switch (family) {
    case 'C':
      if (n > 1) g.generators = {cycle_string(1, n)};
      g.expected_order = BigInt(n);
      g.source = "cyclic group, regular action";
      break;
    case 'D': {
      if (n < 3) throw DomainError(name + ": dihedral groups need n >= 3");
      std::string reflection;
      for (std::size_t i = 1; i < n + 1 - i; ++i)
        reflection += "(" + std::to_string(i) + "," + std::to_string(n + 1 - i) + ")";
      g.generators = {cycle_string(1, n), reflection};
      g.expected_order = BigInt(2 * n);
      g.source = "symmetries of the regular n-gon";
      break;
    }
    case 'S':
      if (n > 1) g.generators = {cycle_string(1, n), "(1,2)"};
      g.expected_order = factorial(n);
      g.source = "symmetric group, natural action";
      break;
    case 'A':
      if (n >= 3) g.generators = {"(1,2,3)", n % 2 ? cycle_string(1, n) : cycle_string(2, n)};
      g.expected_order = n >= 2 ? factorial(n) / 2 : BigInt(1);
      g.source = "alternating group, natural action";
      break;
  }
  return g;
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

/// Built-in lookup: exact name, then case-insensitive, then the Cn/Dn/Sn/An
/// families.
inline std::optional<GroupSpec> find_builtin(const std::string& name) {
  for (const auto& g : builtin_groups())
    if (g.name == name) return g;
  for (const auto& g : builtin_groups())
    if (detail::lower(g.name) == detail::lower(name)) return g;
  return detail::family_group(name);
}

inline GeneratorSet to_generator_set(const GroupSpec& spec) {
  GeneratorSet out;
  out.degree = spec.degree;
  out.name = spec.name;
  for (const auto& text : spec.generators) out.gens.push_back(parse_cycles(text, spec.degree));
  return out;
}

inline constexpr std::size_t max_group_file_degree = 1 << 20;

inline GeneratorSet parse_group_text(std::istream& in, const std::string& source = "<group>") {
  GeneratorSet out;
  bool have_degree = false;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto stop = line.find_last_not_of(" \t\r");
    const std::string text = line.substr(start, stop - start + 1);
    const std::string where = source + ":" + std::to_string(lineno);
    if (!have_degree) {
      std::istringstream words(text);
      std::string keyword, value, extra;
      words >> keyword >> value >> extra;
      if (keyword != "degree" || value.empty() || !extra.empty())
        throw ParseError(where + ": expected 'degree N' on the first line");
      BigInt degree;
      try {
        degree = parse_bigint(value);
      } catch (const ParseError&) {
        throw ParseError(where + ": degree '" + value + "' is not a non-negative integer");
      }
      if (degree > max_group_file_degree) throw ParseError(where + ": degree " + value + " is too large");
      out.degree = static_cast<std::size_t>(degree);
      have_degree = true;
      continue;
    }
    try {
      out.gens.push_back(parse_cycles(text, out.degree));
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (!have_degree) throw ParseError(source + ": missing 'degree N' line");
  return out;
}

inline GeneratorSet read_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  GeneratorSet g = parse_group_text(in, path);
  g.name = std::filesystem::path(path).stem().string();
  return g;
}

inline void write_group(const GeneratorSet& g, std::ostream& os, const std::string& comment = "") {
  if (!comment.empty()) os << "# " << comment << "\n";
  os << "degree " << g.degree << "\n";
  for (const auto& p : g.gens) os << format_cycles(p) << "\n";
}

/// Resolves a built-in name, then NAME.grp in each directory of
/// MLSIG_GROUP_PATH (colon separated), then a file path. Built-ins are
/// checked against their expected order.
inline GeneratorSet load_group(const std::string& name_or_path) {
  if (auto spec = find_builtin(name_or_path)) {
    GeneratorSet g = to_generator_set(*spec);
    if (spec->expected_order) {
      const BigInt order = build_chain(g).order();
      if (order != *spec->expected_order)
        throw DomainError(spec->name + ": generators give order " + to_string(order) + ", expected " +
                          to_string(*spec->expected_order));
    }
    return g;
  }
  if (const char* env = std::getenv("MLSIG_GROUP_PATH")) {
    std::stringstream dirs(env);
    std::string dir;
    while (std::getline(dirs, dir, ':')) {
      if (dir.empty()) continue;
      auto candidate = std::filesystem::path(dir) / (name_or_path + ".grp");
      if (std::filesystem::is_regular_file(candidate)) return read_group_file(candidate.string());
    }
  }
  if (std::filesystem::is_regular_file(name_or_path)) return read_group_file(name_or_path);
  throw DomainError("unknown group '" + name_or_path + "'");
}

// ---------------------------------------------------------------------------
// Sporadic-group arithmetic.

/// A product like "2^21.3^9.5^4.7^2.11.13.23". Terms are separated by '.'
/// or '*'; a bare term is a power with exponent 1.
struct PowerProduct {
  std::vector<PrimePower> terms;  // in written order; bases not necessarily prime
  BigInt value = 1;
};

inline PowerProduct parse_power_product(std::string_view text) {
  PowerProduct out;
  std::string s;
  for (char c : text)
    if (c != ' ' && c != ',') s.push_back(c);
  if (s.empty()) throw ParseError("empty product");
  std::size_t i = 0;
  auto number = [&](const char* what) {
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) throw ParseError("expected " + std::string(what) + " at offset " + std::to_string(i) + " in '" + s + "'");
    BigInt v(s.substr(i, j - i));
    i = j;
    return v;
  };
  while (true) {
    PrimePower term;
    term.prime = number("a base");
    term.exponent = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      BigInt e = number("an exponent");
      if (e > 4096) throw ParseError("exponent too large in '" + s + "'");
      term.exponent = static_cast<unsigned>(e);
    }
    out.value *= boost::multiprecision::pow(term.prime, term.exponent);
    out.terms.push_back(term);
    if (i == s.size()) break;
    if (s[i] != '.' && s[i] != '*') throw ParseError("unexpected '" + std::string(1, s[i]) + "' in '" + s + "'");
    ++i;
  }
  return out;
}

/// Empty when the product is a proper prime factorization (prime bases,
/// strictly ascending, positive exponents); otherwise the reason it is not.
inline std::string factorization_problem(const PowerProduct& p) {
  for (std::size_t k = 0; k < p.terms.size(); ++k) {
    const auto& t = p.terms[k];
    if (!is_prime(t.prime)) return "base " + to_string(t.prime) + " is not prime";
    if (t.exponent == 0) return "zero exponent on " + to_string(t.prime);
    if (k > 0 && p.terms[k - 1].prime >= t.prime) return "bases not strictly ascending at " + to_string(t.prime);
  }
  return {};
}

struct NamedOrder {
  std::string order;  // power product or decimal
  std::string source;
};

using OrderTable = std::map<std::string, NamedOrder>;

/// Orders of the groups that appear as stabilizer constituents.
inline const OrderTable& constituent_orders() {
  static const OrderTable table = {
      {"M22", {"443520", "chain order of the bundled M22 generators"}},
      {"M24", {"244823040", "chain order of the bundled M24 generators"}},
      {"A6", {"360", "6!/2"}},
      {"A12", {"239500800", "12!/2"}},
      {"PSU6(2)", {"2^15.3^6.5.7.11", "q^15 (q^2-1)(q^3+1)(q^4-1)(q^5+1)(q^6-1) / gcd(6,q+1), q = 2"}},
      {"PSL3(7)", {"2^5.3^2.7^3.19", "q^3 (q^2-1)(q^3-1) / gcd(3,q-1), q = 7"}},
      {"G2(5)", {"2^6.3^3.5^6.7.31", "q^6 (q^6-1)(q^2-1), q = 5"}},
      {"3D4(2)", {"2^12.3^4.7^2.13", "q^12 (q^8+q^4+1)(q^6-1)(q^2-1), q = 2"}},
      {"2E6(2)",
       {"2^36.3^9.5^2.7^2.11.13.17.19",
        "q^36 (q^12-1)(q^9+1)(q^8-1)(q^6-1)(q^5+1)(q^2-1) / gcd(3,q+1), q = 2"}},
      {"Fi22", {"2^17.3^9.5^2.7.11.13", "stated order of the Fi22 row"}},
      {"Fi23", {"2^18.3^13.5^2.7.11.13.17.23", "stated order of the Fi23 row"}},
      {"B", {"2^41.3^13.5^6.7^2.11.13.17.19.23.31.47", "stated order of the B row"}},
  };
  return table;
}

struct TheoremRow {
  std::string group;
  std::string order;                      // claimed |G|
  std::string stabilizer;                 // as written, e.g. "2^11:M24"
  std::vector<std::string> constituents;  // factors whose orders multiply to |G_w|
  std::optional<std::string> index;       // claimed index in decimal, if given
  std::string index_factorization;        // claimed factorization of the index
  std::vector<std::string> blocks;        // orders of the index blocks; their product should be the index

  friend bool operator==(const TheoremRow&, const TheoremRow&) = default;
};

/// The thirteen sporadic rows. Fi22's stabilizer is taken as the double
/// cover 2.PSU6(2).
inline const std::vector<TheoremRow>& sporadic_rows() {
  static const std::vector<TheoremRow> rows = {
      {"Co1", "2^21.3^9.5^4.7^2.11.13.23", "2^11:M24", {"2^11", "M24"}, "8,292,375", "3^6.5^3.7.13",
       {"3^6", "5^3", "7", "13"}},
      {"Co2", "2^18.3^6.5^3.7.11.23", "2^10:M22:2", {"2^10", "M22", "2"}, "46,575", "3^4.5^2.23",
       {"3^4", "5^2", "23"}},
      {"Fi22", "2^17.3^9.5^2.7.11.13", "2.PSU6(2)", {"2", "PSU6(2)"}, "3,510", "2.3^3.5.13", {"2", "3^5", "5", "13"}},
      {"Fi23", "2^18.3^13.5^2.7.11.13.17.23", "2.Fi22", {"2", "Fi22"}, "31,671", "3^4.17.23", {"3^4", "17", "23"}},
      {"Fi24'", "2^21.3^16.5^2.7^3.11.13.17.23.29", "Fi23", {"Fi23"}, "306,936", "2^3.3^3.7^2.29",
       {"2^3", "3^3", "7^2", "29"}},
      {"Th", "2^15.3^10.5^3.7^2.13.19.31", "3D4(2):3", {"3D4(2)", "3"}, "143,127,000", "2^3.3^5.5^3.7.19.31",
       {"2^3", "3^5", "5^3", "7", "19", "31"}},
      {"HN", "2^14.3^6.5^6.7.11.19", "A12", {"A12"}, "1,140,000", "2^6.3.5^5.19", {"2^6", "3", "5^5", "19"}},
      {"B", "2^41.3^13.5^6.7^2.11.13.17.19.23.31.47", "2.2E6(2):2", {"2", "2E6(2)", "2"}, "13,571,955,000",
       "2^3.3^4.5^4.23.31.47", {"2^3", "3^4", "5^4", "23", "31", "47"}},
      {"M", "2^46.3^20.5^9.7^6.11^2.13^3.17.19.23.29.31.41.47.59.71", "2.B", {"2", "B"}, std::nullopt,
       "2^5.3^7.5^3.11.13^2.41.59.71", {"2^5", "3^7", "5^3", "11", "13^2", "41", "59", "71"}},
      {"O'N", "2^9.3^4.5.7^3.11.19.31", "PSL3(7):2", {"PSL3(7)", "2"}, "122,760", "2^2.3^2.11.31",
       {"2^2", "3^2", "11", "31"}},
      {"Ly", "2^8.3^7.5^6.11.31.37.67", "G2(5)", {"G2(5)"}, "8,835,156", "2^2.3^4.11.37.67",
       {"2^2", "3^4", "11", "37", "67"}},
      {"J3", "2^7.3^5.5.17.19", "3x(3xA6):2", {"3", "3", "A6", "2"}, "23,256", "2^2.3^2.17.19",
       {"2^2", "3^2", "17", "19"}},
      {"J4", "2^21.3^3.5.7.11^3.23.29.31.37.43", "2^11:M24", {"2^11", "M24"}, "173,067,389", "11^2.29.31.37.43",
       {"11^2", "29", "31", "37", "43"}},
  };
  return rows;
}

inline std::optional<TheoremRow> find_row(const std::string& group, const std::vector<TheoremRow>& rows = sporadic_rows()) {
  for (const auto& r : rows)
    if (r.group == group || detail::lower(r.group) == detail::lower(group)) return r;
  return std::nullopt;
}

struct RowReport {
  std::string group;
  bool index_consistent = false;      // (a)
  bool orbit_stabilizer = false;      // (b)
  bool order_well_formed = false;     // (c)
  bool verdict = false;
  std::optional<BigInt> group_order;
  std::optional<BigInt> stabilizer_order;
  std::optional<BigInt> claimed_index;
  std::vector<std::string> details;
};

namespace detail {

inline std::optional<BigInt> try_product(const std::string& text, const std::string& label,
                                         std::vector<std::string>& details) {
  try {
    return parse_power_product(text).value;
  } catch (const ParseError& e) {
    details.push_back(label + ": " + e.what());
    return std::nullopt;
  }
}

}  // namespace detail

/// (a) the index factorization and the product of the block orders both
///     equal the claimed index (the factorization stands in for the index
///     when no decimal value is given);
/// (b) index * |G_w| = |G|;
/// (c) |G| is written as a proper prime factorization.
/// Never throws; problems are recorded in `details`.
inline RowReport check_theorem_arithmetic(const TheoremRow& row, const OrderTable& orders = constituent_orders()) {
  RowReport r;
  r.group = row.group;
  auto& d = r.details;

  r.order_well_formed = false;
  try {
    PowerProduct g = parse_power_product(row.order);
    r.group_order = g.value;
    std::string problem = factorization_problem(g);
    if (problem.empty())
      r.order_well_formed = true;
    else
      d.push_back("|G| " + row.order + ": " + problem);
  } catch (const ParseError& e) {
    d.push_back("|G|: " + std::string(e.what()));
  }

  auto factored = detail::try_product(row.index_factorization, "index factorization", d);
  if (row.index) {
    try {
      r.claimed_index = parse_bigint(*row.index);
    } catch (const ParseError& e) {
      d.push_back("index: " + std::string(e.what()));
    }
  } else if (factored) {
    r.claimed_index = factored;
    d.push_back("no decimal index given; the factorization " + row.index_factorization + " is taken as the claim");
  }

  bool a = r.claimed_index.has_value() && factored.has_value();
  if (a && *factored != *r.claimed_index) {
    a = false;
    d.push_back("index factorization " + row.index_factorization + " = " + to_string(*factored) + " != claimed index " +
                to_string(*r.claimed_index));
  }
  BigInt block_product = 1;
  bool blocks_ok = true;
  for (const auto& b : row.blocks) {
    auto v = detail::try_product(b, "block order " + b, d);
    if (!v) {
      blocks_ok = false;
      continue;
    }
    block_product *= *v;
  }
  if (!blocks_ok) {
    a = false;
  } else if (r.claimed_index && block_product != *r.claimed_index) {
    a = false;
    std::string list;
    for (const auto& b : row.blocks) list += (list.empty() ? "" : ".") + b;
    d.push_back("block orders " + list + " multiply to " + to_string(block_product) + " != claimed index " +
                to_string(*r.claimed_index));
  }
  r.index_consistent = a;

  BigInt stab = 1;
  bool stab_ok = true;
  for (const auto& c : row.constituents) {
    std::optional<BigInt> v;
    if (auto it = orders.find(c); it != orders.end()) {
      v = detail::try_product(it->second.order, "order of " + c, d);
    } else if (!c.empty() && std::isdigit(static_cast<unsigned char>(c[0]))) {
      v = detail::try_product(c, "constituent " + c, d);
    } else {
      d.push_back("no order known for constituent " + c);
    }
    if (!v) {
      stab_ok = false;
      continue;
    }
    stab *= *v;
  }
  if (stab_ok) r.stabilizer_order = stab;
  r.orbit_stabilizer = stab_ok && r.claimed_index && r.group_order && *r.claimed_index * stab == *r.group_order;
  if (stab_ok && r.claimed_index && r.group_order && !r.orbit_stabilizer) {
    std::string implied = *r.group_order % stab == 0 ? to_string(*r.group_order / stab)
                                                    : "not an integer";
    d.push_back("index * |G_w| = " + to_string(*r.claimed_index * stab) + " != |G| = " + to_string(*r.group_order) +
                " (|G|/|G_w| is " + implied + ")");
  }

  r.verdict = r.index_consistent && r.orbit_stabilizer && r.order_well_formed;
  return r;
}

struct SporadicOrder {
  std::string group;
  std::string order;  // as written
  BigInt value;
  BigInt minimal_length;
};

/// Minimal LS lengths of sixteen sporadic groups (the rows plus Co0, Co3
/// and He).
inline std::vector<SporadicOrder> sporadic_minimal_lengths() {
  static const std::vector<std::pair<std::string, std::string>> orders = {
      {"Co0", "2^22.3^9.5^4.7^2.11.13.23"},
      {"Co1", "2^21.3^9.5^4.7^2.11.13.23"},
      {"Co2", "2^18.3^6.5^3.7.11.23"},
      {"Co3", "2^10.3^7.5^3.7.11.23"},
      {"Fi22", "2^17.3^9.5^2.7.11.13"},
      {"Fi23", "2^18.3^13.5^2.7.11.13.17.23"},
      {"Fi24'", "2^21.3^16.5^2.7^3.11.13.17.23.29"},
      {"M", "2^46.3^20.5^9.7^6.11^2.13^3.17.19.23.29.31.41.47.59.71"},
      {"B", "2^41.3^13.5^6.7^2.11.13.17.19.23.31.47"},
      {"Th", "2^15.3^10.5^3.7^2.13.19.31"},
      {"HN", "2^14.3^6.5^6.7.11.19"},
      {"He", "2^10.3^3.5^2.7^3.17"},
      {"O'N", "2^9.3^4.5.7^3.11.19.31"},
      {"Ly", "2^8.3^7.5^6.11.31.37.67"},
      {"J3", "2^7.3^5.5.17.19"},
      {"J4", "2^21.3^3.5.7.11^3.23.29.31.37.43"},
  };
  std::vector<SporadicOrder> out;
  for (const auto& [group, text] : orders) {
    PowerProduct p = parse_power_product(text);
    PrimeFactorization f;
    f.value = p.value;
    f.factors = p.terms;
    out.push_back({group, text, p.value, minimal_length(f)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rows file.

inline void write_rows(const std::vector<TheoremRow>& rows, const OrderTable& orders, std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["format"] = "mlsig-table-rows";
  doc["version"] = 1;
  nlohmann::ordered_json jorders = nlohmann::ordered_json::object();
  for (const auto& [name, o] : orders) jorders[name] = {{"order", o.order}, {"source", o.source}};
  doc["constituent_orders"] = jorders;
  nlohmann::ordered_json jrows = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["group"] = r.group;
    j["order"] = r.order;
    j["stabilizer"] = r.stabilizer;
    j["constituents"] = r.constituents;
    j["index"] = r.index ? nlohmann::ordered_json(*r.index) : nlohmann::ordered_json(nullptr);
    j["index_factorization"] = r.index_factorization;
    j["blocks"] = r.blocks;
    jrows.push_back(j);
  }
  doc["rows"] = jrows;
  os << doc.dump(2) << "\n";
}

struct RowsFile {
  std::vector<TheoremRow> rows;
  OrderTable orders;
};

inline RowsFile read_rows(std::istream& in, const std::string& source = "<rows>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
  const std::string where = source + ":";
  auto str = [&](const nlohmann::json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key) || !obj[key].is_string()) throw ParseError(path + "/" + key + ": expected a string");
    return obj[key].get<std::string>();
  };
  auto strings = [&](const nlohmann::json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key) || !obj[key].is_array()) throw ParseError(path + "/" + key + ": expected an array");
    std::vector<std::string> out;
    for (const auto& v : obj[key]) {
      if (!v.is_string()) throw ParseError(path + "/" + key + ": expected strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  if (!doc.is_object() || doc.value("format", "") != "mlsig-table-rows")
    throw ParseError(where + ": not a rows file (format must be \"mlsig-table-rows\")");
  RowsFile out;
  if (doc.contains("constituent_orders")) {
    const auto& jo = doc["constituent_orders"];
    if (!jo.is_object()) throw ParseError(where + "/constituent_orders: expected an object");
    for (const auto& [name, v] : jo.items()) {
      const std::string p = where + "/constituent_orders/" + name;
      out.orders[name] = {str(v, "order", p), v.contains("source") ? str(v, "source", p) : ""};
    }
  }
  if (!doc.contains("rows") || !doc["rows"].is_array()) throw ParseError(where + "/rows: expected an array");
  for (std::size_t i = 0; i < doc["rows"].size(); ++i) {
    const auto& j = doc["rows"][i];
    const std::string p = where + "/rows/" + std::to_string(i);
    if (!j.is_object()) throw ParseError(p + ": expected an object");
    TheoremRow r;
    r.group = str(j, "group", p);
    r.order = str(j, "order", p);
    r.stabilizer = str(j, "stabilizer", p);
    r.constituents = strings(j, "constituents", p);
    if (j.contains("index") && !j["index"].is_null()) r.index = str(j, "index", p);
    r.index_factorization = str(j, "index_factorization", p);
    r.blocks = strings(j, "blocks", p);
    out.rows.push_back(std::move(r));
  }
  return out;
}

inline RowsFile read_rows_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_rows(in, path);
}

}  // namespace mlsig
