// mlsig: command-line front end.
//
// Exit codes: 0 success, 1 semantic failure (verification failed, row
// flagged, element not in the group), 2 usage or input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlsig/mlsig.hpp"

using namespace mlsig;
using nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_input = 2;

struct Options {
  std::string group;
  std::string group_file;
  std::string ls_path;
  std::string out;
  std::string mode = "auto";
  std::string method = "auto";
  std::uint64_t budget = default_verification_budget;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t cap = RefineOptions{}.candidate_cap;
  std::string element;
  std::size_t size = 0;
  std::string row;
  std::string rows_file;
  std::string key;
  std::string message;
  bool json = false;
};

GeneratorSet resolve_group(const Options& o, const std::optional<std::string>& fallback = std::nullopt) {
  if (!o.group.empty() && !o.group_file.empty()) throw ParseError("give either --group or --group-file, not both");
  if (!o.group_file.empty()) return read_group_file(o.group_file);
  if (!o.group.empty()) return load_group(o.group);
  if (fallback) return load_group(*fallback);
  throw ParseError("no group given (use --group NAME or --group-file PATH)");
}

std::string group_label(const GeneratorSet& g) { return g.name.empty() ? "<unnamed>" : g.name; }

void emit(const Options& o, const ordered_json& record) {
  if (o.json) std::cout << record.dump() << "\n";
}

void write_output(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Error("cannot write " + o.out);
  f << text;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

int cmd_info(const Options& o) {
  GeneratorSet gens = resolve_group(o);
  StabilizerChain chain = build_chain(gens);
  PrimeFactorization f = factor_integer(chain.order());
  if (o.json) {
    emit(o, {{"group", group_label(gens)},
             {"degree", gens.degree},
             {"order", to_string(chain.order())},
             {"factorization", format_factorization(f)},
             {"minimal_length", to_string(minimal_length(f))},
             {"orbit_sizes", chain.orbit_sizes()},
             {"solvable", is_solvable(chain)}});
    return exit_ok;
  }
  std::cout << "group:          " << group_label(gens) << "\n"
            << "degree:         " << gens.degree << "\n"
            << "order:          " << chain.order() << " = " << format_factorization(f) << "\n"
            << "minimal length: " << minimal_length(f) << "\n"
            << "orbit sizes:    " << join(chain.orbit_sizes()) << "\n"
            << "solvable:       " << (is_solvable(chain) ? "yes" : "no") << "\n";
  return exit_ok;
}

int cmd_construct(const Options& o) {
  GeneratorSet gens = resolve_group(o);
  StabilizerChain chain = build_chain(gens);
  RefineOptions ropt;
  ropt.candidate_cap = o.cap;
  if (o.seed_given) ropt.random_seed = o.seed;

  LogSignature ls;
  std::string method = o.method;
  if (o.method == "auto") {
    BuildResult r = build_mls(chain, ropt);
    ls = std::move(r.ls);
    method = r.method;
  } else if (o.method == "chain") {
    ls = chain_ls(chain);
  } else if (o.method == "solvable") {
    ls = mls_solvable(chain);
  } else if (o.method == "cyclic") {
    Permutation x = o.element.empty() ? (chain.generators().empty() ? Permutation(gens.degree) : chain.generators()[0])
                                      : parse_cycles(o.element, gens.degree);
    if (!contains(chain, x)) throw NotMember("element " + format_cycles(x) + " is not in the group");
    std::size_t s = o.size;
    if (s == 0) {
      BigInt ord = element_order(x);
      if (ord != chain.order())
        throw DomainError("element of order " + to_string(ord) + " does not generate the group (order " +
                          to_string(chain.order()) + "); pass --size for a cyclic set");
      s = static_cast<std::size_t>(ord);
    }
    ls = mls_cyclic({x, s});
  } else {
    throw ParseError("unknown method '" + o.method + "'");
  }
  if (!gens.name.empty()) ls.set_group(gens.name);

  const bool covers_group = ls.size_product() == chain.order();
  PrimeFactorization f = factor_integer(ls.size_product());
  const bool minimal = ls.block_count() == 0 || is_minimal(ls, f);
  std::string text = ls_to_string(ls);
  if (!o.out.empty()) write_output(o, text);

  if (o.json) {
    emit(o, {{"group", group_label(gens)},
             {"method", method},
             {"length", ls_length(ls)},
             {"minimal_length", to_string(minimal_length(f))},
             {"minimal", minimal},
             {"blocks", ls.block_sizes()},
             {"covers_group", covers_group},
             {"out", o.out}});
  } else {
    // With no --out the LS goes to stdout and the summary to stderr.
    std::ostream& os = o.out.empty() ? std::cerr : std::cout;
    if (o.out.empty()) std::cout << text;
    os << "method: " << method << "\n"
       << "length: " << ls_length(ls) << " (minimal length " << minimal_length(f) << ")\n"
       << "minimal: " << (minimal ? "true" : "false") << "\n"
       << "blocks: " << join(ls.block_sizes()) << "\n";
    for (const auto& a : ls.annotations())
      if (a.refinement_failed) os << "note: level " << a.level + 1 << " could not be refined\n";
  }
  return exit_ok;
}

void print_report(const Options& o, const VerificationReport& r, const LogSignature& ls, const std::string& group) {
  if (o.json) {
    ordered_json j = {{"group", group},
                      {"passed", r.passed},
                      {"method", to_string(r.method)},
                      {"products_checked", r.products_checked}};
    if (r.collision) {
      j["collision"] = {{"first", r.collision->first.digits}, {"second", r.collision->second.digits}};
    }
    if (!r.deficit.empty()) j["deficit"] = r.deficit;
    emit(o, j);
    return;
  }
  std::cout << "method:   " << to_string(r.method) << "\n"
            << "checked:  " << r.products_checked << "\n"
            << "result:   " << (r.passed ? "PASS" : "FAIL") << "\n";
  if (!r.deficit.empty()) std::cout << "reason:   " << r.deficit << "\n";
  if (r.collision) {
    auto show = [](const FactorizationIndex& idx) {
      std::string s = "(";
      for (std::size_t i = 0; i < idx.digits.size(); ++i) s += (i ? "," : "") + std::to_string(idx.digits[i]);
      return s + ")";
    };
    std::cout << "collision: digits " << show(r.collision->first) << " and " << show(r.collision->second)
              << " give the same element " << format_cycles(reconstruct(ls, r.collision->first)) << "\n";
  }
}

int cmd_verify(const Options& o) {
  if (o.ls_path.empty()) throw ParseError("--ls is required");
  LogSignature ls = read_ls_file(o.ls_path);
  GeneratorSet gens = resolve_group(o, ls.group());
  StabilizerChain chain = build_chain(gens);

  std::string mode = o.mode;
  if (mode == "auto") mode = ls.size_product() <= o.budget || !ls.has_level_annotations() ? "exhaustive" : "structural";
  VerificationReport r;
  if (mode == "exhaustive") {
    try {
      r = verify_exhaustive(ls, chain, o.budget);
    } catch (const BudgetExceeded& e) {
      std::string advice = ls.has_level_annotations() ? " (try --mode structural)" : " (raise --budget)";
      throw BudgetExceeded(e.what() + advice);
    }
  } else if (mode == "structural") {
    r = verify_structural(ls, chain);
  } else {
    throw ParseError("unknown mode '" + o.mode + "'");
  }
  print_report(o, r, ls, group_label(gens));
  return r.passed ? exit_ok : exit_fail;
}

int cmd_factorize(const Options& o) {
  if (o.ls_path.empty()) throw ParseError("--ls is required");
  if (o.element.empty()) throw ParseError("--element is required");
  LogSignature ls = read_ls_file(o.ls_path);
  Permutation g = parse_cycles(o.element, ls.degree());
  if (!o.group.empty() || !o.group_file.empty()) {
    StabilizerChain chain = build_chain(resolve_group(o));
    if (!contains(chain, g)) throw NotMember("element " + format_cycles(g) + " is not in the group");
  }
  FactorizationIndex idx;
  std::string how;
  if (ls.has_level_annotations()) {
    idx = factorize_tame(g, TameIndexer(ls));
    how = "tame";
  } else {
    idx = factorize_generic(g, ls, o.budget);
    how = "generic";
  }
  const bool ok = reconstruct(ls, idx) == g;
  if (o.json) {
    emit(o, {{"element", format_cycles(g)}, {"digits", idx.digits}, {"method", how}, {"reconstructs", ok}});
  } else {
    std::cout << "element:     " << format_cycles(g) << "\n"
              << "digits:      " << join(idx.digits) << "\n"
              << "method:      " << how << "\n"
              << "reconstruct: " << (ok ? "ok" : "MISMATCH") << "\n";
  }
  return ok ? exit_ok : exit_fail;
}

int cmd_table_check(const Options& o) {
  std::vector<TheoremRow> rows = sporadic_rows();
  OrderTable orders = constituent_orders();
  if (!o.rows_file.empty()) {
    RowsFile file = read_rows_file(o.rows_file);
    rows = std::move(file.rows);
    for (auto& [name, ord] : file.orders) orders[name] = ord;
  }
  if (!o.row.empty()) {
    auto r = find_row(o.row, rows);
    if (!r) throw ParseError("no row for group '" + o.row + "'");
    rows = {*r};
  }
  int flagged = 0;
  for (const auto& row : rows) {
    RowReport r = check_theorem_arithmetic(row, orders);
    flagged += r.verdict ? 0 : 1;
    if (o.json) {
      auto opt = [](const std::optional<BigInt>& v) { return v ? ordered_json(to_string(*v)) : ordered_json(nullptr); };
      emit(o, {{"group", r.group},
               {"index_consistent", r.index_consistent},
               {"orbit_stabilizer", r.orbit_stabilizer},
               {"order_well_formed", r.order_well_formed},
               {"verdict", r.verdict ? "pass" : "flagged"},
               {"group_order", opt(r.group_order)},
               {"stabilizer_order", opt(r.stabilizer_order)},
               {"claimed_index", opt(r.claimed_index)},
               {"details", r.details}});
      continue;
    }
    auto mark = [](bool b) { return b ? "ok" : "NO"; };
    std::cout << (r.verdict ? "pass    " : "FLAGGED ") << r.group << "  (a) " << mark(r.index_consistent) << "  (b) "
              << mark(r.orbit_stabilizer) << "  (c) " << mark(r.order_well_formed) << "\n";
    for (const auto& d : r.details) std::cout << "        " << d << "\n";
  }
  if (!o.json) std::cout << rows.size() - flagged << " of " << rows.size() << " rows pass\n";
  return flagged ? exit_fail : exit_ok;
}

int cmd_lengths(const Options& o) {
  for (const auto& s : sporadic_minimal_lengths()) {
    if (o.json)
      emit(o, {{"group", s.group}, {"order", to_string(s.value)}, {"factorization", s.order},
               {"minimal_length", to_string(s.minimal_length)}});
    else
      std::cout << s.group << "\t" << s.order << "\t" << s.minimal_length << "\n";
  }
  return exit_ok;
}

int cmd_pgm_keygen(const Options& o) {
  GeneratorSet gens = resolve_group(o);
  PgmKey key = keygen(build_chain(gens), o.seed, gens.name);
  write_output(o, key_to_string(key));
  if (o.json)
    emit(o, {{"group", group_label(gens)}, {"seed", o.seed}, {"message_space", to_string(key.message_space())}});
  else if (!o.out.empty())
    std::cout << "key for " << group_label(gens) << " (message space " << key.message_space() << ") written to "
              << o.out << "\n";
  return exit_ok;
}

int cmd_pgm_map(const Options& o, bool encrypting) {
  if (o.key.empty()) throw ParseError("--key is required");
  if (o.message.empty()) throw ParseError("--message is required");
  PgmKey key = read_key_file(o.key);
  BigInt m = parse_bigint(o.message);
  BigInt c = encrypting ? key.encrypt(m) : key.decrypt(m);
  if (o.json)
    emit(o, {{encrypting ? "message" : "ciphertext", to_string(m)}, {encrypting ? "ciphertext" : "message", to_string(c)}});
  else
    std::cout << c << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logarithmic signatures for permutation groups"};
  app.require_subcommand(1);
  Options o;

  auto group_flags = [&](CLI::App* sub) {
    sub->add_option("--group", o.group, "built-in group name, or NAME.grp on MLSIG_GROUP_PATH");
    sub->add_option("--group-file", o.group_file, "group generator file");
  };
  auto json_flag = [&](CLI::App* sub) { sub->add_flag("--json", o.json, "one JSON record per line"); };

  auto* info = app.add_subcommand("info", "order, factorization, minimal length and chain of a group");
  group_flags(info);
  json_flag(info);

  auto* construct = app.add_subcommand("construct", "build an LS for a group");
  group_flags(construct);
  construct->add_option("--method", o.method, "auto|chain|solvable|cyclic")
      ->check(CLI::IsMember({"auto", "chain", "solvable", "cyclic"}));
  construct->add_option("--out", o.out, "LS output file (default stdout)");
  construct->add_option("--element", o.element, "cyclic: the element x (default: first generator)");
  construct->add_option("--size", o.size, "cyclic: number of powers s (default: order of x)");
  construct->add_option("--cap", o.cap, "refinement: candidate cap per level");
  construct->add_option("--seed", o.seed, "refinement: randomize candidate order")->each([&](const std::string&) {
    o.seed_given = true;
  });
  json_flag(construct);

  auto* verify = app.add_subcommand("verify", "check that an LS factors every element uniquely");
  group_flags(verify);
  verify->add_option("--ls", o.ls_path, "LS file")->required();
  verify->add_option("--mode", o.mode, "exhaustive|structural|auto")
      ->check(CLI::IsMember({"exhaustive", "structural", "auto"}));
  verify->add_option("--budget", o.budget, "maximum number of products to enumerate");
  json_flag(verify);

  auto* factorize = app.add_subcommand("factorize", "digits of an element under an LS");
  group_flags(factorize);
  factorize->add_option("--ls", o.ls_path, "LS file")->required();
  factorize->add_option("--element", o.element, "element in cycle notation")->required();
  factorize->add_option("--budget", o.budget, "budget for LSs without level structure");
  json_flag(factorize);

  auto* table = app.add_subcommand("table-check", "check the sporadic-group order/index/stabilizer arithmetic");
  table->add_option("--row", o.row, "only this group's row");
  table->add_option("--rows", o.rows_file, "rows file to check instead of the built-in table");
  json_flag(table);

  auto* lengths = app.add_subcommand("lengths", "minimal LS lengths of sixteen sporadic groups");
  json_flag(lengths);

  auto* pgm = app.add_subcommand("pgm", "PGM demonstration cipher");
  pgm->require_subcommand(1);
  auto* keygen_cmd = pgm->add_subcommand("keygen", "generate a key");
  group_flags(keygen_cmd);
  keygen_cmd->add_option("--seed", o.seed, "key seed");
  keygen_cmd->add_option("--out", o.out, "key file (default stdout)");
  json_flag(keygen_cmd);
  auto* encrypt_cmd = pgm->add_subcommand("encrypt", "encrypt an integer message");
  auto* decrypt_cmd = pgm->add_subcommand("decrypt", "decrypt an integer ciphertext");
  for (auto* sub : {encrypt_cmd, decrypt_cmd}) {
    sub->add_option("--key", o.key, "key file")->required();
    sub->add_option("--message", o.message, "integer in [0, |G|)")->required();
    json_flag(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input;
  }

  try {
    if (*info) return cmd_info(o);
    if (*construct) return cmd_construct(o);
    if (*verify) return cmd_verify(o);
    if (*factorize) return cmd_factorize(o);
    if (*table) return cmd_table_check(o);
    if (*lengths) return cmd_lengths(o);
    if (*keygen_cmd) return cmd_pgm_keygen(o);
    if (*encrypt_cmd) return cmd_pgm_map(o, true);
    if (*decrypt_cmd) return cmd_pgm_map(o, false);
  } catch (const NotMember& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_fail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}
