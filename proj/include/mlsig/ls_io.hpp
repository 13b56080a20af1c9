#pragma once

// LS files. Canonical layout (two-space indent, keys in this order, one
// element image array per line, no trailing whitespace):
//
//   {
//     "degree": 3,
//     "group": "S3",
//     "provenance": {
//       "tag": "chain",
//       "annotations": [
//         {"level": 1, "base_point": 1},
//         {"level": 2, "base_point": 2}
//       ]
//     },
//     "blocks": [
//       [
//         [1, 2, 3],
//         [2, 1, 3],
//         [3, 2, 1]
//       ],
//       ...
//     ]
//   }
//
// Points, levels and parts are 1-based. "group" is omitted when unknown and
// "annotations" when the LS has none. Refined levels carry "part"/"parts";
// a level whose refinement failed carries "refinement": "not_found".

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mlsig/errors.hpp"
#include "mlsig/log_signature.hpp"

namespace mlsig {

namespace detail {

inline std::string quote_json(const std::string& s) { return nlohmann::json(s).dump(); }

inline void write_ls_body(const LogSignature& ls, std::ostream& os, const std::string& pad) {
  const std::string in1 = pad + "  ";
  const std::string in2 = in1 + "  ";
  const std::string in3 = in2 + "  ";
  os << "{\n";
  os << in1 << "\"degree\": " << ls.degree() << ",\n";
  if (ls.group()) os << in1 << "\"group\": " << quote_json(*ls.group()) << ",\n";
  os << in1 << "\"provenance\": {\n";
  os << in2 << "\"tag\": " << quote_json(to_string(ls.provenance()));
  if (!ls.annotations().empty()) {
    os << ",\n" << in2 << "\"annotations\": [\n";
    for (std::size_t i = 0; i < ls.annotations().size(); ++i) {
      const auto& a = ls.annotations()[i];
      os << in3 << "{\"level\": " << a.level + 1 << ", \"base_point\": " << a.base_point + 1;
      if (a.parts != 1) os << ", \"part\": " << a.part + 1 << ", \"parts\": " << a.parts;
      if (a.refinement_failed) os << ", \"refinement\": \"not_found\"";
      os << "}" << (i + 1 < ls.annotations().size() ? ",\n" : "\n");
    }
    os << in2 << "]";
  }
  os << "\n" << in1 << "},\n";
  if (ls.block_count() == 0) {
    os << in1 << "\"blocks\": []\n";
  } else {
    os << in1 << "\"blocks\": [\n";
    for (std::size_t b = 0; b < ls.block_count(); ++b) {
      os << in2 << "[\n";
      const auto& block = ls.block(b);
      for (std::size_t j = 0; j < block.size(); ++j) {
        os << in3 << "[";
        const auto images = block[j].images();
        for (std::size_t x = 0; x < images.size(); ++x) os << (x ? ", " : "") << images[x] + 1;
        os << "]" << (j + 1 < block.size() ? ",\n" : "\n");
      }
      os << in2 << "]" << (b + 1 < ls.block_count() ? ",\n" : "\n");
    }
    os << in1 << "]\n";
  }
  os << pad << "}";
}

inline void require_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(where + ": unexpected key \"" + key + "\"");
  }
}

inline std::int64_t get_int(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ParseError(where + "/" + key + ": expected an integer");
  return v.get<std::int64_t>();
}

inline LogSignature ls_from_json(const nlohmann::json& doc, const std::string& where) {
  if (!doc.is_object()) throw ParseError(where + ": expected an object");
  require_keys(doc, {"degree", "group", "provenance", "blocks"}, where);
  const std::int64_t degree = get_int(doc, "degree", where);
  if (degree < 0) throw ParseError(where + "/degree: negative degree");
  const auto n = static_cast<std::size_t>(degree);

  std::optional<std::string> group;
  if (doc.contains("group")) {
    if (!doc["group"].is_string()) throw ParseError(where + "/group: expected a string");
    group = doc["group"].get<std::string>();
  }

  Provenance provenance = Provenance::manual;
  std::vector<BlockAnnotation> annotations;
  if (doc.contains("provenance")) {
    const auto& prov = doc["provenance"];
    const std::string pw = where + "/provenance";
    if (!prov.is_object()) throw ParseError(pw + ": expected an object");
    require_keys(prov, {"tag", "annotations"}, pw);
    if (!prov.contains("tag") || !prov["tag"].is_string()) throw ParseError(pw + "/tag: expected a string");
    try {
      provenance = provenance_from_string(prov["tag"].get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(pw + "/tag: " + e.what());
    }
    if (prov.contains("annotations")) {
      const auto& arr = prov["annotations"];
      if (!arr.is_array()) throw ParseError(pw + "/annotations: expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string aw = pw + "/annotations/" + std::to_string(i);
        const auto& a = arr[i];
        if (!a.is_object()) throw ParseError(aw + ": expected an object");
        require_keys(a, {"level", "base_point", "part", "parts", "refinement"}, aw);
        BlockAnnotation ann;
        std::int64_t level = get_int(a, "level", aw);
        std::int64_t base = get_int(a, "base_point", aw);
        if (level < 1) throw ParseError(aw + "/level: must be >= 1");
        if (base < 1 || base > degree) throw ParseError(aw + "/base_point: outside 1.." + std::to_string(degree));
        ann.level = static_cast<std::size_t>(level - 1);
        ann.base_point = static_cast<Point>(base - 1);
        if (a.contains("part") || a.contains("parts")) {
          std::int64_t part = get_int(a, "part", aw);
          std::int64_t parts = get_int(a, "parts", aw);
          if (parts < 1 || part < 1 || part > parts) throw ParseError(aw + ": need 1 <= part <= parts");
          ann.part = static_cast<std::size_t>(part - 1);
          ann.parts = static_cast<std::size_t>(parts);
        }
        if (a.contains("refinement")) {
          if (a["refinement"] != "not_found") throw ParseError(aw + "/refinement: expected \"not_found\"");
          ann.refinement_failed = true;
        }
        annotations.push_back(ann);
      }
    }
  }

  if (!doc.contains("blocks") || !doc["blocks"].is_array()) throw ParseError(where + "/blocks: expected an array");
  std::vector<LogSignature::Block> blocks;
  const auto& jblocks = doc["blocks"];
  for (std::size_t b = 0; b < jblocks.size(); ++b) {
    const std::string bw = where + "/blocks/" + std::to_string(b);
    if (!jblocks[b].is_array()) throw ParseError(bw + ": expected an array of elements");
    LogSignature::Block block;
    for (std::size_t j = 0; j < jblocks[b].size(); ++j) {
      const std::string ew = bw + "/" + std::to_string(j);
      const auto& e = jblocks[b][j];
      if (!e.is_array()) throw ParseError(ew + ": expected an image array");
      if (e.size() != n)
        throw ParseError(ew + ": element has " + std::to_string(e.size()) + " images, degree is " + std::to_string(n));
      std::vector<std::int64_t> images;
      for (const auto& v : e) {
        if (!v.is_number_integer()) throw ParseError(ew + ": images must be integers");
        images.push_back(v.get<std::int64_t>());
      }
      try {
        block.push_back(Permutation::from_one_based(images));
      } catch (const DomainError& err) {
        throw ParseError(ew + ": " + err.what());
      }
    }
    blocks.push_back(std::move(block));
  }
  try {
    return LogSignature(n, std::move(blocks), provenance, std::move(annotations), std::move(group));
  } catch (const DomainError& err) {
    throw ParseError(where + ": " + err.what());
  }
}

inline nlohmann::json parse_json_text(std::istream& in, const std::string& source) {
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

}  // namespace detail

inline void write_ls(const LogSignature& ls, std::ostream& os) {
  detail::write_ls_body(ls, os, "");
  os << "\n";
}

inline std::string ls_to_string(const LogSignature& ls) {
  std::ostringstream os;
  write_ls(ls, os);
  return os.str();
}

/// Parses an LS file. Syntax errors report line and column; structural
/// errors report the JSON path of the offending value.
inline LogSignature read_ls(std::istream& in, const std::string& source = "<input>") {
  auto doc = detail::parse_json_text(in, source);
  return detail::ls_from_json(doc, source + ":");
}

inline LogSignature ls_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_ls(in);
}

inline LogSignature read_ls_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_ls(in, path);
}

inline void write_ls_file(const LogSignature& ls, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_ls(ls, out);
}

}  // namespace mlsig
