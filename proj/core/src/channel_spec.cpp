#include "dnc/channel_spec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "dnc/error.hpp"

namespace dnc {

namespace {

using Json = nlohmann::ordered_json;

bool name_is_valid(std::string_view name) {
  if (name.empty()) return false;
  for (std::string_view bad : {" ", "\t", "\n", "\r", "(", ")", "|", "*", "ε", "·"})
    if (name.find(bad) != std::string_view::npos) return false;
  return true;
}

const Json& member(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(where, std::string("missing field '") + key + "'");
  return *it;
}

void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> known,
                         const std::string& where) {
  for (const auto& [k, v] : obj.items())
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw SpecError(where + "/" + k, "unknown field");
}

BasisPtr parse_atoms(const Json& atoms) {
  if (!atoms.is_object()) throw SpecError("/atoms", "expected an object of name -> positive number");
  std::vector<WeightAtom> out;
  for (const auto& [name, value] : atoms.items()) {
    const std::string where = "/atoms/" + name;
    if (!name_is_valid(name)) throw SpecError(where, "invalid atom name");
    if (!value.is_number()) throw SpecError(where, "atom value must be a number");
    const double v = value.get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw SpecError(where, "non-positive weight atom");
    out.push_back({name, v});
  }
  if (out.empty()) throw SpecError("/atoms", "at least one weight atom is required");
  return WeightBasis::make(std::move(out));
}

Symbol parse_symbol(const Json& js, const WeightBasis& basis, const std::string& where) {
  if (!js.is_object()) throw SpecError(where, "symbol must be an object");
  reject_unknown_keys(js, {"name", "weight"}, where);
  const Json& name = member(js, "name", where);
  if (!name.is_string()) throw SpecError(where + "/name", "symbol name must be a string");
  Symbol sym{name.get<std::string>(), {}};
  if (!name_is_valid(sym.name))
    throw SpecError(where + "/name", "symbol names must be nonempty and free of whitespace, "
                                     "parentheses, '|', '*', 'ε' and '·'");

  const Json& weight = member(js, "weight", where);
  if (!weight.is_object()) throw SpecError(where + "/weight", "weight must be an object atom -> multiplicity");
  std::vector<std::uint32_t> mult(basis.size(), 0);
  for (const auto& [atom, k] : weight.items()) {
    const std::string wloc = where + "/weight/" + atom;
    const auto idx = basis.index_of(atom);
    if (!idx) throw SpecError(wloc, "unknown weight atom");
    if (!k.is_number_integer()) throw SpecError(wloc, "multiplicity must be an integer");
    if (k.is_number_unsigned() ? k.get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()
                               : (k.get<std::int64_t>() < 0 ||
                                  k.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()))
      throw SpecError(wloc, "multiplicity must be a nonnegative 32-bit integer");
    mult[*idx] = static_cast<std::uint32_t>(k.get<std::int64_t>());
  }
  sym.weight = WeightVector(std::move(mult));
  if (!(sym.weight.value(basis) > 0.0)) throw SpecError(where + "/weight", "non-positive symbol weight");
  return sym;
}

// Rewrites a location relative to an embedded expression ("@N") as
// "<pointer>@N".
[[noreturn]] void rethrow_embedded(const SpecError& e, const std::string& pointer) {
  std::string msg = e.what();
  msg.erase(0, e.location().size() + 2);
  throw SpecError(pointer + e.location(), msg);
}

ConstraintKind parse_constraint(const Json& js, const std::vector<std::string>& names) {
  const std::string where = "/constraint";
  if (!js.is_object()) throw SpecError(where, "constraint must be an object");
  const Json& type = member(js, "type", where);
  if (!type.is_string()) throw SpecError(where + "/type", "constraint type must be a string");
  const std::string t = type.get<std::string>();

  if (t == "free") {
    reject_unknown_keys(js, {"type"}, where);
    return FreeConstraint{};
  }
  if (t == "forbidden") {
    reject_unknown_keys(js, {"type", "patterns"}, where);
    const Json& pats = member(js, "patterns", where);
    if (!pats.is_array() || pats.empty())
      throw SpecError(where + "/patterns", "expected a nonempty array of pattern strings");
    ForbiddenPatterns fp;
    for (std::size_t i = 0; i < pats.size(); ++i) {
      const std::string ploc = where + "/patterns/" + std::to_string(i);
      if (!pats[i].is_string()) throw SpecError(ploc, "pattern must be a string");
      try {
        fp.patterns.push_back(tokenize_pattern(pats[i].get<std::string>(), names));
      } catch (const SpecError& e) {
        rethrow_embedded(e, ploc);
      }
    }
    return fp;
  }
  if (t == "regex") {
    reject_unknown_keys(js, {"type", "expr", "unambiguous"}, where);
    const Json& expr = member(js, "expr", where);
    if (!expr.is_string()) throw SpecError(where + "/expr", "regex expression must be a string");
    auto ua = js.find("unambiguous");
    if (ua == js.end() || !ua->is_boolean() || !ua->get<bool>())
      throw SpecError(where + "/unambiguous",
                      "regex constraints must declare \"unambiguous\": true");
    RegexConstraint rc;
    try {
      rc.expr = parse_regex(expr.get<std::string>(), names);
    } catch (const SpecError& e) {
      rethrow_embedded(e, where + "/expr");
    }
    return rc;
  }
  throw SpecError(where + "/type", "unknown constraint type '" + t + "'");
}

// DOM builder that records the byte offset of any syntax error, including
// number overflow, which the throwing parser reports without a position.
struct LocatingDomParser : nlohmann::detail::json_sax_dom_parser<Json> {
  explicit LocatingDomParser(Json& root) : json_sax_dom_parser(root, false) {}

  template <class Exception>
  bool parse_error(std::size_t position, const std::string&, const Exception& ex) {
    error_byte = position;
    error_message = ex.what();
    return false;
  }

  std::size_t error_byte = 0;
  std::string error_message;
};

ChannelSpec parse_document(const Json& doc) {
  if (!doc.is_object()) throw SpecError("/", "channel document must be a JSON object");
  reject_unknown_keys(doc, {"atoms", "symbols", "constraint"}, "");

  ChannelSpec spec;
  spec.basis = parse_atoms(member(doc, "atoms", "/"));

  const Json& syms = member(doc, "symbols", "/");
  if (!syms.is_array() || syms.empty()) throw SpecError("/symbols", "expected a nonempty array");
  std::set<std::string> seen;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < syms.size(); ++i) {
    const std::string where = "/symbols/" + std::to_string(i);
    Symbol s = parse_symbol(syms[i], *spec.basis, where);
    if (!seen.insert(s.name).second) throw SpecError(where + "/name", "duplicate symbol '" + s.name + "'");
    names.push_back(s.name);
    spec.symbols.push_back(std::move(s));
  }

  spec.constraint = parse_constraint(member(doc, "constraint", "/"), names);
  return spec;
}

}  // namespace

std::optional<std::size_t> ChannelSpec::symbol_index(std::string_view name) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].name == name) return i;
  return std::nullopt;
}

bool ChannelSpec::single_character_names() const {
  return std::all_of(symbols.begin(), symbols.end(), [](const Symbol& s) {
    if (s.name.empty()) return false;
    const auto lead = static_cast<unsigned char>(s.name[0]);
    const std::size_t len = lead < 0x80 ? 1 : (lead & 0xE0) == 0xC0 ? 2 : (lead & 0xF0) == 0xE0 ? 3 : 4;
    return s.name.size() == len;
  });
}

bool ChannelSpec::operator==(const ChannelSpec& other) const {
  const bool bases_equal =
      basis == other.basis || (basis && other.basis && *basis == *other.basis);
  return bases_equal && symbols == other.symbols && constraint == other.constraint;
}

ChannelSpec parse_spec(std::string_view text) {
  Json doc;
  LocatingDomParser sax(doc);
  if (!Json::sax_parse(text.begin(), text.end(), &sax))
    throw SpecError("byte " + std::to_string(sax.error_byte), "syntax error: " + sax.error_message);
  try {
    return parse_document(doc);
  } catch (const Json::exception& e) {
    throw SpecError("/", std::string("malformed document: ") + e.what());
  }
}

std::string render_spec(const ChannelSpec& spec) {
  Json doc;
  Json atoms = Json::object();
  for (const auto& a : spec.basis->atoms()) atoms[a.name] = a.value;
  doc["atoms"] = std::move(atoms);

  Json syms = Json::array();
  for (const auto& s : spec.symbols) {
    Json weight = Json::object();
    for (std::size_t i = 0; i < s.weight.extent(); ++i)
      if (s.weight[i] != 0) weight[(*spec.basis)[i].name] = s.weight[i];
    syms.push_back(Json{{"name", s.name}, {"weight", std::move(weight)}});
  }
  doc["symbols"] = std::move(syms);

  const bool single = spec.single_character_names();
  Json constraint;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, FreeConstraint>) {
          constraint["type"] = "free";
        } else if constexpr (std::is_same_v<T, ForbiddenPatterns>) {
          constraint["type"] = "forbidden";
          Json pats = Json::array();
          for (const auto& p : c.patterns) {
            std::string text;
            for (std::size_t i = 0; i < p.size(); ++i) {
              if (i && !single) text += ' ';
              text += p[i];
            }
            pats.push_back(std::move(text));
          }
          constraint["patterns"] = std::move(pats);
        } else {
          constraint["type"] = "regex";
          constraint["expr"] = render_regex(c.expr, single);
          constraint["unambiguous"] = c.unambiguous;
        }
      },
      spec.constraint);
  doc["constraint"] = std::move(constraint);
  return doc.dump(2) + "\n";
}

}  // namespace dnc
