#include "cqlad/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>

namespace cqlad::netlist {
namespace {

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !ident_start(s[0])) return false;
  for (char c : s)
    if (!ident_char(c)) return false;
  return true;
}

/// [+-]? (digits [. digits*] | . digits+) ([eE] [+-]? digits+)?
bool is_number_shape(std::string_view s) {
  std::size_t i = 0;
  const auto digit = [&] {
    return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]));
  };
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t mantissa = 0;
  while (digit()) ++i, ++mantissa;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (digit()) ++i, ++mantissa;
  }
  if (mantissa == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exponent = 0;
    while (digit()) ++i, ++exponent;
    if (exponent == 0) return false;
  }
  return i == s.size();
}

bool line_ws(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::optional<RecordKind> lookup_kind(std::string_view s) {
  if (s == "site") return RecordKind::site;
  if (s == "coupling") return RecordKind::coupling;
  if (s == "modulation") return RecordKind::modulation;
  if (s == "ladder") return RecordKind::ladder;
  if (s == "pump") return RecordKind::pump;
  if (s == "meta") return RecordKind::meta;
  return std::nullopt;
}

std::optional<ParseError> parse_line(std::string_view line, std::size_t line_no,
                                     Document& doc) {
  std::size_t i = 0;
  while (i < line.size() && line_ws(line[i])) ++i;
  if (i == line.size() || line[i] == '#') return std::nullopt;

  const std::size_t tag_start = i;
  while (i < line.size() && !line_ws(line[i])) ++i;
  const std::string_view tag = line.substr(tag_start, i - tag_start);
  const std::size_t tag_col = tag_start + 1;

  if (tag[0] != '[') {
    std::string token(tag);
    return ParseError{line_no, tag_col,
                      fmt("expected a '[kind]' record tag, got '%s'",
                          token.c_str()),
                      std::move(token)};
  }
  const std::size_t rb = tag.find(']');
  if (rb == std::string_view::npos)
    return ParseError{line_no, tag_col, "record tag is missing ']'",
                      std::string(tag)};
  const std::string kind_text(tag.substr(1, rb - 1));
  const std::size_t kind_col = tag_col + 1;
  if (!is_identifier(kind_text)) {
    if (kind_text.empty())
      return ParseError{line_no, tag_col, "empty record tag",
                        std::string(tag)};
    return ParseError{line_no, kind_col,
                      fmt("invalid record kind '%s'", kind_text.c_str()),
                      kind_text};
  }
  const auto kind = lookup_kind(kind_text);
  if (!kind)
    return ParseError{line_no, kind_col,
                      fmt("unknown record kind '%s'", kind_text.c_str()),
                      kind_text};
  if (rb + 1 != tag.size()) {
    std::string token(tag.substr(rb + 1));
    return ParseError{line_no, tag_col + rb + 1,
                      fmt("stray text '%s' after record tag", token.c_str()),
                      std::move(token)};
  }

  Record rec;
  rec.kind = *kind;
  rec.line = line_no;
  rec.column = kind_col;

  while (true) {
    while (i < line.size() && line_ws(line[i])) ++i;
    if (i == line.size()) break;
    const std::size_t word_start = i;
    while (i < line.size() && !line_ws(line[i])) ++i;
    const std::string_view word = line.substr(word_start, i - word_start);
    const std::size_t word_col = word_start + 1;

    const std::size_t eq = word.find('=');
    if (eq == std::string_view::npos) {
      std::string token(word);
      return ParseError{line_no, word_col,
                        fmt("stray token '%s' (expected key=value)",
                            token.c_str()),
                        std::move(token)};
    }
    const std::string key(word.substr(0, eq));
    if (!is_identifier(key)) {
      std::string token(key.empty() ? std::string(word) : key);
      return ParseError{line_no, word_col,
                        fmt("invalid key '%s'", token.c_str()),
                        std::move(token)};
    }
    if (rec.find(key))
      return ParseError{line_no, word_col,
                        fmt("duplicate key '%s'", key.c_str()), key};

    const std::string_view val = word.substr(eq + 1);
    const std::size_t val_col = word_col + eq + 1;
    if (val.empty())
      return ParseError{line_no, word_col,
                        fmt("missing value for key '%s'", key.c_str()),
                        std::string(word)};

    Value value;
    if (is_identifier(val)) {
      value.kind = ValueKind::identifier;
      value.text = std::string(val);
    } else {
      std::string text(val);
      if (!is_number_shape(val)) {
        const char* what = ident_start(val[0]) ? "malformed value '%s'"
                                               : "malformed number '%s'";
        return ParseError{line_no, val_col, fmt(what, text.c_str()),
                          std::move(text)};
      }
      char* end = nullptr;
      const double x = std::strtod(text.c_str(), &end);
      if (end != text.c_str() + text.size() || !std::isfinite(x))
        return ParseError{line_no, val_col,
                          fmt("malformed number '%s': out of range",
                              text.c_str()),
                          std::move(text)};
      value.kind = ValueKind::number;
      value.text = std::move(text);
      value.number = x;
    }
    rec.fields.push_back(
        Field{key, std::move(value), line_no, word_col});
  }

  doc.records.push_back(std::move(rec));
  return std::nullopt;
}

}  // namespace

const char* kind_name(RecordKind kind) {
  switch (kind) {
    case RecordKind::site: return "site";
    case RecordKind::coupling: return "coupling";
    case RecordKind::modulation: return "modulation";
    case RecordKind::ladder: return "ladder";
    case RecordKind::pump: return "pump";
    case RecordKind::meta: return "meta";
  }
  return "?";
}

const Value* Record::find(std::string_view key) const {
  for (const Field& f : fields)
    if (f.key == key) return &f.value;
  return nullptr;
}

std::variant<Document, ParseError> parse(std::string_view text) {
  Document doc;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t eol = text.find('\n', offset);
    const std::size_t end = eol == std::string_view::npos ? text.size() : eol;
    ++line_no;
    if (auto err = parse_line(text.substr(offset, end - offset), line_no, doc))
      return *err;
    if (eol == std::string_view::npos) break;
    offset = eol + 1;
  }
  return doc;
}

std::string print(const Document& doc) {
  std::string out;
  for (const Record& rec : doc.records) {
    out += '[';
    out += kind_name(rec.kind);
    out += ']';
    for (const Field& f : rec.fields) {
      out += ' ';
      out += f.key;
      out += '=';
      out += f.value.text;
    }
    out += '\n';
  }
  return out;
}

namespace {

struct KeyRule {
  const char* key;
  ValueKind kind;
  bool required;
};

const std::vector<KeyRule>& rules_for(RecordKind kind) {
  static const std::vector<KeyRule> site{{"name", ValueKind::identifier, true},
                                         {"omega", ValueKind::number, true}};
  static const std::vector<KeyRule> coupling{
      {"from", ValueKind::identifier, true},
      {"to", ValueKind::identifier, true},
      {"J", ValueKind::number, true}};
  static const std::vector<KeyRule> modulation{
      {"target", ValueKind::identifier, true},
      {"depth", ValueKind::number, true},
      {"omega_m", ValueKind::number, true},
      {"phase", ValueKind::number, false}};
  static const std::vector<KeyRule> ladder{
      {"N", ValueKind::number, true},
      {"td", ValueKind::number, true},
      {"tv", ValueKind::number, true},
      {"phi", ValueKind::number, true},
      {"boundary", ValueKind::identifier, false}};
  static const std::vector<KeyRule> pump{
      {"freq", ValueKind::number, true},
      {"phase", ValueKind::number, false},
      {"tolerance", ValueKind::number, false}};
  static const std::vector<KeyRule> meta{{"version", ValueKind::number, true}};
  switch (kind) {
    case RecordKind::site: return site;
    case RecordKind::coupling: return coupling;
    case RecordKind::modulation: return modulation;
    case RecordKind::ladder: return ladder;
    case RecordKind::pump: return pump;
    case RecordKind::meta: return meta;
  }
  return meta;
}

}  // namespace

Validated validate(const Document& doc) {
  std::vector<ValidationError> errs;
  const auto fail = [&](std::size_t line, std::string msg) {
    errs.push_back(ValidationError{line, std::move(msg)});
  };

  // Per-record schema: known keys, value kinds, required keys.
  for (const Record& rec : doc.records) {
    const auto& rules = rules_for(rec.kind);
    for (const Field& f : rec.fields) {
      const KeyRule* rule = nullptr;
      for (const KeyRule& r : rules)
        if (f.key == r.key) rule = &r;
      if (!rule) {
        fail(f.line, fmt("unknown key '%s' in %s record", f.key.c_str(),
                         kind_name(rec.kind)));
      } else if (f.value.kind != rule->kind) {
        fail(f.line, fmt("key '%s' in %s record must be %s", f.key.c_str(),
                         kind_name(rec.kind),
                         rule->kind == ValueKind::number ? "a number"
                                                         : "an identifier"));
      }
    }
    for (const KeyRule& r : rules)
      if (r.required && !rec.find(r.key))
        fail(rec.line, fmt("%s record is missing key '%s'",
                           kind_name(rec.kind), r.key));
  }
  if (!errs.empty()) return errs;

  std::vector<const Record*> sites, couplings, modulations, pumps, ladders;
  for (const Record& rec : doc.records) {
    switch (rec.kind) {
      case RecordKind::site: sites.push_back(&rec); break;
      case RecordKind::coupling: couplings.push_back(&rec); break;
      case RecordKind::modulation: modulations.push_back(&rec); break;
      case RecordKind::pump: pumps.push_back(&rec); break;
      case RecordKind::ladder: ladders.push_back(&rec); break;
      case RecordKind::meta:
        if (rec.find("version")->number != 1.0)
          fail(rec.line, fmt("unsupported version %s (only version=1)",
                             rec.find("version")->text.c_str()));
        break;
    }
  }
  std::size_t meta_count = 0;
  for (const Record& rec : doc.records)
    if (rec.kind == RecordKind::meta && ++meta_count > 1)
      fail(rec.line, "more than one meta record");

  if (!ladders.empty()) {
    for (const Record* rec : sites)
      fail(rec->line, "mixed document: a site record cannot appear with a "
                      "ladder record");
    for (const Record* rec : couplings)
      fail(rec->line, "mixed document: a coupling record cannot appear with "
                      "a ladder record");
    for (const Record* rec : modulations)
      fail(rec->line, "mixed document: a modulation record cannot appear "
                      "with a ladder record");
    for (const Record* rec : pumps)
      fail(rec->line, "mixed document: a pump record cannot appear with a "
                      "ladder record");
    for (std::size_t k = 1; k < ladders.size(); ++k)
      fail(ladders[k]->line, fmt("more than one ladder record (first is at "
                                 "line %zu)", ladders[0]->line));
  } else if (sites.empty()) {
    fail(doc.records.empty() ? 1 : doc.records.front().line,
         "document defines no ladder and no site records");
  }

  // Ladder path.
  if (!ladders.empty()) {
    const Record& rec = *ladders.front();
    const double n = rec.find("N")->number;
    if (n != std::floor(n) || n < 2.0 || n > 4096.0)
      fail(rec.line, "ladder N must be an integer in [2, 4096]");
    auto boundary = lattice::Boundary::open;
    if (const Value* b = rec.find("boundary")) {
      if (b->text == "periodic") boundary = lattice::Boundary::periodic;
      else if (b->text != "open")
        fail(rec.line, fmt("ladder boundary must be 'open' or 'periodic', "
                           "got '%s'", b->text.c_str()));
    }
    if (!errs.empty()) return errs;
    try {
      LadderInput in;
      in.rungs = static_cast<std::size_t>(n);
      in.t_d = rec.find("td")->number;
      in.t_v = rec.find("tv")->number;
      in.phi = rec.find("phi")->number;
      in.boundary = boundary;
      in.model = lattice::build_creutz(in.rungs, in.t_d, in.t_v, in.phi,
                                       boundary);
      return in;
    } catch (const std::exception& e) {
      fail(rec.line, e.what());
      return errs;
    }
  }

  // Circuit path.
  std::map<std::string, std::size_t> index;
  std::vector<std::string> names;
  std::vector<double> omegas;
  for (const Record* rec : sites) {
    const std::string& name = rec->find("name")->text;
    const double omega = rec->find("omega")->number;
    const auto [it, fresh] = index.emplace(name, names.size());
    if (!fresh) {
      fail(rec->line, fmt("duplicate site name '%s' (first defined at line "
                          "%zu)", name.c_str(), sites[it->second]->line));
      continue;
    }
    if (!(omega > 0.0))
      fail(rec->line, fmt("site '%s': omega must be positive", name.c_str()));
    names.push_back(name);
    omegas.push_back(omega);
  }

  std::set<std::pair<std::size_t, std::size_t>> bonds;
  const auto resolve = [&](const Record* rec,
                           const char* key) -> std::optional<std::size_t> {
    const std::string& name = rec->find(key)->text;
    const auto it = index.find(name);
    if (it == index.end()) {
      fail(rec->line,
           fmt("coupling references undefined site '%s'", name.c_str()));
      return std::nullopt;
    }
    return it->second;
  };
  for (const Record* rec : couplings) {
    const auto i = resolve(rec, "from");
    const auto j = resolve(rec, "to");
    if (!i || !j) continue;
    if (*i == *j) {
      fail(rec->line, fmt("coupling endpoints must differ ('%s' on both "
                          "ends)", rec->find("from")->text.c_str()));
      continue;
    }
    const auto pair = std::minmax(*i, *j);
    if (!bonds.insert({pair.first, pair.second}).second)
      fail(rec->line, fmt("duplicate coupling between '%s' and '%s'",
                          names[pair.first].c_str(),
                          names[pair.second].c_str()));
  }

  const Record* first_mod = nullptr;
  std::set<std::size_t> modulated_sites;
  for (const Record* rec : modulations) {
    const std::string& target = rec->find("target")->text;
    const auto it = index.find(target);
    if (it == index.end()) {
      fail(rec->line,
           fmt("modulation targets undefined site '%s'", target.c_str()));
      continue;
    }
    if (!modulated_sites.insert(it->second).second)
      fail(rec->line,
           fmt("duplicate modulation for site '%s'", target.c_str()));
    if (rec->find("depth")->number < 0.0)
      fail(rec->line, "modulation depth must be nonnegative");
    const double wm = rec->find("omega_m")->number;
    if (!(wm > 0.0)) fail(rec->line, "modulation omega_m must be positive");
    if (!first_mod) {
      first_mod = rec;
    } else if (wm != first_mod->find("omega_m")->number) {
      fail(rec->line, fmt("conflicting modulation frequency %s (line %zu "
                          "set %s)", rec->find("omega_m")->text.c_str(),
                          first_mod->line,
                          first_mod->find("omega_m")->text.c_str()));
    }
  }

  for (std::size_t k = 1; k < pumps.size(); ++k)
    fail(pumps[k]->line, "more than one pump record");
  if (!pumps.empty()) {
    const Record& rec = *pumps.front();
    if (!(rec.find("freq")->number > 0.0))
      fail(rec.line, "pump freq must be positive");
    if (const Value* tol = rec.find("tolerance"))
      if (!(tol->number > 0.0))
        fail(rec.line, "pump tolerance must be positive");
  }
  if (!errs.empty()) return errs;

  CircuitInput in;
  in.names = names;
  in.model = lattice::LatticeModel(names.size());
  for (std::size_t k = 0; k < names.size(); ++k)
    in.model.set_label(k, names[k]);
  in.drive.sites.resize(names.size());
  for (std::size_t k = 0; k < names.size(); ++k)
    in.drive.sites[k].omega0 = omegas[k];
  for (const Record* rec : couplings)
    in.model.add_hopping(index.at(rec->find("from")->text),
                         index.at(rec->find("to")->text),
                         rec->find("J")->number);
  for (const Record* rec : modulations) {
    floquet::SiteDrive& s = in.drive.sites[index.at(rec->find("target")->text)];
    s.depth = rec->find("depth")->number;
    if (const Value* phase = rec->find("phase")) s.phase = phase->number;
  }
  if (first_mod) {
    in.modulated = true;
    in.drive.omega_m = first_mod->find("omega_m")->number;
    try {
      in.drive.validate();
    } catch (const std::exception& e) {
      fail(first_mod->line, e.what());
      return errs;
    }
  }
  if (!pumps.empty()) {
    const Record& rec = *pumps.front();
    std::optional<double> tol;
    if (const Value* t = rec.find("tolerance")) tol = t->number;
    const double phase = rec.find("phase") ? rec.find("phase")->number : 0.0;
    try {
      in.pump_terms = circuit::pump_term_select(omegas, rec.find("freq")->number,
                                                tol, phase);
    } catch (const std::exception& e) {
      fail(rec.line, e.what());
      return errs;
    }
  }
  return in;
}

}  // namespace cqlad::netlist
