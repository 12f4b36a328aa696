#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cqlad/circuit.hpp"
#include "cqlad/floquet.hpp"
#include "cqlad/lattice.hpp"

namespace cqlad::netlist {

enum class RecordKind { site, coupling, modulation, ladder, pump, meta };

const char* kind_name(RecordKind kind);

enum class ValueKind { identifier, number };

/// One attribute value.  The original lexeme is kept so a parsed document
/// prints back with its tokens byte-identical; only whitespace is normalized.
struct Value {
  ValueKind kind = ValueKind::number;
  std::string text;
  double number = 0.0;  // meaningful when kind == number
};

struct Field {
  std::string key;
  Value value;
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based, start of the key
};

struct Record {
  RecordKind kind = RecordKind::meta;
  std::vector<Field> fields;
  std::size_t line = 0;
  std::size_t column = 0;  // start of the kind tag's identifier

  /// Value for `key`, or nullptr.  Keys are unique within a record.
  const Value* find(std::string_view key) const;
};

struct Document {
  std::vector<Record> records;
};

struct ParseError {
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based; the source line sliced here starts
                           // with `token`
  std::string message;
  std::string token;       // offending text
};

/// Parse `.qnl` text.  Every non-empty line is a '#' comment or
///   [kind] key=value key=value ...
/// with kind in {site, coupling, modulation, ladder, pump, meta}, keys and
/// identifier values matching [A-Za-z_][A-Za-z0-9_]*, and numbers plain
/// decimal (optional sign, fraction, exponent).  Stops at the first error.
std::variant<Document, ParseError> parse(std::string_view text);

/// Canonical form: one record per line, single spaces, original lexemes,
/// trailing newline per record.  parse(print(doc)) reproduces doc, so
/// print is a fixpoint of parse-then-print.
std::string print(const Document& doc);

struct ValidationError {
  std::size_t line = 0;  // record that failed
  std::string message;
};

/// A document made of one ladder record: geometry plus the built model.
struct LadderInput {
  std::size_t rungs = 0;
  double t_d = 0.0;
  double t_v = 0.0;
  double phi = 0.0;
  lattice::Boundary boundary = lattice::Boundary::open;
  lattice::LatticeModel model;
};

/// A document made of site/coupling/modulation/pump records: a labelled
/// lattice of named modes, the common-frequency drive acting on them, and
/// any pump terms selected against the mode spectrum.
struct CircuitInput {
  std::vector<std::string> names;           // document order
  lattice::LatticeModel model;              // couplings as bonds, onsite zero
  floquet::DriveSpec drive;                 // omega0 per site; omega_m = 0
                                            // when nothing is modulated
  bool modulated = false;
  std::vector<circuit::PumpTerm> pump_terms;
};

using Validated =
    std::variant<LadderInput, CircuitInput, std::vector<ValidationError>>;

/// Cross-record checks: schema per kind, endpoint/target references, ladder
/// exclusivity, and the physical invariants of the built types.  Collects
/// every error instead of stopping at the first.
Validated validate(const Document& doc);

}  // namespace cqlad::netlist
