#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scr1d/junction.hpp"

namespace scr1d {

// Junction documents use device-lab units: concentrations in cm^-3, lengths
// in um, voltages in V. Conversion to SI happens in one place, to_si().

struct AbruptDoc {
  double n_a_cm3;
  double n_d_cm3;
  double x_j_um;
};

struct LinearDoc {
  double a_cm3_per_um;
  double x_j_um;
};

struct GaussianDoc {
  double c0_cm3;
  double l_um;
  double n_b_cm3;
};

struct TabulatedDoc {
  struct Point {
    double x_um;
    double n_cm3;
  };
  std::vector<Point> points;
};

struct MaterialDoc {
  double eps_r;
  double t_k;
  double n_i_cm3;
};

struct JunctionDocument {
  std::variant<AbruptDoc, LinearDoc, GaussianDoc, TabulatedDoc> profile;
  MaterialDoc material;
  std::optional<double> v_bi_override_v;
};

/// Parses the JSON text of a junction document.
///
/// Expected shape:
///   {
///     "profile":  {"type": "abrupt" | "linear" | "gaussian" | "tabulated",
///                  ...type-specific fields...},
///     "material": {"eps_r": ..., "T_K": ..., "n_i_cm3": ...},
///     "v_bi_override_V": ...   (optional)
///   }
/// Throws MalformedDocument on invalid JSON or a missing/mistyped field.
JunctionDocument parse_document(const std::string& text);

/// Reads and parses the file at `path`; MalformedDocument if unreadable.
JunctionDocument load_document(const std::string& path);

/// Serializes a document back to canonical JSON (fixed key order, shortest
/// round-trip number formatting, trailing newline). parse_document of the
/// result reproduces the document field for field.
std::string emit_document(const JunctionDocument& doc);

bool documents_equal(const JunctionDocument& a, const JunctionDocument& b);

/// Converts lab units to SI and builds the validated JunctionSpec.
JunctionSpec to_si(const JunctionDocument& doc);

}  // namespace scr1d
