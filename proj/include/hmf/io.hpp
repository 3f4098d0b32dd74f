#pragma once

#include <string>

#include "hmf/stability.hpp"

namespace hmf {

// JSON exchange (nlohmann behind the scenes; declarations keep the header
// light).  All numbers travel as exact strings, never floats.

std::string field_element_to_json(const FieldElement& e);
FieldElement field_element_from_json(const std::string& j);

std::string series_to_json(const AdelicSeries& f);
AdelicSeries series_from_json(const std::string& j);

std::string report_to_json(const StabilityReport& rep);
std::string report_to_text(const StabilityReport& rep);

// Character construction from a JSON config:
//   {"modulus": "a.b.c", "kind": "trivial"|"quadratic"|"genus"|"table",
//    "ring": descriptor, "table": [{"prime": label, "value": ...}],
//    "nontrivial_class_values": [...], "bound": n}
IdealCharacter character_from_json(std::shared_ptr<const FieldContext> fc,
                                   const std::string& j);

// Eisenstein spec:
//   {"eta": charcfg, "psi": charcfg, "weight": k, "constant": [...],
//    "ring": descriptor, "bound": B, "scale": "12"}
EisensteinSpec eisenstein_spec_from_json(std::shared_ptr<const FieldContext> fc,
                                         const std::string& j);

// Basis files: header + series payloads sharing it.
struct BasisFile {
  Int field_d;
  Ideal level;
  WeightVector weight;
  Ring ring;
  long bound = 0;
  bool cuspidal = false;
  std::vector<Ideal> classes;  // representative labels
  std::vector<AdelicSeries> series;
};

struct BasisValidation {
  bool ok = true;
  std::vector<std::string> messages;
  std::vector<bool> hecke_closure;  // per series, when the spot check ran
};

std::string basis_file_to_json(const BasisFile& bf);
BasisFile basis_file_from_json(const std::string& j);
BasisFile ingest_basis(const std::string& path, BasisValidation* validation = nullptr,
                       const IdealCharacter* closure_eps = nullptr);

// Table-1-shaped CSV (norm, generator, a_p per form) and Table-2-shaped CSV
// (value, absolute and relative frequency per form); deterministic order.
std::string eigenvalue_table_csv(const std::vector<Eigenform>& forms, long prime_norm_max);
std::string frequency_table_csv(const std::vector<Eigenform>& forms, long prime_norm_max);

// Full run configuration (multiplier, basis, ring, level, characters).
RunInputs run_inputs_from_json(const std::string& j, const std::string& base_dir);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hmf
