#pragma once

#include <string>

#include "json.hpp"

#include "fuspos/verify.hpp"

namespace fuspos::io {

using ojson = nlohmann::ordered_json;

/// Builds a group from a self-describing spec document:
///   {"kind":"cyclic","n":N} | {"kind":"dihedral","n":N} |
///   {"kind":"symmetric","n":N} | {"kind":"product","factors":[spec,spec]} |
///   {"kind":"table","mul":[[...],...]}
/// Unknown fields are rejected; errors carry the offending field path.
FiniteGroup parse_group_spec(const ojson& spec, const std::string& path = "group");

/// Parses a length document, either {"per_element":[...]} /
/// {"per_class":[...]} or the same wrapped as {"lengths":{...}}.
/// Values may be numbers or decimal strings.
LengthFunction parse_length_doc(const ojson& doc, GroupPtr g,
                                const std::string& path = "lengths");

ojson table_json(const CharacterTable& ct);
ojson fusion_json(const FusionTensor& ft);
ojson decomposition_json(const Decomposition& d);
ojson certificate_json(const CertificateReport& rep);
ojson inequality_json(const InequalitySystem& sys);
ojson scan_json(const ScanReport& rep, double t_max, int samples);
ojson power_json(double residual, double t, int n);
ojson sweep_json(const SweepSummary& s);

/// One row per trial: trial, lengths (';'-joined), conclusion, min_p, argmin_t.
std::string sweep_csv(const SweepSummary& s);

/// Exported decomposition -> term lists; exact round-trip of the export.
std::vector<ExpSum> parse_expsums(const ojson& j);

/// CLI argument helper: inline JSON text, or "@path" to read a file.
ojson load_json_arg(const std::string& arg, const std::string& what);

}  // namespace fuspos::io
