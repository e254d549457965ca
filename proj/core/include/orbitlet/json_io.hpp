#pragma once

#include "orbitlet/algebra.hpp"
#include "orbitlet/atoms.hpp"
#include "orbitlet/embeddedness.hpp"
#include "orbitlet/groups.hpp"
#include "orbitlet/orbit.hpp"
#include "orbitlet/transform.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace orbitlet::json_io {

using nlohmann::json;

inline constexpr const char* kSchema = "orbitlet/1";

// Parses a file; syntax errors become ParseError with line and column.
json load_file(const std::filesystem::path& path);
json parse_text(const std::string& text, const std::string& origin = "<input>");

// Algebra: {"dim": n, "tensor": n x n x n nested array, "unit": [...] | "unit_index": k, "labels": [...]}
// or {"nilpotent": {"dim": m, "tensor": ...}}. Entries are numbers or rational strings like "-1/2".
algebra::StructureConstants algebra_from_json(const json& j);
json algebra_to_json(const algebra::StructureConstants& a);

// Group: {"family": "shearlet2d", "c": 0.5}, {"family": "diagonal"|"similitude", "dim": d},
// {"family": "catalog", "dim": d, "name": "standard"}, {"family": "standard_shearlet"|"toeplitz_shearlet",
// "dim": d}, {"family": "generalized_shearlet",
// "basis": [...], "y": [...]}, {"family": "algebra_shearlet", "algebra": {...}, "y": [...]},
// {"family": "abelian", "algebra": {...}}, {"family": "direct_product", "factors": [...]}.
groups::GroupSpec group_from_json(const json& j);
json group_to_json(const groups::GroupSpec& g);

// {"p": 2, "q": 2, "s": 0, "weight": "max_delta" | {"power": k}}; "inf" allowed for p and q.
embeddedness::WeightSpec weight_from_json(const json& j);
json weight_to_json(const embeddedness::WeightSpec& w);

embeddedness::ExponentSet exponents_from_json(const json& j);
json to_json(const embeddedness::ExponentSet& e);
json to_json(const embeddedness::EmbeddingReport& r);
json to_json(const embeddedness::EmpiricalReport& r);
json to_json(const algebra::InvariantRecord& r);
json to_json(const groups::ValidationReport& r);
json to_json(const atoms::SpectrumProbe& p);
json to_json(const atoms::AdmissibilityReport& r);
json to_json(const orbit::EnvelopeValue& v);

// {"operator": "first-partial", "r": 2, "base": [{"degree": 5, "lo": -1, "hi": 1}, ...]}
json atom_to_json(const atoms::Atom& a);
atoms::Atom atom_from_json(const json& j);

transform::DilationSampling sampling_from_json(const json& j);
json sampling_to_json(const transform::DilationSampling& s);

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);
json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j);

// Non-finite doubles serialize as the strings "inf", "-inf" and "nan".
json number(double x);
double number_from_json(const json& j, const std::string& field);

}  // namespace orbitlet::json_io
