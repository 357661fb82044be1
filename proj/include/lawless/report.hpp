#pragma once
//
// JSON plumbing shared by the file formats and the CLI: complex values are
// [re, im] pairs, matrices are nested row arrays, reports embed tool name,
// version and the fully resolved configuration.  nlohmann::json keeps object
// keys in sorted order and prints shortest round-trip doubles, so identical
// inputs serialize to identical bytes.
//
#include <string>

#include <nlohmann/json.hpp>

#include "lawless/state_geometry.hpp"

namespace lawless {

using Json = nlohmann::json;

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);  // SchemaError

Json vector_to_json(const Vec& v);
Vec vector_from_json(const Json& j);

Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json real_matrix_to_json(const Eigen::MatrixXd& m);

Json make_report(const std::string& subcommand, Json config, Json results);

std::string read_text_file(const std::string& path);  // FileNotFound
void write_text_file(const std::string& path, const std::string& content);

// Verbosity from the LAWLESS_LOG environment variable: quiet (default),
// info, or debug.  Messages go to stderr so report bytes stay clean.
int log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace lawless
