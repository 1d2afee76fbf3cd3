// SPDX-License-Identifier: Apache-2.0
#include "gradfis/model_io.hpp"

#include <fstream>
#include <sstream>
#include <type_traits>

#include <json.hpp>

#include "gradfis/error.hpp"

namespace gradfis {

namespace {

constexpr int kModelFormatVersion = 1;

nlohmann::json matrix_to_json(const Matrix<double>& matrix) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : matrix.row(r)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json matrix_to_json(const Matrix<int>& matrix) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int v : matrix.row(r)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
Matrix<T> matrix_from_json(const nlohmann::json& node, std::size_t rows,
                           std::size_t cols, const char* field) {
  if (!node.is_array() || node.size() != rows) {
    throw ModelError(std::string("model document: field '") + field +
                     "' must be an array of " + std::to_string(rows) + " rows");
  }
  Matrix<T> matrix(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = node[r];
    if (!row.is_array() || row.size() != cols) {
      throw ModelError(std::string("model document: field '") + field +
                       "' row " + std::to_string(r) + " must hold " +
                       std::to_string(cols) + " values");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const bool ok = std::is_integral_v<T> ? row[c].is_number_integer()
                                            : row[c].is_number();
      if (!ok) {
        throw ModelError(std::string("model document: non-numeric entry in '") +
                         field + "'");
      }
      matrix(r, c) = row[c].get<T>();
    }
  }
  return matrix;
}

std::size_t read_count(const nlohmann::json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_number_unsigned()) {
    throw ModelError(std::string("model document: missing or invalid '") + field +
                     "'");
  }
  return doc[field].get<std::size_t>();
}

}  // namespace

std::string model_to_json(const FuzzyClassifier& model) {
  nlohmann::json doc;
  doc["version"] = kModelFormatVersion;
  doc["num_inputs"] = model.num_inputs;
  doc["num_classes"] = model.num_classes;
  doc["mfs_per_input"] = model.mfs_per_input();
  doc["num_rules"] = model.num_rules();
  doc["seed"] = model.seed;
  doc["centers"] = matrix_to_json(model.bank.centers);
  doc["width_params"] = matrix_to_json(model.bank.width_params);
  doc["antecedents"] = matrix_to_json(model.rules.antecedents);
  doc["consequents"] = matrix_to_json(model.rules.consequents);
  return doc.dump(2);
}

FuzzyClassifier model_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("model document is not valid JSON: ") + e.what());
  }

  try {
    if (read_count(doc, "version") != kModelFormatVersion) {
      throw ModelError("unsupported model document version");
    }
    const std::size_t d_count = read_count(doc, "num_inputs");
    const std::size_t c_count = read_count(doc, "num_classes");
    const std::size_t m_count = read_count(doc, "mfs_per_input");
    const std::size_t r_count = read_count(doc, "num_rules");

    FuzzyClassifier model;
    model.num_inputs = d_count;
    model.num_classes = c_count;
    model.seed = read_count(doc, "seed");
    model.bank.centers =
        matrix_from_json<double>(doc.at("centers"), d_count, m_count, "centers");
    model.bank.width_params = matrix_from_json<double>(
        doc.at("width_params"), d_count, m_count, "width_params");
    model.rules.antecedents =
        matrix_from_json<int>(doc.at("antecedents"), r_count, d_count, "antecedents");
    model.rules.consequents = matrix_from_json<double>(doc.at("consequents"), r_count,
                                                       c_count, "consequents");
    validate(model);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("model document: ") + e.what());
  }
}

void save_model(const FuzzyClassifier& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open model file for writing: " + path.string());
  out << model_to_json(model) << '\n';
}

FuzzyClassifier load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace gradfis
