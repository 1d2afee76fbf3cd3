// SPDX-License-Identifier: Apache-2.0
#include <string>
#include <vector>

#include "gradfis/dataset.hpp"
#include "gradfis/error.hpp"

namespace gradfis {

namespace {

ColumnSpec numeric(std::string name) {
  return {std::move(name), ColumnRole::Feature, ColumnKind::Numeric, {}};
}

ColumnSpec ordinal(std::string name, std::vector<std::string> levels) {
  return {std::move(name), ColumnRole::Feature, ColumnKind::Categorical,
          std::move(levels)};
}

ColumnSpec target(std::string name) {
  return {std::move(name), ColumnRole::Target, ColumnKind::Categorical, {}};
}

ColumnSpec identifier(std::string name) {
  return {std::move(name), ColumnRole::Identifier, ColumnKind::Categorical, {}};
}

DatasetSpec make_german() {
  DatasetSpec spec;
  spec.key = "german";
  spec.display_name = "Statlog (German Credit Data)";
  spec.filename = "german.data";
  spec.url =
      "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/"
      "german/german.data";
  spec.separator = ' ';
  spec.columns = {
      ordinal("checking_status", {"A11", "A12", "A13", "A14"}),
      numeric("duration"),
      ordinal("credit_history", {"A30", "A31", "A32", "A33", "A34"}),
      // Code-numeric order; lexicographic sorting would misplace A410.
      ordinal("purpose", {"A40", "A41", "A42", "A43", "A44", "A45", "A46", "A47",
                          "A48", "A49", "A410"}),
      numeric("credit_amount"),
      ordinal("savings_status", {"A61", "A62", "A63", "A64", "A65"}),
      ordinal("employment", {"A71", "A72", "A73", "A74", "A75"}),
      numeric("installment_rate"),
      ordinal("personal_status", {"A91", "A92", "A93", "A94", "A95"}),
      ordinal("other_debtors", {"A101", "A102", "A103"}),
      numeric("residence_since"),
      ordinal("property", {"A121", "A122", "A123", "A124"}),
      numeric("age"),
      ordinal("other_installment_plans", {"A141", "A142", "A143"}),
      ordinal("housing", {"A151", "A152", "A153"}),
      numeric("existing_credits"),
      ordinal("job", {"A171", "A172", "A173", "A174"}),
      numeric("num_dependents"),
      ordinal("telephone", {"A191", "A192"}),
      ordinal("foreign_worker", {"A201", "A202"}),
      target("class"),
  };
  spec.target_column = "class";
  spec.target_levels = {"1", "2"};
  spec.class_names = {"good", "bad"};
  spec.expected_rows = 1000;
  spec.expected_features = 20;
  spec.expected_classes = 2;
  spec.mfs_per_input = 6;
  spec.num_rules = 85;
  return spec;
}

DatasetSpec make_wdbc() {
  DatasetSpec spec;
  spec.key = "wdbc";
  spec.display_name = "Breast Cancer Wisconsin (Diagnostic)";
  spec.filename = "wdbc.data";
  spec.url =
      "https://archive.ics.uci.edu/ml/machine-learning-databases/"
      "breast-cancer-wisconsin/wdbc.data";
  spec.columns.push_back(identifier("id"));
  spec.columns.push_back(target("diagnosis"));
  const char* base_names[] = {"radius",    "texture",   "perimeter",
                              "area",      "smoothness", "compactness",
                              "concavity", "concave_points", "symmetry",
                              "fractal_dimension"};
  for (const char* suffix : {"mean", "se", "worst"}) {
    for (const char* base : base_names) {
      spec.columns.push_back(numeric(std::string(base) + "_" + suffix));
    }
  }
  spec.target_column = "diagnosis";
  spec.target_levels = {"M", "B"};
  spec.class_names = {"malignant", "benign"};
  spec.expected_rows = 569;
  spec.expected_features = 30;
  spec.expected_classes = 2;
  spec.mfs_per_input = 13;
  spec.num_rules = 202;
  return spec;
}

DatasetSpec make_car() {
  DatasetSpec spec;
  spec.key = "car";
  spec.display_name = "Car Evaluation";
  spec.filename = "car.data";
  spec.url =
      "https://archive.ics.uci.edu/ml/machine-learning-databases/car/car.data";
  spec.columns = {
      ordinal("buying", {"low", "med", "high", "vhigh"}),
      ordinal("maint", {"low", "med", "high", "vhigh"}),
      ordinal("doors", {"2", "3", "4", "5more"}),
      ordinal("persons", {"2", "4", "more"}),
      ordinal("lug_boot", {"small", "med", "big"}),
      ordinal("safety", {"low", "med", "high"}),
      target("class"),
  };
  spec.target_column = "class";
  spec.target_levels = {"unacc", "acc", "good", "vgood"};
  spec.class_names = {"unacc", "acc", "good", "vgood"};
  spec.expected_rows = 1728;
  spec.expected_features = 6;
  spec.expected_classes = 4;
  spec.mfs_per_input = 27;
  spec.num_rules = 128;
  return spec;
}

DatasetSpec make_heart() {
  DatasetSpec spec;
  spec.key = "heart";
  spec.display_name = "Heart Disease";
  spec.filename = "processed.cleveland.data";
  spec.url =
      "https://archive.ics.uci.edu/ml/machine-learning-databases/"
      "heart-disease/processed.cleveland.data";
  spec.columns = {
      numeric("age"),     numeric("sex"),     numeric("cp"),
      numeric("trestbps"), numeric("chol"),   numeric("fbs"),
      numeric("restecg"), numeric("thalach"), numeric("exang"),
      numeric("oldpeak"), numeric("slope"),   numeric("ca"),
      numeric("thal"),    target("num"),
  };
  spec.target_column = "num";
  spec.target_levels = {};  // numeric severity 0..4, then binarized
  spec.class_names = {"absent", "present"};
  spec.target_transform = TargetTransform::HeartPresence;
  spec.drop_columns = {"ca", "thal"};  // the columns with missing values
  spec.expected_rows = 303;
  spec.expected_features = 13;
  spec.expected_classes = 2;
  spec.mfs_per_input = 13;
  spec.num_rules = 300;
  return spec;
}

DatasetSpec make_wine() {
  DatasetSpec spec;
  spec.key = "wine";
  spec.display_name = "Wine";
  spec.filename = "wine.data";
  spec.url =
      "https://archive.ics.uci.edu/ml/machine-learning-databases/wine/wine.data";
  spec.columns = {
      target("class"),
      numeric("alcohol"),
      numeric("malic_acid"),
      numeric("ash"),
      numeric("alcalinity_of_ash"),
      numeric("magnesium"),
      numeric("total_phenols"),
      numeric("flavanoids"),
      numeric("nonflavanoid_phenols"),
      numeric("proanthocyanins"),
      numeric("color_intensity"),
      numeric("hue"),
      numeric("od280_od315"),
      numeric("proline"),
  };
  spec.target_column = "class";
  spec.target_levels = {"1", "2", "3"};
  spec.class_names = {"cultivar_1", "cultivar_2", "cultivar_3"};
  spec.expected_rows = 178;
  spec.expected_features = 13;
  spec.expected_classes = 3;
  spec.mfs_per_input = 13;
  spec.num_rules = 300;
  return spec;
}

}  // namespace

std::span<const DatasetSpec> builtin_specs() {
  static const std::vector<DatasetSpec> specs = {
      make_german(), make_wdbc(), make_car(), make_heart(), make_wine()};
  return specs;
}

const DatasetSpec& spec_by_key(std::string_view key) {
  for (const DatasetSpec& spec : builtin_specs()) {
    if (spec.key == key) return spec;
  }
  std::string known;
  for (const DatasetSpec& spec : builtin_specs()) {
    if (!known.empty()) known += ", ";
    known += spec.key;
  }
  throw ConfigError("unknown dataset '" + std::string(key) + "' (known: " + known +
                    ")");
}

}  // namespace gradfis
