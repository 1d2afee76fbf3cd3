// SPDX-License-Identifier: Apache-2.0
#include "gradfis/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gradfis/error.hpp"
#include "gradfis/rng.hpp"

namespace gradfis {

double softplus(double x) {
  if (x > 0.0) {
    return x + std::log1p(std::exp(-x));
  }
  return std::log1p(std::exp(x));
}

double softplus_inverse(double y) {
  if (!(y > 0.0)) {
    throw ConfigError("softplus_inverse requires a positive argument");
  }
  // log(e^y - 1); the expm1 form is accurate for small y.
  return std::log(std::expm1(y));
}

double logistic(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

FuzzyClassifier init_classifier(std::size_t num_inputs, std::size_t num_classes,
                                std::size_t mfs_per_input, std::size_t num_rules,
                                std::uint64_t seed) {
  if (num_inputs < 1) throw ConfigError("init_classifier: num_inputs must be >= 1");
  if (num_classes < 2) throw ConfigError("init_classifier: num_classes must be >= 2");
  if (mfs_per_input < 1) throw ConfigError("init_classifier: mfs_per_input must be >= 1");
  if (num_rules < 1) throw ConfigError("init_classifier: num_rules must be >= 1");

  const std::size_t d_count = num_inputs;
  const std::size_t m_count = mfs_per_input;

  const double sigma_target =
      m_count > 1 ? 0.5 / static_cast<double>(m_count - 1) : 0.25;
  if (sigma_target <= kSigmaFloor) {
    throw ConfigError("init_classifier: mfs_per_input too large for the width floor");
  }
  const double rho = softplus_inverse(sigma_target - kSigmaFloor);

  FuzzyClassifier model;
  model.num_inputs = num_inputs;
  model.num_classes = num_classes;
  model.seed = seed;
  model.bank.centers = Matrix<double>(d_count, m_count);
  model.bank.width_params = Matrix<double>(d_count, m_count, rho);
  for (std::size_t d = 0; d < d_count; ++d) {
    for (std::size_t m = 0; m < m_count; ++m) {
      model.bank.centers(d, m) =
          m_count > 1 ? static_cast<double>(m) / static_cast<double>(m_count - 1)
                      : 0.5;
    }
  }

  // Antecedents drawn rule-major, input-minor; this order is part of the
  // determinism contract.
  SplitMix64 rng(seed);
  model.rules.antecedents = Matrix<int>(num_rules, d_count);
  for (std::size_t r = 0; r < num_rules; ++r) {
    for (std::size_t d = 0; d < d_count; ++d) {
      model.rules.antecedents(r, d) = static_cast<int>(rng.below(m_count));
    }
  }
  model.rules.consequents = Matrix<double>(num_rules, num_classes, 0.0);
  return model;
}

FuzzyClassifier init_classifier_from_data(std::size_t num_inputs,
                                          std::size_t num_classes,
                                          std::size_t mfs_per_input,
                                          std::size_t num_rules, std::uint64_t seed,
                                          const Matrix<double>& train_features) {
  if (train_features.rows() == 0) {
    throw DataError("init_classifier_from_data: empty training set");
  }
  if (train_features.cols() != num_inputs) {
    throw ShapeError("init_classifier_from_data: feature width mismatch");
  }
  FuzzyClassifier model =
      init_classifier(num_inputs, num_classes, mfs_per_input, num_rules, seed);

  const double rho = softplus_inverse(kDataInitSigma - kSigmaFloor);
  for (double& v : model.bank.width_params.data()) v = rho;

  SplitMix64 rng(seed);
  for (std::size_t r = 0; r < num_rules; ++r) {
    const auto anchor = train_features.row(
        static_cast<std::size_t>(rng.below(train_features.rows())));
    for (std::size_t d = 0; d < num_inputs; ++d) {
      double best_distance = std::numeric_limits<double>::infinity();
      int best_mf = 0;
      for (std::size_t m = 0; m < mfs_per_input; ++m) {
        const double distance = std::abs(anchor[d] - model.bank.centers(d, m));
        if (distance < best_distance) {
          best_distance = distance;
          best_mf = static_cast<int>(m);
        }
      }
      model.rules.antecedents(r, d) = best_mf;
    }
  }
  return model;
}

void validate(const FuzzyClassifier& model) {
  const std::size_t d_count = model.num_inputs;
  const std::size_t m_count = model.bank.centers.cols();
  if (d_count == 0 || model.num_classes < 2) {
    throw ModelError("model has empty inputs or fewer than two classes");
  }
  if (model.bank.centers.rows() != d_count ||
      model.bank.width_params.rows() != model.bank.centers.rows() ||
      model.bank.width_params.cols() != m_count) {
    throw ModelError("membership bank shapes disagree with the model dimensions");
  }
  if (model.rules.antecedents.cols() != d_count) {
    throw ModelError("antecedent column count does not match the input count");
  }
  if (model.rules.consequents.rows() != model.rules.antecedents.rows() ||
      model.rules.consequents.cols() != model.num_classes) {
    throw ModelError("consequent shape does not match (rules x classes)");
  }
  for (double v : model.bank.centers.data()) {
    if (!std::isfinite(v)) throw ModelError("non-finite membership center");
  }
  for (double v : model.bank.width_params.data()) {
    if (!std::isfinite(v)) throw ModelError("non-finite width parameter");
  }
  for (double v : model.rules.consequents.data()) {
    if (!std::isfinite(v)) throw ModelError("non-finite consequent entry");
  }
  for (std::size_t r = 0; r < model.rules.num_rules(); ++r) {
    for (std::size_t d = 0; d < d_count; ++d) {
      const int a = model.rules.antecedents(r, d);
      if (a < 0 || static_cast<std::size_t>(a) >= m_count) {
        throw ModelError("antecedent index out of range at rule " +
                         std::to_string(r) + ", input " + std::to_string(d));
      }
    }
  }
}

double gaussian_membership(double x, double center, double sigma) {
  if (!(sigma > 0.0)) {
    throw ConfigError("gaussian_membership: sigma must be positive");
  }
  if (!std::isfinite(x) || !std::isfinite(center)) {
    throw DataError("gaussian_membership: non-finite input");
  }
  const double z = (x - center) / sigma;
  return std::exp(-0.5 * z * z);
}

Matrix<double> fuzzify(const FuzzyClassifier& model, std::span<const double> x) {
  if (x.size() != model.num_inputs) {
    throw ShapeError("fuzzify: expected " + std::to_string(model.num_inputs) +
                     " features, got " + std::to_string(x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError("fuzzify: non-finite feature value");
  }
  const std::size_t m_count = model.mfs_per_input();
  Matrix<double> memberships(model.num_inputs, m_count);
  for (std::size_t d = 0; d < model.num_inputs; ++d) {
    for (std::size_t m = 0; m < m_count; ++m) {
      memberships(d, m) =
          gaussian_membership(x[d], model.bank.centers(d, m), model.bank.sigma(d, m));
    }
  }
  return memberships;
}

std::vector<double> firing_strengths(const FuzzyClassifier& model,
                                     const Matrix<double>& memberships) {
  if (memberships.rows() != model.num_inputs ||
      memberships.cols() != model.mfs_per_input()) {
    throw ShapeError("firing_strengths: membership matrix shape mismatch");
  }
  const std::size_t r_count = model.num_rules();
  std::vector<double> firings(r_count, 1.0);
  for (std::size_t r = 0; r < r_count; ++r) {
    double w = 1.0;
    for (std::size_t d = 0; d < model.num_inputs; ++d) {
      const int a = model.rules.antecedents(r, d);
      if (a < 0 || static_cast<std::size_t>(a) >= memberships.cols()) {
        throw ModelError("firing_strengths: antecedent index out of range at rule " +
                         std::to_string(r));
      }
      w *= memberships(d, static_cast<std::size_t>(a));
    }
    firings[r] = w;
  }
  return firings;
}

std::vector<double> normalize_firings(std::span<const double> firings) {
  double total = 0.0;
  for (double w : firings) total += w;
  const double denom = total + kFiringEpsilon;
  std::vector<double> normalized(firings.size());
  for (std::size_t r = 0; r < firings.size(); ++r) {
    normalized[r] = firings[r] / denom;
  }
  return normalized;
}

std::vector<double> softmax(std::span<const double> logits) {
  double max_logit = -std::numeric_limits<double>::infinity();
  for (double z : logits) max_logit = std::max(max_logit, z);
  std::vector<double> probs(logits.size());
  double total = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    probs[c] = std::exp(logits[c] - max_logit);
    total += probs[c];
  }
  for (double& p : probs) p /= total;
  return probs;
}

namespace detail {

void log_firings(const FuzzyClassifier& model, std::span<const double> x,
                 std::vector<double>& out) {
  if (x.size() != model.num_inputs) {
    throw ShapeError("forward: expected " + std::to_string(model.num_inputs) +
                     " features, got " + std::to_string(x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError("forward: non-finite feature value");
  }
  const std::size_t d_count = model.num_inputs;
  const std::size_t m_count = model.mfs_per_input();
  const std::size_t r_count = model.num_rules();

  // log mu(d, m) = -(x_d - c)^2 / (2 sigma^2): no exp, no underflow.
  std::vector<double> log_mu(d_count * m_count);
  for (std::size_t d = 0; d < d_count; ++d) {
    for (std::size_t m = 0; m < m_count; ++m) {
      const double z = (x[d] - model.bank.centers(d, m)) / model.bank.sigma(d, m);
      log_mu[d * m_count + m] = -0.5 * z * z;
    }
  }

  out.assign(r_count, 0.0);
  for (std::size_t r = 0; r < r_count; ++r) {
    double acc = 0.0;
    const auto row = model.rules.antecedents.row(r);
    for (std::size_t d = 0; d < d_count; ++d) {
      const int a = row[d];
      if (a < 0 || static_cast<std::size_t>(a) >= m_count) {
        throw ModelError("forward: antecedent index out of range at rule " +
                         std::to_string(r));
      }
      acc += log_mu[d * m_count + static_cast<std::size_t>(a)];
    }
    out[r] = acc;
  }
}

std::vector<double> normalized_from_log(std::span<const double> log_firings) {
  double max_log = -std::numeric_limits<double>::infinity();
  for (double l : log_firings) max_log = std::max(max_log, l);
  std::vector<double> normalized(log_firings.size(), 0.0);
  if (!std::isfinite(max_log)) {
    return normalized;  // every activation vanished; degenerate all-zero vector
  }
  double total = 0.0;
  for (std::size_t r = 0; r < log_firings.size(); ++r) {
    normalized[r] = std::exp(log_firings[r] - max_log);
    total += normalized[r];
  }
  for (double& w : normalized) w /= total;
  return normalized;
}

}  // namespace detail

ForwardResult forward(const FuzzyClassifier& model, std::span<const double> x) {
  std::vector<double> logs;
  detail::log_firings(model, x, logs);

  ForwardResult result;
  result.firings = detail::normalized_from_log(logs);
  result.logits.assign(model.num_classes, 0.0);
  for (std::size_t r = 0; r < model.num_rules(); ++r) {
    const double w = result.firings[r];
    if (w == 0.0) continue;
    const auto q = model.rules.consequents.row(r);
    for (std::size_t c = 0; c < model.num_classes; ++c) {
      result.logits[c] += w * q[c];
    }
  }
  result.probs = softmax(result.logits);
  return result;
}

int predict(const FuzzyClassifier& model, std::span<const double> x) {
  const ForwardResult result = forward(model, x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < result.probs.size(); ++c) {
    if (result.probs[c] > result.probs[best]) best = c;
  }
  return static_cast<int>(best);
}

}  // namespace gradfis
