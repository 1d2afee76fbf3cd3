// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gradfis/matrix.hpp"
#include "gradfis/model.hpp"

namespace gradfis {

/// ADAM moment buffers for one flat parameter vector.
struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step_count = 0;
  double lr = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState(std::size_t param_count, double lr_, double beta1_ = 0.9,
            double beta2_ = 0.999, double eps_ = 1e-8)
      : first_moment(param_count, 0.0),
        second_moment(param_count, 0.0),
        lr(lr_),
        beta1(beta1_),
        beta2(beta2_),
        eps(eps_) {}
};

struct TrainConfig {
  std::size_t max_epochs = 250;
  double lr = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t seed = 0;
  std::size_t log_every = 0;  // 0 = silent
};

struct TrainRecord {
  std::vector<double> loss;  // one entry per epoch, measured before the update
  double final_train_accuracy = 0.0;
  double wall_clock_seconds = 0.0;
  std::size_t epochs_run = 0;
};

/// Mean of -ln p[label] over the batch. Expects probability rows.
double cross_entropy_loss(const Matrix<double>& probs, std::span<const int> labels);

/// Same loss computed from logits through log-sum-exp; this is the form the
/// training path uses so that saturated probabilities cannot produce inf/nan.
double cross_entropy_from_logits(const Matrix<double>& logits,
                                 std::span<const int> labels);

/// Flat parameter order: centers row-major, then width_params, then
/// consequents. pack/unpack are the single source of truth for that layout.
std::size_t param_count(const FuzzyClassifier& model);
std::vector<double> pack_params(const FuzzyClassifier& model);
void unpack_params(std::span<const double> params, FuzzyClassifier& model);

/// Human-readable location of a flat parameter index, e.g. "centers(2,1)".
std::string param_name(const FuzzyClassifier& model, std::size_t index);

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;  // same layout as pack_params
};

/// Mean cross-entropy over the batch and its exact analytic gradient with
/// respect to every trainable parameter.
LossGrad gradients(const FuzzyClassifier& model, const Matrix<double>& inputs,
                   std::span<const int> labels);

struct GradCheckReport {
  std::vector<double> relative_error;  // per parameter
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  std::string worst_name;
};

/// Central-difference verification of gradients(): for each parameter,
/// relative error |g - g_fd| / max(1e-8, |g| + |g_fd|). h must lie in
/// [1e-7, 1e-3].
GradCheckReport finite_difference_gradcheck(const FuzzyClassifier& model,
                                            const Matrix<double>& inputs,
                                            std::span<const int> labels,
                                            double h = 1e-5);

/// One bias-corrected ADAM update, in place.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state);

struct TrainResult {
  FuzzyClassifier model;
  TrainRecord record;
};

/// Full-batch training for exactly config.max_epochs epochs. No early
/// stopping. Deterministic given the model and inputs. Throws NumericError
/// (with the epoch index) if the loss stops being finite.
TrainResult train(const FuzzyClassifier& initial, const Matrix<double>& inputs,
                  std::span<const int> labels, const TrainConfig& config);

/// Writes "epoch,loss" lines for external plotting.
void write_loss_curve(const TrainRecord& record, const std::filesystem::path& path);

/// Multinomial logistic regression trained by the identical ADAM loop; a
/// sanity baseline for the benchmark harness.
struct LinearModel {
  Matrix<double> weights;    // (class c, input d)
  std::vector<double> bias;  // length C

  std::vector<double> logits(std::span<const double> x) const;
  int predict(std::span<const double> x) const;
};

struct LinearTrainResult {
  LinearModel model;
  TrainRecord record;
};

LinearTrainResult train_baseline_softmax_regression(const Matrix<double>& inputs,
                                                    std::span<const int> labels,
                                                    std::size_t num_classes,
                                                    const TrainConfig& config);

}  // namespace gradfis
