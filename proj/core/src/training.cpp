// SPDX-License-Identifier: Apache-2.0
#include "gradfis/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "gradfis/error.hpp"

namespace gradfis {

namespace {

void check_labels(std::span<const int> labels, std::size_t num_classes,
                  std::size_t batch) {
  if (labels.size() != batch) {
    throw ShapeError("label count does not match the batch size");
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw DataError("label " + std::to_string(y) + " out of range [0, " +
                      std::to_string(num_classes) + ")");
    }
  }
}

double validated_row_loss(std::span<const double> logits, int label) {
  double max_logit = -std::numeric_limits<double>::infinity();
  for (double z : logits) max_logit = std::max(max_logit, z);
  double total = 0.0;
  for (double z : logits) total += std::exp(z - max_logit);
  return max_logit + std::log(total) - logits[static_cast<std::size_t>(label)];
}

long double softplus_ld(long double x) {
  if (x > 0.0L) return x + log1pl(expl(-x));
  return log1pl(expl(x));
}

// Extended-precision evaluation of the training loss, used only as the
// finite-difference reference. At h = 1e-5 the double-rounding noise of the
// difference quotient sits near 1e-11, which the relative-error floor of
// 1e-8 turns into apparent errors of 1e-3 on near-zero gradients; computing
// the reference in long double pushes that noise three orders below the
// 1e-4 comparison tolerance.
long double reference_loss(const FuzzyClassifier& model, const Matrix<double>& inputs,
                           std::span<const int> labels) {
  const std::size_t d_count = model.num_inputs;
  const std::size_t m_count = model.mfs_per_input();
  const std::size_t r_count = model.num_rules();
  const std::size_t c_count = model.num_classes;

  std::vector<long double> log_mu(d_count * m_count);
  std::vector<long double> log_firing(r_count);
  std::vector<long double> norm_firing(r_count);
  std::vector<long double> logits(c_count);

  long double total = 0.0L;
  for (std::size_t b = 0; b < inputs.rows(); ++b) {
    const auto x = inputs.row(b);
    for (std::size_t d = 0; d < d_count; ++d) {
      for (std::size_t m = 0; m < m_count; ++m) {
        const long double sigma =
            static_cast<long double>(kSigmaFloor) +
            softplus_ld(model.bank.width_params(d, m));
        const long double z = (static_cast<long double>(x[d]) -
                               static_cast<long double>(model.bank.centers(d, m))) /
                              sigma;
        log_mu[d * m_count + m] = -0.5L * z * z;
      }
    }
    long double max_log = -std::numeric_limits<long double>::infinity();
    for (std::size_t r = 0; r < r_count; ++r) {
      long double acc = 0.0L;
      for (std::size_t d = 0; d < d_count; ++d) {
        acc += log_mu[d * m_count +
                      static_cast<std::size_t>(model.rules.antecedents(r, d))];
      }
      log_firing[r] = acc;
      max_log = std::max(max_log, acc);
    }
    long double firing_total = 0.0L;
    for (std::size_t r = 0; r < r_count; ++r) {
      norm_firing[r] = expl(log_firing[r] - max_log);
      firing_total += norm_firing[r];
    }
    std::fill(logits.begin(), logits.end(), 0.0L);
    for (std::size_t r = 0; r < r_count; ++r) {
      const long double w = norm_firing[r] / firing_total;
      for (std::size_t c = 0; c < c_count; ++c) {
        logits[c] += w * static_cast<long double>(model.rules.consequents(r, c));
      }
    }
    long double max_logit = logits[0];
    for (long double z : logits) max_logit = std::max(max_logit, z);
    long double exp_total = 0.0L;
    for (long double z : logits) exp_total += expl(z - max_logit);
    total += max_logit + logl(exp_total) -
             logits[static_cast<std::size_t>(labels[b])];
  }
  return total / static_cast<long double>(inputs.rows());
}

void check_train_config(const TrainConfig& config) {
  if (config.max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (!(config.lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (config.beta1 < 0.0 || config.beta1 >= 1.0 || config.beta2 < 0.0 ||
      config.beta2 >= 1.0) {
    throw ConfigError("ADAM betas must lie in [0, 1)");
  }
}

// Shared optimizer loop: f fills grad for the current params and returns the
// loss; params are updated in place, one full-batch step per epoch.
template <typename LossGradFn>
TrainRecord run_adam_loop(std::vector<double>& params, LossGradFn&& f,
                          const TrainConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  AdamState state(params.size(), config.lr, config.beta1, config.beta2, config.eps);
  TrainRecord record;
  record.loss.reserve(config.max_epochs);
  std::vector<double> grad(params.size(), 0.0);

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    double loss = 0.0;
    try {
      loss = f(params, grad);
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " (epoch " +
                         std::to_string(epoch) + ")");
    }
    if (!std::isfinite(loss)) {
      throw NumericError("training diverged: non-finite loss at epoch " +
                         std::to_string(epoch));
    }
    record.loss.push_back(loss);
    adam_step(params, grad, state);
    if (config.log_every != 0 && epoch % config.log_every == 0) {
      std::fprintf(stderr, "epoch %zu  loss %.6f\n", epoch, loss);
    }
  }
  record.epochs_run = config.max_epochs;
  record.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

}  // namespace

double cross_entropy_loss(const Matrix<double>& probs, std::span<const int> labels) {
  if (probs.rows() == 0) throw DataError("cross_entropy_loss: empty batch");
  check_labels(labels, probs.cols(), probs.rows());
  double total = 0.0;
  for (std::size_t b = 0; b < probs.rows(); ++b) {
    const double p = probs(b, static_cast<std::size_t>(labels[b]));
    if (!(p >= 0.0) || p > 1.0 + 1e-9) {
      throw DataError("cross_entropy_loss: probability outside [0, 1]");
    }
    total -= std::log(p);
  }
  return total / static_cast<double>(probs.rows());
}

double cross_entropy_from_logits(const Matrix<double>& logits,
                                 std::span<const int> labels) {
  if (logits.rows() == 0) throw DataError("cross_entropy_from_logits: empty batch");
  check_labels(labels, logits.cols(), logits.rows());
  double total = 0.0;
  for (std::size_t b = 0; b < logits.rows(); ++b) {
    total += validated_row_loss(logits.row(b), labels[b]);
  }
  return total / static_cast<double>(logits.rows());
}

std::size_t param_count(const FuzzyClassifier& model) {
  return model.bank.centers.size() + model.bank.width_params.size() +
         model.rules.consequents.size();
}

std::vector<double> pack_params(const FuzzyClassifier& model) {
  std::vector<double> params;
  params.reserve(param_count(model));
  auto append = [&params](std::span<const double> block) {
    params.insert(params.end(), block.begin(), block.end());
  };
  append(model.bank.centers.data());
  append(model.bank.width_params.data());
  append(model.rules.consequents.data());
  return params;
}

void unpack_params(std::span<const double> params, FuzzyClassifier& model) {
  if (params.size() != param_count(model)) {
    throw ShapeError("unpack_params: parameter vector length mismatch");
  }
  std::size_t offset = 0;
  auto take = [&](std::span<double> block) {
    std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(offset), block.size(),
                block.begin());
    offset += block.size();
  };
  take(model.bank.centers.data());
  take(model.bank.width_params.data());
  take(model.rules.consequents.data());
}

std::string param_name(const FuzzyClassifier& model, std::size_t index) {
  const std::size_t n_centers = model.bank.centers.size();
  const std::size_t n_widths = model.bank.width_params.size();
  const std::size_t m_count = model.mfs_per_input();
  if (index < n_centers) {
    return "centers(" + std::to_string(index / m_count) + "," +
           std::to_string(index % m_count) + ")";
  }
  index -= n_centers;
  if (index < n_widths) {
    return "width_params(" + std::to_string(index / m_count) + "," +
           std::to_string(index % m_count) + ")";
  }
  index -= n_widths;
  const std::size_t c_count = model.num_classes;
  if (index < model.rules.consequents.size()) {
    return "consequents(" + std::to_string(index / c_count) + "," +
           std::to_string(index % c_count) + ")";
  }
  throw ShapeError("param_name: index out of range");
}

LossGrad gradients(const FuzzyClassifier& model, const Matrix<double>& inputs,
                   std::span<const int> labels) {
  const std::size_t batch = inputs.rows();
  if (batch == 0) throw DataError("gradients: empty batch");
  if (inputs.cols() != model.num_inputs) {
    throw ShapeError("gradients: input width does not match the model");
  }
  check_labels(labels, model.num_classes, batch);

  const std::size_t d_count = model.num_inputs;
  const std::size_t m_count = model.mfs_per_input();
  const std::size_t r_count = model.num_rules();
  const std::size_t c_count = model.num_classes;
  const std::size_t n_bank = d_count * m_count;
  const double inv_batch = 1.0 / static_cast<double>(batch);

  LossGrad out;
  out.grad.assign(2 * n_bank + r_count * c_count, 0.0);
  const std::span<double> grad_centers(out.grad.data(), n_bank);
  const std::span<double> grad_widths(out.grad.data() + n_bank, n_bank);
  const std::span<double> grad_consequents(out.grad.data() + 2 * n_bank,
                                           r_count * c_count);

  // Per-epoch precomputation: the widths do not change within a batch.
  std::vector<double> sigma(n_bank), inv_sigma_sq(n_bank), dsigma_drho(n_bank);
  for (std::size_t i = 0; i < n_bank; ++i) {
    const double rho = model.bank.width_params.data()[i];
    const double s = kSigmaFloor + softplus(rho);
    sigma[i] = s;
    inv_sigma_sq[i] = 1.0 / (s * s);
    dsigma_drho[i] = logistic(rho);
  }

  // Workspaces reused across the batch.
  std::vector<double> diff(n_bank);        // x_d - c(d,m)
  std::vector<double> log_mu(n_bank);      // -(diff^2) / (2 sigma^2)
  std::vector<double> d_log_mu(n_bank);    // dL / d log mu(d,m)
  std::vector<double> log_firing(r_count);
  std::vector<double> norm_firing(r_count);
  std::vector<double> d_norm(r_count);     // dL / d w_hat_r
  std::vector<double> logits(c_count);
  std::vector<double> dz(c_count);

  const std::span<const double> centers = model.bank.centers.data();
  const std::span<const double> consequents = model.rules.consequents.data();

  for (std::size_t b = 0; b < batch; ++b) {
    const auto x = inputs.row(b);
    for (std::size_t d = 0; d < d_count; ++d) {
      if (!std::isfinite(x[d])) throw DataError("gradients: non-finite feature value");
      for (std::size_t m = 0; m < m_count; ++m) {
        const std::size_t i = d * m_count + m;
        const double dx = x[d] - centers[i];
        diff[i] = dx;
        log_mu[i] = -0.5 * dx * dx * inv_sigma_sq[i];
      }
    }

    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < r_count; ++r) {
      double acc = 0.0;
      const auto ante = model.rules.antecedents.row(r);
      for (std::size_t d = 0; d < d_count; ++d) {
        acc += log_mu[d * m_count + static_cast<std::size_t>(ante[d])];
      }
      log_firing[r] = acc;
      max_log = std::max(max_log, acc);
    }

    double firing_total = 0.0;
    for (std::size_t r = 0; r < r_count; ++r) {
      norm_firing[r] = std::exp(log_firing[r] - max_log);
      firing_total += norm_firing[r];
    }
    for (std::size_t r = 0; r < r_count; ++r) norm_firing[r] /= firing_total;

    std::fill(logits.begin(), logits.end(), 0.0);
    for (std::size_t r = 0; r < r_count; ++r) {
      const double w = norm_firing[r];
      const double* q = consequents.data() + r * c_count;
      for (std::size_t c = 0; c < c_count; ++c) logits[c] += w * q[c];
    }

    const int label = labels[b];
    out.loss += validated_row_loss(logits, label) * inv_batch;

    // dL/dz_c = (p_c - [c == label]) / batch
    double max_logit = -std::numeric_limits<double>::infinity();
    for (double z : logits) max_logit = std::max(max_logit, z);
    double prob_total = 0.0;
    for (std::size_t c = 0; c < c_count; ++c) {
      dz[c] = std::exp(logits[c] - max_logit);
      prob_total += dz[c];
    }
    for (std::size_t c = 0; c < c_count; ++c) dz[c] /= prob_total;
    dz[static_cast<std::size_t>(label)] -= 1.0;
    for (std::size_t c = 0; c < c_count; ++c) dz[c] *= inv_batch;

    // Consequents and dL/d w_hat in one sweep.
    double inner = 0.0;
    for (std::size_t r = 0; r < r_count; ++r) {
      const double w = norm_firing[r];
      const double* q = consequents.data() + r * c_count;
      double* gq = grad_consequents.data() + r * c_count;
      double dw = 0.0;
      for (std::size_t c = 0; c < c_count; ++c) {
        gq[c] += w * dz[c];
        dw += dz[c] * q[c];
      }
      d_norm[r] = dw;
      inner += dw * w;
    }

    // Normalized firings are a softmax over log firings, hence
    // dL/d log w_r = w_hat_r (dL/d w_hat_r - sum_s dL/d w_hat_s w_hat_s).
    std::fill(d_log_mu.begin(), d_log_mu.end(), 0.0);
    for (std::size_t r = 0; r < r_count; ++r) {
      const double dl = norm_firing[r] * (d_norm[r] - inner);
      if (dl == 0.0) continue;
      const auto ante = model.rules.antecedents.row(r);
      for (std::size_t d = 0; d < d_count; ++d) {
        d_log_mu[d * m_count + static_cast<std::size_t>(ante[d])] += dl;
      }
    }

    // log mu = -(x - c)^2 / (2 sigma^2):
    //   d log mu / dc    = (x - c) / sigma^2
    //   d log mu / dsigma = (x - c)^2 / sigma^3, then dsigma/drho = logistic(rho).
    for (std::size_t i = 0; i < n_bank; ++i) {
      const double g = d_log_mu[i];
      if (g == 0.0) continue;
      grad_centers[i] += g * diff[i] * inv_sigma_sq[i];
      grad_widths[i] += g * diff[i] * diff[i] * inv_sigma_sq[i] / sigma[i] *
                        dsigma_drho[i];
    }
  }

  for (std::size_t i = 0; i < out.grad.size(); ++i) {
    if (!std::isfinite(out.grad[i])) {
      throw NumericError("gradients: non-finite gradient at " + param_name(model, i));
    }
  }
  return out;
}

GradCheckReport finite_difference_gradcheck(const FuzzyClassifier& model,
                                            const Matrix<double>& inputs,
                                            std::span<const int> labels, double h) {
  if (h < 1e-7 || h > 1e-3) {
    throw ConfigError("finite_difference_gradcheck: h must lie in [1e-7, 1e-3]");
  }
  const LossGrad analytic = gradients(model, inputs, labels);
  std::vector<double> params = pack_params(model);
  FuzzyClassifier probe = model;

  auto loss_at = [&](const std::vector<double>& p) {
    unpack_params(p, probe);
    return reference_loss(probe, inputs, labels);
  };

  GradCheckReport report;
  report.relative_error.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + h;
    const long double loss_plus = loss_at(params);
    params[i] = saved - h;
    const long double loss_minus = loss_at(params);
    params[i] = saved;

    const double numeric =
        static_cast<double>((loss_plus - loss_minus) / (2.0L * static_cast<long double>(h)));
    const double g = analytic.grad[i];
    const double rel =
        std::abs(g - numeric) / std::max(1e-8, std::abs(g) + std::abs(numeric));
    report.relative_error[i] = rel;
    if (rel >= report.max_relative_error) {
      report.max_relative_error = rel;
      report.worst_index = i;
    }
  }
  report.worst_name = param_name(model, report.worst_index);
  return report;
}

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw ShapeError("adam_step: parameter, gradient, and state sizes disagree");
  }
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double bias1 = 1.0 - std::pow(state.beta1, t);
  const double bias2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.first_moment[i] = state.beta1 * state.first_moment[i] + (1.0 - state.beta1) * g;
    state.second_moment[i] =
        state.beta2 * state.second_moment[i] + (1.0 - state.beta2) * g * g;
    const double m_hat = state.first_moment[i] / bias1;
    const double v_hat = state.second_moment[i] / bias2;
    params[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
  }
}

TrainResult train(const FuzzyClassifier& initial, const Matrix<double>& inputs,
                  std::span<const int> labels, const TrainConfig& config) {
  check_train_config(config);
  if (inputs.rows() == 0) throw DataError("train: empty dataset");
  check_labels(labels, initial.num_classes, inputs.rows());

  TrainResult result;
  result.model = initial;
  std::vector<double> params = pack_params(result.model);

  result.record = run_adam_loop(
      params,
      [&](const std::vector<double>& p, std::vector<double>& grad) {
        unpack_params(p, result.model);
        LossGrad lg = gradients(result.model, inputs, labels);
        grad = std::move(lg.grad);
        return lg.loss;
      },
      config);
  unpack_params(params, result.model);

  std::size_t correct = 0;
  for (std::size_t b = 0; b < inputs.rows(); ++b) {
    if (predict(result.model, inputs.row(b)) == labels[b]) ++correct;
  }
  result.record.final_train_accuracy =
      static_cast<double>(correct) / static_cast<double>(inputs.rows());
  return result;
}

void write_loss_curve(const TrainRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open loss-curve file: " + path.string());
  out.precision(17);
  for (std::size_t epoch = 0; epoch < record.loss.size(); ++epoch) {
    out << epoch << ',' << record.loss[epoch] << '\n';
  }
}

std::vector<double> LinearModel::logits(std::span<const double> x) const {
  if (x.size() != weights.cols()) {
    throw ShapeError("LinearModel: input width mismatch");
  }
  std::vector<double> z(weights.rows());
  for (std::size_t c = 0; c < weights.rows(); ++c) {
    double acc = bias[c];
    const auto row = weights.row(c);
    for (std::size_t d = 0; d < x.size(); ++d) acc += row[d] * x[d];
    z[c] = acc;
  }
  return z;
}

int LinearModel::predict(std::span<const double> x) const {
  const std::vector<double> z = logits(x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < z.size(); ++c) {
    if (z[c] > z[best]) best = c;
  }
  return static_cast<int>(best);
}

LinearTrainResult train_baseline_softmax_regression(const Matrix<double>& inputs,
                                                    std::span<const int> labels,
                                                    std::size_t num_classes,
                                                    const TrainConfig& config) {
  check_train_config(config);
  if (inputs.rows() == 0) throw DataError("train_baseline: empty dataset");
  if (num_classes < 2) throw ConfigError("train_baseline: need at least two classes");
  check_labels(labels, num_classes, inputs.rows());

  const std::size_t d_count = inputs.cols();
  const std::size_t c_count = num_classes;
  const double inv_batch = 1.0 / static_cast<double>(inputs.rows());
  std::vector<double> params(c_count * d_count + c_count, 0.0);

  std::vector<double> logits(c_count);
  auto loss_grad = [&](const std::vector<double>& p, std::vector<double>& grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    const double* w = p.data();                      // (c, d) row-major
    const double* bias = p.data() + c_count * d_count;
    double loss = 0.0;
    for (std::size_t b = 0; b < inputs.rows(); ++b) {
      const auto x = inputs.row(b);
      for (std::size_t c = 0; c < c_count; ++c) {
        double acc = bias[c];
        const double* wc = w + c * d_count;
        for (std::size_t d = 0; d < d_count; ++d) acc += wc[d] * x[d];
        logits[c] = acc;
      }
      const int label = labels[b];
      loss += validated_row_loss(logits, label) * inv_batch;

      double max_logit = *std::max_element(logits.begin(), logits.end());
      double total = 0.0;
      for (std::size_t c = 0; c < c_count; ++c) {
        logits[c] = std::exp(logits[c] - max_logit);
        total += logits[c];
      }
      for (std::size_t c = 0; c < c_count; ++c) {
        double dz = logits[c] / total;
        if (static_cast<int>(c) == label) dz -= 1.0;
        dz *= inv_batch;
        double* gc = grad.data() + c * d_count;
        for (std::size_t d = 0; d < d_count; ++d) gc[d] += dz * x[d];
        grad[c_count * d_count + c] += dz;
      }
    }
    return loss;
  };

  LinearTrainResult result;
  result.record = run_adam_loop(params, loss_grad, config);

  result.model.weights = Matrix<double>(c_count, d_count);
  result.model.bias.assign(c_count, 0.0);
  std::copy_n(params.begin(), c_count * d_count,
              result.model.weights.data().begin());
  std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(c_count * d_count),
              c_count, result.model.bias.begin());

  std::size_t correct = 0;
  for (std::size_t b = 0; b < inputs.rows(); ++b) {
    if (result.model.predict(inputs.row(b)) == labels[b]) ++correct;
  }
  result.record.final_train_accuracy =
      static_cast<double>(correct) / static_cast<double>(inputs.rows());
  return result;
}

}  // namespace gradfis
