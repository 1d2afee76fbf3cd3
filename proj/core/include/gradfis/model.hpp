// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gradfis/matrix.hpp"

namespace gradfis {

/// Width floor: sigma(d, m) = kSigmaFloor + softplus(width_param(d, m)).
/// Keeps every membership function strictly wider than zero while the raw
/// width parameter trains unconstrained.
inline constexpr double kSigmaFloor = 1e-3;

/// Guard added to the firing-strength denominator in normalize_firings.
inline constexpr double kFiringEpsilon = 1e-12;

double softplus(double x);
double softplus_inverse(double y);  // y > 0
double logistic(double x);

/// Per-input-dimension array of Gaussian membership functions. centers and
/// width_params are both (input d, mf m); the effective width is derived,
/// never stored.
struct MembershipBank {
  Matrix<double> centers;
  Matrix<double> width_params;

  std::size_t num_inputs() const { return centers.rows(); }
  std::size_t mfs_per_input() const { return centers.cols(); }

  double sigma(std::size_t d, std::size_t m) const {
    return kSigmaFloor + softplus(width_params(d, m));
  }
};

/// Zero-order TSK rule base: each rule selects one membership function per
/// input (antecedents) and contributes a constant logit vector (consequents).
struct RuleBase {
  Matrix<int> antecedents;    // (rule r, input d) -> mf index in [0, M)
  Matrix<double> consequents;  // (rule r, class c) -> logit contribution

  std::size_t num_rules() const { return antecedents.rows(); }
  std::size_t num_classes() const { return consequents.cols(); }
};

/// The complete trainable classifier: membership bank, rule base, and the
/// metadata needed to rebuild it deterministically.
struct FuzzyClassifier {
  MembershipBank bank;
  RuleBase rules;
  std::size_t num_inputs = 0;
  std::size_t num_classes = 0;
  std::uint64_t seed = 0;

  std::size_t mfs_per_input() const { return bank.mfs_per_input(); }
  std::size_t num_rules() const { return rules.num_rules(); }
};

/// Builds the canonical initial model: centers evenly spaced on [0, 1],
/// widths at half the center spacing, antecedent indices drawn from a seeded
/// generator, consequents all zero. Identical arguments give bit-identical
/// models.
FuzzyClassifier init_classifier(std::size_t num_inputs, std::size_t num_classes,
                                std::size_t mfs_per_input, std::size_t num_rules,
                                std::uint64_t seed);

/// Width used by the data-driven initializer: half the normalized feature
/// range, a standard kernel bandwidth for unit-scaled inputs.
inline constexpr double kDataInitSigma = 0.5;

/// Data-driven initial model, used by the training pipeline: the same center
/// grid as init_classifier, but each rule is anchored to a seeded-sampled
/// training row (its antecedent picks the MF whose center is nearest to that
/// row in each input) and every width starts at kDataInitSigma. Uniform
/// random antecedent cells concentrate rules far from the data in high
/// dimension; anchoring keeps the rule base on the data manifold.
/// Consequents start at zero, so initial predictions are uniform.
FuzzyClassifier init_classifier_from_data(std::size_t num_inputs,
                                          std::size_t num_classes,
                                          std::size_t mfs_per_input,
                                          std::size_t num_rules, std::uint64_t seed,
                                          const Matrix<double>& train_features);

/// Structural validity: shape agreement, antecedent ranges, finite
/// parameters. Throws ModelError on the first violation.
void validate(const FuzzyClassifier& model);

/// exp(-(x - center)^2 / (2 sigma^2)). In (0, 1], equal to 1 iff x == center.
double gaussian_membership(double x, double center, double sigma);

/// Degrees of membership of x in every MF: entry (d, m) is the Gaussian
/// membership of x[d] in MF m of input d.
Matrix<double> fuzzify(const FuzzyClassifier& model, std::span<const double> x);

/// Product t-norm rule activations: w_r = prod_d memberships(d, a(r, d)).
std::vector<double> firing_strengths(const FuzzyClassifier& model,
                                     const Matrix<double>& memberships);

/// w_r / (sum_s w_s + eps). The eps guard makes the all-zero vector map to
/// itself instead of dividing by zero.
std::vector<double> normalize_firings(std::span<const double> firings);

/// Numerically stable softmax (max subtraction).
std::vector<double> softmax(std::span<const double> logits);

struct ForwardResult {
  std::vector<double> logits;   // length C
  std::vector<double> probs;    // length C, sums to 1
  std::vector<double> firings;  // length R, normalized rule activations
};

/// Full forward pass: memberships -> rule firings -> normalized firings ->
/// rule-weighted logits -> softmax probabilities. Rule firings are combined
/// in the log domain so that high-dimensional products cannot underflow; the
/// result is the same normalized vector the raw product path defines.
ForwardResult forward(const FuzzyClassifier& model, std::span<const double> x);

/// argmax over forward probabilities; ties break toward the lowest class.
int predict(const FuzzyClassifier& model, std::span<const double> x);

namespace detail {

/// log w_r = sum_d log mu(d, a(r, d)); no exponentials involved, so the
/// value stays finite even where the raw product underflows.
void log_firings(const FuzzyClassifier& model, std::span<const double> x,
                 std::vector<double>& out);

/// Normalized firings from log firings: softmax over rules (max-shifted).
/// If every log firing is -inf the result is all zeros, matching the
/// eps-guarded raw-space contract.
std::vector<double> normalized_from_log(std::span<const double> log_firings);

}  // namespace detail

}  // namespace gradfis
