// SPDX-License-Identifier: Apache-2.0
//
// Shared test helpers: a deliberately naive forward-pass oracle kept
// independent of the library's evaluation path, plus seeded generators for
// small random models and synthetic datasets.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gradfis/matrix.hpp"
#include "gradfis/model.hpp"
#include "gradfis/rng.hpp"

namespace testutil {

struct OracleForward {
  std::vector<std::vector<double>> memberships;  // [input][mf]
  std::vector<double> raw_firings;
  std::vector<double> normalized_firings;
  std::vector<double> logits;
  std::vector<double> probs;
};

// Straight-line scalar recomputation of the forward pass. Every formula is
// written out directly; none of the library's evaluation helpers are used.
// Intended for small models where raw products stay far from underflow.
inline OracleForward oracle_forward(const gradfis::FuzzyClassifier& model,
                                    const std::vector<double>& x) {
  const std::size_t d_count = model.num_inputs;
  const std::size_t m_count = model.mfs_per_input();
  const std::size_t r_count = model.num_rules();
  const std::size_t c_count = model.num_classes;

  OracleForward oracle;
  oracle.memberships.assign(d_count, std::vector<double>(m_count, 0.0));
  for (std::size_t d = 0; d < d_count; ++d) {
    for (std::size_t m = 0; m < m_count; ++m) {
      const double rho = model.bank.width_params(d, m);
      const double sigma = 1e-3 + std::log(1.0 + std::exp(rho));
      const double c = model.bank.centers(d, m);
      oracle.memberships[d][m] =
          std::exp(-((x[d] - c) * (x[d] - c)) / (2.0 * sigma * sigma));
    }
  }

  oracle.raw_firings.assign(r_count, 1.0);
  for (std::size_t r = 0; r < r_count; ++r) {
    for (std::size_t d = 0; d < d_count; ++d) {
      const int a = model.rules.antecedents(r, d);
      oracle.raw_firings[r] *= oracle.memberships[d][static_cast<std::size_t>(a)];
    }
  }

  double total = 0.0;
  for (double w : oracle.raw_firings) total += w;
  oracle.normalized_firings.assign(r_count, 0.0);
  for (std::size_t r = 0; r < r_count; ++r) {
    oracle.normalized_firings[r] = oracle.raw_firings[r] / total;
  }

  oracle.logits.assign(c_count, 0.0);
  for (std::size_t r = 0; r < r_count; ++r) {
    for (std::size_t c = 0; c < c_count; ++c) {
      oracle.logits[c] += oracle.normalized_firings[r] * model.rules.consequents(r, c);
    }
  }

  double prob_total = 0.0;
  oracle.probs.assign(c_count, 0.0);
  for (std::size_t c = 0; c < c_count; ++c) {
    oracle.probs[c] = std::exp(oracle.logits[c]);
    prob_total += oracle.probs[c];
  }
  for (double& p : oracle.probs) p /= prob_total;
  return oracle;
}

// Random model with D, M, R <= 5 and C <= 5, parameters perturbed away from
// the symmetric initial point.
inline gradfis::FuzzyClassifier random_small_model(gradfis::SplitMix64& rng) {
  const std::size_t d_count = 1 + rng.below(5);
  const std::size_t m_count = 1 + rng.below(5);
  const std::size_t r_count = 1 + rng.below(5);
  const std::size_t c_count = 2 + rng.below(4);
  auto model =
      gradfis::init_classifier(d_count, c_count, m_count, r_count, rng.next());
  for (double& v : model.bank.centers.data()) v = rng.unit();
  for (double& v : model.bank.width_params.data()) v = rng.range(-2.0, 1.0);
  for (double& v : model.rules.consequents.data()) v = rng.range(-1.5, 1.5);
  return model;
}

inline std::vector<double> random_input(gradfis::SplitMix64& rng, std::size_t count) {
  std::vector<double> x(count);
  for (double& v : x) v = rng.unit();
  return x;
}

// Two disjoint disks of radius 0.18 centered at (0.25, 0.25) and
// (0.75, 0.75): linearly separable by construction.
inline void make_blobs(std::size_t n, std::uint64_t seed, gradfis::Matrix<double>& x,
                       std::vector<int>& y) {
  gradfis::SplitMix64 rng(seed);
  x = gradfis::Matrix<double>(n, 2);
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = static_cast<int>(i % 2);
    const double cx = cls == 0 ? 0.25 : 0.75;
    const double angle = rng.range(0.0, 6.283185307179586);
    const double radius = 0.18 * std::sqrt(rng.unit());
    x(i, 0) = cx + radius * std::cos(angle);
    x(i, 1) = cx + radius * std::sin(angle);
    y[i] = cls;
  }
}

}  // namespace testutil
