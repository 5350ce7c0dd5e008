// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

// Shared fixtures for the test binaries. Oracles here are written directly
// from the defining formulas and avoid the library's own kernels.

#pragma once

#include <spinframe/chart.hpp>
#include <spinframe/clifford.hpp>
#include <spinframe/connection.hpp>
#include <spinframe/fieldlang.hpp>
#include <spinframe/random_fields.hpp>

#include <memory>
#include <string>
#include <vector>

namespace spinframe::testing {

inline std::shared_ptr<const Chart> make_chart(std::vector<std::string> coords, std::vector<double> lo,
                                               std::vector<double> hi, std::vector<int> samples) {
  return std::make_shared<const Chart>(std::move(coords), std::move(lo), std::move(hi), std::move(samples));
}

inline std::shared_ptr<const Chart> polar_chart(int samples = 6) {
  return make_chart({"r", "th"}, {1.0, 0.2}, {2.0, 1.2}, {samples, samples});
}

inline std::shared_ptr<const Chart> box_chart(int m, int samples, double half = 0.5) {
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back("x" + std::to_string(i));
  return make_chart(names, std::vector<double>(static_cast<std::size_t>(m), -half),
                    std::vector<double>(static_cast<std::size_t>(m), half), std::vector<int>(static_cast<std::size_t>(m), samples));
}

/// Frame from row-major expression strings, e^μ_a with row μ.
inline FrameField frame_from(const std::shared_ptr<const Chart>& chart, const std::vector<std::string>& src) {
  const auto m = static_cast<std::size_t>(chart->dim());
  return make_frame(matrix_field(fieldlang::FieldDef::from_sources(chart->coords(), {m, m}, src), chart));
}

inline TransformField transform_from(const std::shared_ptr<const Chart>& chart, const std::vector<std::string>& src) {
  const auto m = static_cast<std::size_t>(chart->dim());
  return make_transform(matrix_field(fieldlang::FieldDef::from_sources(chart->coords(), {m, m}, src), chart));
}

inline FrameField polar_frame(const std::shared_ptr<const Chart>& chart) {
  return frame_from(chart, {"1", "0", "0", "1/r"});
}

inline FrameField identity_frame(const std::shared_ptr<const Chart>& chart) {
  const int m = chart->dim();
  return FrameField(chart, [m](const Point&) { return Matrix(Matrix::Identity(m, m)); });
}

/// A random frame 1 + 0.3/m R, invertible by diagonal dominance.
inline FrameField random_frame(const std::shared_ptr<const Chart>& chart, std::uint64_t seed) {
  FieldSampler rng(chart, seed);
  const int m = chart->dim();
  const MatrixField r = rng.matrix(0.3 / m);
  return make_frame(MatrixField(chart, [r, m](const Point& x) { return Matrix(Matrix::Identity(m, m) + r(x)); }));
}

inline Signature signature_for(int plus, int minus) { return Signature(plus, minus); }

/// All Signature values with 1 ≤ plus + minus ≤ max_dim.
inline std::vector<Signature> all_signatures(int max_dim) {
  std::vector<Signature> out;
  for (int m = 1; m <= max_dim; ++m)
    for (int q = 0; q <= m; ++q) out.emplace_back(m - q, q);
  return out;
}

/// max over the grid of |a − b| for two rank-3 fields
inline double max_diff(const Field<Tensor3>& a, const Field<Tensor3>& b) {
  double worst = 0.0;
  for (const auto& x : a.chart().grid()) worst = nan_max(worst, (a(x) - b(x)).max_abs());
  return worst;
}

inline double max_diff(const Field<Matrix>& a, const Field<Matrix>& b) {
  double worst = 0.0;
  for (const auto& x : a.chart().grid()) worst = nan_max(worst, max_abs(Matrix(a(x) - b(x))));
  return worst;
}

/// Christoffel symbols by the textbook triple loop with independent central differences.
inline Tensor3 christoffel_oracle(const MetricField& g, const Point& x, double h = 1e-5) {
  const int m = static_cast<int>(x.size());
  std::vector<Matrix> dg;
  for (int mu = 0; mu < m; ++mu) {
    Point xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    dg.push_back((g(xp) - g(xm)) / (2 * h));
  }
  const Matrix gi = g(x).inverse();
  Tensor3 out(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double s = 0;
        for (int l = 0; l < m; ++l) s += 0.5 * gi(a, l) * (dg[b](l, c) + dg[c](l, b) - dg[l](b, c));
        out(a, b, c) = s;
      }
  return out;
}

}  // namespace spinframe::testing
