// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file random_fields.hpp
 * @brief Seeded smooth random fields for property checks.
 *
 * Every scalar component is
 *   f(x) = (c₀ + Σ_i c₁ᵢ uᵢ + c₂ᵢ uᵢ² + c₃ᵢ sin(uᵢ + dᵢ)) / (1 + 3m)
 * with uᵢ ∈ [−1, 1] the normalised chart coordinate and every coefficient drawn
 * uniformly from [−1, 1], so |f| ≤ 1 on the chart. Draws use the raw output
 * of std::mt19937_64 so the fields are identical on every platform.
 */

#pragma once

#include <spinframe/chart.hpp>
#include <spinframe/clifford.hpp>
#include <spinframe/connection.hpp>

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace spinframe {

class FieldSampler {
 public:
  FieldSampler(std::shared_ptr<const Chart> chart, std::uint64_t seed) : chart_(std::move(chart)), rng_(seed) {}

  /// Uniform in [−1, 1].
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-52 - 1.0; }

  ScalarField scalar(double scale = 1.0) {
    auto c = std::make_shared<const Coeffs>(draw_coeffs());
    auto chart = chart_;
    return ScalarField(chart_, [c, chart, scale](const Point& x) { return scale * eval(*c, *chart, x); });
  }

  MatrixField matrix(double scale = 1.0) {
    const int m = chart_->dim();
    auto cs = draw_many(m * m);
    auto chart = chart_;
    return MatrixField(chart_, [cs, chart, m, scale](const Point& x) {
      Matrix out(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out(i, j) = scale * eval((*cs)[static_cast<std::size_t>(i * m + j)], *chart, x);
      return out;
    });
  }

  /// φ = 1 + (0.4/m) R with |Rᵢⱼ| ≤ 1, so every row sum of the perturbation stays below 0.4.
  TransformField transform() {
    const int m = chart_->dim();
    const MatrixField r = matrix(0.4 / m);
    return make_transform(MatrixField(chart_, [r, m](const Point& x) { return Matrix(Matrix::Identity(m, m) + r(x)); }));
  }

  Tensor3Field tensor3(double scale = 1.0) {
    const int m = chart_->dim();
    auto cs = draw_many(m * m * m);
    auto chart = chart_;
    return Tensor3Field(chart_, [cs, chart, m, scale](const Point& x) {
      Tensor3 out(m);
      for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = scale * eval((*cs)[i], *chart, x);
      return out;
    });
  }

  ContorsionField contorsion(double scale = 1.0) { return make_contorsion(tensor3(scale)); }
  TorsionField torsion(double scale = 1.0) { return make_torsion(tensor3(scale)); }

  SpinorField spinor(int k) {
    auto cs = draw_many(2 * k);
    auto chart = chart_;
    return SpinorField(chart_, [cs, chart, k](const Point& x) {
      CVector out(k);
      for (int i = 0; i < k; ++i)
        out[i] = Complex(eval((*cs)[static_cast<std::size_t>(2 * i)], *chart, x),
                         eval((*cs)[static_cast<std::size_t>(2 * i + 1)], *chart, x));
      return out;
    });
  }

  /// Antisymmetric parameter field θ_{ab}(x) with |θ_{ab}| ≤ scale.
  MatrixField theta(double scale = 1.0) {
    const MatrixField r = matrix(scale);
    return MatrixField(chart_, [r](const Point& x) {
      const Matrix v = r(x);
      return Matrix(0.5 * (v - v.transpose()));
    });
  }

  SpinElementField spin_element(const GammaRep& rep, double scale = 1.0) {
    const MatrixField th = theta(scale);
    return SpinElementField(chart_, [th, rep](const Point& x) { return spin_exp(rep, th(x)); });
  }

 private:
  struct Coeffs {
    double c0 = 0.0;
    std::vector<double> c1, c2, c3, d;
  };

  Coeffs draw_coeffs() {
    const int m = chart_->dim();
    Coeffs c;
    c.c0 = uniform();
    for (int i = 0; i < m; ++i) {
      c.c1.push_back(uniform());
      c.c2.push_back(uniform());
      c.c3.push_back(uniform());
      c.d.push_back(uniform());
    }
    return c;
  }

  std::shared_ptr<const std::vector<Coeffs>> draw_many(int n) {
    std::vector<Coeffs> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(draw_coeffs());
    return std::make_shared<const std::vector<Coeffs>>(std::move(out));
  }

  static double eval(const Coeffs& c, const Chart& chart, const Point& x) {
    const int m = chart.dim();
    double acc = c.c0;
    for (int i = 0; i < m; ++i) {
      const double u = 2.0 * (x[i] - chart.lo(i)) / (chart.hi(i) - chart.lo(i)) - 1.0;
      acc += c.c1[i] * u + c.c2[i] * u * u + c.c3[i] * std::sin(u + c.d[i]);
    }
    return acc / (1.0 + 3.0 * m);
  }

  std::shared_ptr<const Chart> chart_;
  std::mt19937_64 rng_;
};

}  // namespace spinframe
