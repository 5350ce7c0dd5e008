// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file chart.hpp
 * @brief Coordinate patches, fields on them, and finite differences.
 *
 * A Field is a pure function of the chart point. Keeping the function (not
 * just its grid samples) lets every derivative be a central difference taken
 * off-grid at x ± h ê_μ, so no stencil error accumulates through composed
 * quantities. Grid-stencil differences are available for data that only
 * exists as samples.
 */

#pragma once

#include <spinframe/clifford.hpp>
#include <spinframe/fieldlang.hpp>
#include <spinframe/tensor.hpp>

#include <cstdio>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinframe {

/// Rectangular tensor-product sample grid over a coordinate box.
class Chart {
 public:
  static constexpr int kDefaultSamples = 8;
  static constexpr double kDefaultRelativeStep = 1e-5;

  Chart() = default;

  /// `fd_step` may be empty (1e−5 × range per axis), a single value, or one value per axis.
  Chart(std::vector<std::string> coords, std::vector<double> lo, std::vector<double> hi, std::vector<int> samples,
        std::vector<double> fd_step = {})
      : coords_(std::move(coords)), lo_(std::move(lo)), hi_(std::move(hi)), samples_(std::move(samples)) {
    const std::size_t m = coords_.size();
    if (m == 0) throw std::invalid_argument("chart needs at least one coordinate");
    if (lo_.size() != m || hi_.size() != m || samples_.size() != m)
      throw std::invalid_argument("chart: ranges and sample counts must match the coordinate count");
    for (std::size_t i = 0; i < m; ++i) {
      if (coords_[i].empty() || fieldlang::is_reserved_name(coords_[i]))
        throw std::invalid_argument("chart: '" + coords_[i] + "' is not a usable coordinate name");
      for (std::size_t j = 0; j < i; ++j)
        if (coords_[j] == coords_[i]) throw std::invalid_argument("chart: duplicate coordinate '" + coords_[i] + "'");
      if (!(lo_[i] < hi_[i])) throw std::invalid_argument("chart: empty range for '" + coords_[i] + "'");
      if (samples_[i] < 2) throw std::invalid_argument("chart: axis '" + coords_[i] + "' needs at least 2 samples");
    }
    if (fd_step.empty()) {
      for (std::size_t i = 0; i < m; ++i) step_.push_back(kDefaultRelativeStep * (hi_[i] - lo_[i]));
    } else if (fd_step.size() == 1) {
      step_.assign(m, fd_step[0]);
    } else if (fd_step.size() == m) {
      step_ = std::move(fd_step);
    } else {
      throw std::invalid_argument("chart: fd_step must be a scalar or one value per axis");
    }
    for (std::size_t i = 0; i < m; ++i)
      if (!(step_[i] >= 1e-12 * (hi_[i] - lo_[i])))
        throw std::invalid_argument("chart: finite-difference step underflow on axis '" + coords_[i] + "'");
  }

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(coords_.size()); }
  [[nodiscard]] const std::vector<std::string>& coords() const noexcept { return coords_; }
  [[nodiscard]] double lo(int axis) const { return lo_.at(static_cast<std::size_t>(axis)); }
  [[nodiscard]] double hi(int axis) const { return hi_.at(static_cast<std::size_t>(axis)); }
  [[nodiscard]] int samples(int axis) const { return samples_.at(static_cast<std::size_t>(axis)); }
  [[nodiscard]] double fd_step(int axis) const { return step_.at(static_cast<std::size_t>(axis)); }
  [[nodiscard]] double spacing(int axis) const { return (hi(axis) - lo(axis)) / (samples(axis) - 1); }

  [[nodiscard]] std::size_t num_points() const {
    std::size_t n = 1;
    for (int s : samples_) n *= static_cast<std::size_t>(s);
    return n;
  }

  /// Grid multi-index of a flat point index; the last axis varies fastest.
  [[nodiscard]] std::vector<int> multi_index(std::size_t flat) const {
    std::vector<int> idx(coords_.size());
    for (int i = dim() - 1; i >= 0; --i) {
      const auto s = static_cast<std::size_t>(samples_[static_cast<std::size_t>(i)]);
      idx[static_cast<std::size_t>(i)] = static_cast<int>(flat % s);
      flat /= s;
    }
    return idx;
  }

  [[nodiscard]] std::size_t flat_index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int i = 0; i < dim(); ++i)
      flat = flat * static_cast<std::size_t>(samples(i)) + static_cast<std::size_t>(idx[static_cast<std::size_t>(i)]);
    return flat;
  }

  [[nodiscard]] Point point(std::size_t flat) const {
    const auto idx = multi_index(flat);
    Point x(dim());
    for (int i = 0; i < dim(); ++i) {
      const int j = idx[static_cast<std::size_t>(i)];
      // pin the last sample to hi exactly
      x[i] = j == samples(i) - 1 ? hi(i) : lo(i) + j * spacing(i);
    }
    return x;
  }

  [[nodiscard]] std::vector<Point> grid() const {
    std::vector<Point> out;
    out.reserve(num_points());
    for (std::size_t i = 0; i < num_points(); ++i) out.push_back(point(i));
    return out;
  }

  [[nodiscard]] std::string describe(const Point& x) const {
    std::string out = "(";
    for (int i = 0; i < dim(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%s=%.17g", i ? ", " : "", coords_[static_cast<std::size_t>(i)].c_str(), x[i]);
      out += buf;
    }
    return out + ")";
  }

 private:
  std::vector<std::string> coords_;
  std::vector<double> lo_, hi_;
  std::vector<int> samples_;
  std::vector<double> step_;
};

/// A value attached to every point of a chart, evaluated on demand.
template <class Value>
class Field {
 public:
  using Fn = std::function<Value(const Point&)>;

  Field(std::shared_ptr<const Chart> chart, Fn fn) : chart_(std::move(chart)), fn_(std::move(fn)) {
    if (!chart_) throw std::invalid_argument("Field: null chart");
  }

  Value operator()(const Point& x) const { return fn_(x); }
  [[nodiscard]] const Chart& chart() const noexcept { return *chart_; }
  [[nodiscard]] const std::shared_ptr<const Chart>& chart_ptr() const noexcept { return chart_; }

 private:
  std::shared_ptr<const Chart> chart_;
  Fn fn_;
};

/// Strongly-typed field: same storage, distinct type per geometric role.
template <class Value, class Tag>
class TypedField : public Field<Value> {
 public:
  explicit TypedField(Field<Value> f) : Field<Value>(std::move(f)) {}
  TypedField(std::shared_ptr<const Chart> chart, typename Field<Value>::Fn fn)
      : Field<Value>(std::move(chart), std::move(fn)) {}
};

using ScalarField = Field<double>;
using MatrixField = Field<Matrix>;
using Tensor3Field = Field<Tensor3>;
using SpinorField = Field<CVector>;
using SpinElementField = Field<SpinElement>;

/// e^μ_a at (μ, a): column a holds the components of frame vector e_a.
using FrameField = TypedField<Matrix, struct FrameTag>;
/// g_{μν}
using MetricField = TypedField<Matrix, struct MetricTag>;

/// φ^μ_ν together with its pointwise inverse φ̄^μ_ν.
class TransformField : public Field<Matrix> {
 public:
  TransformField(std::shared_ptr<const Chart> chart, Fn fn)
      : Field<Matrix>(chart, fn), inverse_(chart, [f = fn](const Point& x) {
          return Matrix(checked_inverse(f(x), "transformation"));
        }) {}

  [[nodiscard]] const Field<Matrix>& inverse() const noexcept { return inverse_; }

 private:
  Field<Matrix> inverse_;
};

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// (f(x + h ê) − f(x − h ê)) / 2h
template <class Value, class F>
Value central_difference(const F& f, const Point& x, int axis, double h) {
  Point xp = x;
  Point xm = x;
  xp[axis] += h;
  xm[axis] -= h;
  return Value((f(xp) - f(xm)) / (2.0 * h));
}

/// ∂_μ of a field, re-evaluating its definition off-grid at x ± h ê_μ.
template <class Value>
Field<Value> partial(const Field<Value>& f, int axis) {
  const Chart& chart = f.chart();
  if (axis < 0 || axis >= chart.dim()) throw std::out_of_range("partial: axis out of range");
  const double h = chart.fd_step(axis);
  if (h < 1e-12 * (chart.hi(axis) - chart.lo(axis))) throw std::invalid_argument("partial: step underflow");
  return Field<Value>(f.chart_ptr(), [f, axis, h](const Point& x) { return central_difference<Value>(f, x, axis, h); });
}

/// All first derivatives at one point: out[μ] = ∂_μ f(x).
template <class Value, class F>
std::vector<Value> gradient_at(const F& f, const Chart& chart, const Point& x) {
  std::vector<Value> out;
  out.reserve(static_cast<std::size_t>(chart.dim()));
  for (int mu = 0; mu < chart.dim(); ++mu) out.push_back(central_difference<Value>(f, x, mu, chart.fd_step(mu)));
  return out;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

class SampleError : public std::runtime_error {
 public:
  SampleError(const std::string& msg, std::size_t point_index, std::size_t component)
      : std::runtime_error(msg), point_index_(point_index), component_(component) {}
  [[nodiscard]] std::size_t point_index() const noexcept { return point_index_; }
  [[nodiscard]] std::size_t component() const noexcept { return component_; }

 private:
  std::size_t point_index_;
  std::size_t component_;
};

/// Dense samples of a FieldDef: values[point * size + component], points in grid order.
struct SampledField {
  std::shared_ptr<const Chart> chart;
  std::vector<std::size_t> shape;
  std::size_t size = 0;
  std::vector<double> values;

  [[nodiscard]] double at(std::size_t point, std::size_t component) const { return values[point * size + component]; }
};

inline SampledField sample(const fieldlang::FieldDef& def, std::shared_ptr<const Chart> chart) {
  if (def.coords != chart->coords()) throw std::invalid_argument("sample: field and chart coordinates differ");
  SampledField out{chart, def.shape, def.size(), {}};
  const std::size_t n = chart->num_points();
  out.values.resize(n * out.size);
  for (std::size_t p = 0; p < n; ++p) {
    const Point x = chart->point(p);
    const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
    for (std::size_t c = 0; c < out.size; ++c) {
      const double v = fieldlang::eval(def.exprs[c], xs);
      if (!std::isfinite(v))
        throw SampleError("non-finite value " + std::to_string(v) + " in expression " + std::to_string(c) + " at " +
                              chart->describe(x),
                          p, c);
      out.values[p * out.size + c] = v;
    }
  }
  return out;
}

/// Grid-stencil ∂_μ: second-order central differences inside, second-order one-sided at the ends.
inline SampledField partial(const SampledField& f, int axis) {
  const Chart& chart = *f.chart;
  if (axis < 0 || axis >= chart.dim()) throw std::out_of_range("partial: axis out of range");
  const int n = chart.samples(axis);
  const double dx = chart.spacing(axis);
  SampledField out = f;
  for (std::size_t p = 0; p < chart.num_points(); ++p) {
    auto idx = chart.multi_index(p);
    const int j = idx[static_cast<std::size_t>(axis)];
    auto at = [&](int jj, std::size_t c) {
      idx[static_cast<std::size_t>(axis)] = jj;
      return f.at(chart.flat_index(idx), c);
    };
    for (std::size_t c = 0; c < f.size; ++c) {
      double d = 0.0;
      if (n == 2) {
        d = (at(1, c) - at(0, c)) / dx;
      } else if (j == 0) {
        d = (-3.0 * at(0, c) + 4.0 * at(1, c) - at(2, c)) / (2.0 * dx);
      } else if (j == n - 1) {
        d = (3.0 * at(n - 1, c) - 4.0 * at(n - 2, c) + at(n - 3, c)) / (2.0 * dx);
      } else {
        d = (at(j + 1, c) - at(j - 1, c)) / (2.0 * dx);
      }
      out.values[p * f.size + c] = d;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fields from definitions
// ---------------------------------------------------------------------------

namespace detail {

inline std::span<const double> as_span(const Point& x) {
  return {x.data(), static_cast<std::size_t>(x.size())};
}

}  // namespace detail

inline ScalarField scalar_field(const fieldlang::FieldDef& def, std::shared_ptr<const Chart> chart) {
  if (def.size() != 1) throw std::invalid_argument("scalar_field: definition is not scalar");
  return ScalarField(std::move(chart), [e = def.exprs[0]](const Point& x) { return fieldlang::eval(e, detail::as_span(x)); });
}

/// m×m definition (row-major) as a matrix-valued field.
inline MatrixField matrix_field(const fieldlang::FieldDef& def, std::shared_ptr<const Chart> chart) {
  const auto m = static_cast<std::size_t>(chart->dim());
  if (def.size() != m * m) throw std::invalid_argument("matrix_field: definition is not m x m");
  return MatrixField(std::move(chart), [def, m](const Point& x) {
    Matrix out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = fieldlang::eval(def.exprs[i * m + j], detail::as_span(x));
    return out;
  });
}

/// m×m×m definition (row-major) as a rank-3 field.
inline Tensor3Field tensor3_field(const fieldlang::FieldDef& def, std::shared_ptr<const Chart> chart) {
  const int m = chart->dim();
  if (def.size() != static_cast<std::size_t>(m * m * m)) throw std::invalid_argument("tensor3_field: definition is not m x m x m");
  return Tensor3Field(std::move(chart), [def, m](const Point& x) {
    Tensor3 out(m);
    for (std::size_t i = 0; i < def.size(); ++i) out.data()[i] = fieldlang::eval(def.exprs[i], detail::as_span(x));
    return out;
  });
}

/// k (re, im) pairs as a spinor field; the definition has shape {k, 2}.
inline SpinorField spinor_field(const fieldlang::FieldDef& def, std::shared_ptr<const Chart> chart) {
  if (def.shape.size() != 2 || def.shape[1] != 2) throw std::invalid_argument("spinor_field: definition must be k x 2");
  const auto k = def.shape[0];
  return SpinorField(std::move(chart), [def, k](const Point& x) {
    CVector out(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
      out[static_cast<Eigen::Index>(i)] =
          Complex(fieldlang::eval(def.exprs[2 * i], detail::as_span(x)), fieldlang::eval(def.exprs[2 * i + 1], detail::as_span(x)));
    return out;
  });
}

// ---------------------------------------------------------------------------
// Validated construction
// ---------------------------------------------------------------------------

namespace detail {

template <class F>
void for_each_grid_point(const Chart& chart, F&& f) {
  for (std::size_t p = 0; p < chart.num_points(); ++p) f(chart.point(p));
}

inline void require_invertible(const MatrixField& f, const std::string& what) {
  const Chart& chart = f.chart();
  for_each_grid_point(chart, [&](const Point& x) {
    const Matrix v = f(x);
    if (!v.allFinite()) throw GeometryError(what + " is not finite at " + chart.describe(x));
    const double det = v.determinant();
    if (!(std::abs(det) > 1e-12))
      throw GeometryError(what + " is singular at " + chart.describe(x) + " (det = " + std::to_string(det) + ")");
  });
}

}  // namespace detail

/// Frame field checked for |det e^μ_a| > 1e−12 at every grid sample.
inline FrameField make_frame(MatrixField components) {
  detail::require_invertible(components, "frame");
  return FrameField(std::move(components));
}

inline TransformField make_transform(const MatrixField& components) {
  detail::require_invertible(components, "transformation");
  return TransformField(components.chart_ptr(), [components](const Point& x) { return components(x); });
}

// ---------------------------------------------------------------------------
// Induced structures
// ---------------------------------------------------------------------------

/// g_{μν} = e^a_μ η_{ab} e^b_ν with e^a_μ the inverse of e^μ_a.
inline Matrix induce_metric_at(const Matrix& frame, const Matrix& eta) {
  const Matrix coframe = checked_inverse(frame, "frame");
  Matrix g = coframe.transpose() * eta * coframe;
  return 0.5 * (g + g.transpose());
}

inline MetricField induce_metric(const FrameField& e, const Matrix& eta) {
  if (eta.rows() != e.chart().dim()) throw std::invalid_argument("induce_metric: eta has the wrong dimension");
  return MetricField(e.chart_ptr(), [e, eta](const Point& x) { return induce_metric_at(e(x), eta); });
}

/// ẽ^μ_a = φ^μ_ν e^ν_a
inline FrameField transform_frame(const FrameField& e, const TransformField& phi) {
  return FrameField(e.chart_ptr(), [e, phi](const Point& x) {
    Matrix out = phi(x) * e(x);
    if (!(std::abs(out.determinant()) > 1e-12)) throw GeometryError("transformed frame is singular");
    return out;
  });
}

/// e′^μ_a = e^μ_b L^b_a with L = covering_map(S(x)). Leaves the induced metric unchanged.
inline FrameField change_trivialization(const FrameField& e, const SpinElementField& s, const GammaRep& rep) {
  return FrameField(e.chart_ptr(), [e, s, rep](const Point& x) { return Matrix(e(x) * covering_map(rep, s(x))); });
}

/// Counts of positive and negative eigenvalues of a symmetric matrix.
inline Signature eigen_signature(const Matrix& g) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  int plus = 0, minus = 0;
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    const double ev = es.eigenvalues()[i];
    if (ev > 1e-12 * scale) ++plus;
    else if (ev < -1e-12 * scale) ++minus;
    else throw GeometryError("metric is degenerate");
  }
  return {plus, minus};
}

}  // namespace spinframe
