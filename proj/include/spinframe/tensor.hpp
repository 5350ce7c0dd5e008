// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file tensor.hpp
 * @brief Dense m×m×m coefficient arrays and small numeric helpers.
 *
 * Index convention for every rank-3 object in the library: the first slot is
 * the "output" index (upper for connections and torsion, lowered for
 * contorsion), the second is the "input" index, and the third is the
 * direction of differentiation. So ω^α_{βμ} is stored at (α, β, μ).
 */

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinframe {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Raised for singular frames/metrics/transformations and violated index symmetries.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NaN-propagating running maximum. A NaN defect must never look like a pass.
inline double nan_max(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
  return a > b ? a : b;
}

inline double max_abs(const Matrix& m) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) out = nan_max(out, std::abs(m.data()[i]));
  return out;
}

inline double max_abs(const CMatrix& m) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) out = nan_max(out, std::abs(m.data()[i]));
  return out;
}

inline double max_abs(const CVector& v) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) out = nan_max(out, std::abs(v[i]));
  return out;
}

/// Cube of coefficients T(i, j, k) with i, j, k in [0, n).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  [[nodiscard]] int dim() const noexcept { return n_; }

  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }
  [[nodiscard]] std::vector<double>& data() noexcept { return data_; }

  Tensor3& operator+=(const Tensor3& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor3& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }
  Tensor3& operator/=(double s) {
    for (double& v : data_) v /= s;
    return *this;
  }

  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(Tensor3 a, double s) { return a *= s; }
  friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }
  friend Tensor3 operator/(Tensor3 a, double s) { return a /= s; }
  friend Tensor3 operator-(Tensor3 a) { return a *= -1.0; }

  [[nodiscard]] double max_abs() const {
    double out = 0.0;
    for (double v : data_) out = nan_max(out, std::abs(v));
    return out;
  }

  /// Slice with the last index fixed: M(i, j) = T(i, j, k).
  [[nodiscard]] Matrix slice(int k) const {
    Matrix m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j, k);
    return m;
  }

  void set_slice(int k, const Matrix& m) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) (*this)(i, j, k) = m(i, j);
  }

 private:
  [[nodiscard]] std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  void check_same(const Tensor3& o) const {
    if (o.n_ != n_) throw std::invalid_argument("Tensor3 dimension mismatch");
  }

  int n_ = 0;
  std::vector<double> data_;
};

/// Part symmetric in the first two slots: ½(T_{ijk} + T_{jik}).
inline Tensor3 sym01(const Tensor3& t) {
  const int n = t.dim();
  Tensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out(i, j, k) = 0.5 * (t(i, j, k) + t(j, i, k));
  return out;
}

/// Part antisymmetric in the first two slots: ½(T_{ijk} − T_{jik}).
inline Tensor3 antisym01(const Tensor3& t) {
  const int n = t.dim();
  Tensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out(i, j, k) = 0.5 * (t(i, j, k) - t(j, i, k));
  return out;
}

/// Part antisymmetric in the last two slots: ½(T_{ijk} − T_{ikj}).
inline Tensor3 antisym12(const Tensor3& t) {
  const int n = t.dim();
  Tensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out(i, j, k) = 0.5 * (t(i, j, k) - t(i, k, j));
  return out;
}

/// Contract a matrix into the first slot: out_{ajk} = M_{ai} T_{ijk}. Raises or lowers slot 0.
inline Tensor3 contract_first(const Matrix& m, const Tensor3& t) {
  const int n = t.dim();
  Tensor3 out(n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) {
      const double c = m(a, i);
      if (c == 0.0) continue;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) out(a, j, k) += c * t(i, j, k);
    }
  return out;
}

/// Invert with a determinant guard; `what` names the object in the error message.
inline Matrix checked_inverse(const Matrix& m, const std::string& what, double det_floor = 1e-12) {
  const double det = m.determinant();
  if (!std::isfinite(det) || std::abs(det) <= det_floor)
    throw GeometryError(what + " is singular (det = " + std::to_string(det) + ")");
  return m.inverse();
}

}  // namespace spinframe
