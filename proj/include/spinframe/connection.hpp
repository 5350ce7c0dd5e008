// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file connection.hpp
 * @brief Linear connections, spin-connection coefficients, torsion and contorsion.
 *
 * Conventions (all coordinate components, indices raised and lowered with the
 * metric passed in):
 *   ∇_μ V^α       = ∂_μ V^α + ω^α_{βμ} V^β
 *   T^λ_{βμ}      = ω^λ_{βμ} − ω^λ_{μβ}
 *   T_{γβμ}       = g_{γλ} T^λ_{βμ}
 *   K_{γβμ}       = ½ (T_{βμγ} + T_{μβγ} + T_{γβμ}),   K_{(γβ)μ} = 0
 *   ω^α_{βμ}      = {g}^α_{βμ} + g^{αγ} K_{γβμ}
 *   ω^b_{cμ}      = e^b_α (ω^α_{βμ} e^β_c + ∂_μ e^α_c),   ω^{ab}_μ = ω^a_{cμ} η^{cb}
 */

#pragma once

#include <spinframe/chart.hpp>
#include <spinframe/tensor.hpp>

#include <array>
#include <string>
#include <vector>

namespace spinframe {

/// ω^α_{βμ} at (α, β, μ)
using LinearConnection = TypedField<Tensor3, struct LinearConnectionTag>;
/// ω^{ab}_μ at (a, b, μ); first two indices are frame indices
using SpinConnectionCoeffs = TypedField<Tensor3, struct SpinCoeffTag>;
/// T^λ_{βμ} at (λ, β, μ), antisymmetric in (β, μ)
using TorsionField = TypedField<Tensor3, struct TorsionTag>;
/// K_{γβμ} at (γ, β, μ), antisymmetric in (γ, β)
using ContorsionField = TypedField<Tensor3, struct ContorsionTag>;

// ---------------------------------------------------------------------------
// Pointwise kernels
// ---------------------------------------------------------------------------

/// Christoffel symbols of the second kind; dg[μ](α, β) = ∂_μ g_{αβ}.
inline Tensor3 christoffel_at(const Matrix& g_inv, const std::vector<Matrix>& dg) {
  const int m = static_cast<int>(g_inv.rows());
  Tensor3 first(m);  // [λ β μ] = ½(∂_β g_{λμ} + ∂_μ g_{λβ} − ∂_λ g_{βμ})
  for (int l = 0; l < m; ++l)
    for (int b = 0; b < m; ++b)
      for (int mu = b; mu < m; ++mu) {
        const double v = 0.5 * (dg[b](l, mu) + dg[mu](l, b) - dg[l](b, mu));
        first(l, b, mu) = v;
        first(l, mu, b) = v;
      }
  return contract_first(g_inv, first);
}

enum class Slot { Upper, Lower };

/**
 * Covariant derivative of a rank-2 object A with one connection ω:
 *   ∇_μ A_{ij} = ∂_μ A_{ij} ± ω-terms, one per slot according to its variance.
 * dA[μ] = ∂_μ A. Result at (i, j, μ).
 */
inline Tensor3 covariant_derivative(const Tensor3& omega, const Matrix& a, const std::vector<Matrix>& da,
                                    std::array<Slot, 2> variance) {
  const int m = omega.dim();
  Tensor3 out(m);
  for (int mu = 0; mu < m; ++mu) {
    const Matrix w = omega.slice(mu);  // w(α, β) = ω^α_{βμ}
    Matrix d = da[static_cast<std::size_t>(mu)];
    d += variance[0] == Slot::Upper ? Matrix(w * a) : Matrix(-w.transpose() * a);
    d += variance[1] == Slot::Upper ? Matrix(a * w.transpose()) : Matrix(-a * w);
    out.set_slice(mu, d);
  }
  return out;
}

/// ω^{ab}_μ from coordinate coefficients and a frame; de[μ] = ∂_μ e.
inline Tensor3 spin_coeffs_at(const Tensor3& omega, const Matrix& frame, const std::vector<Matrix>& de,
                              const Matrix& eta) {
  const int m = omega.dim();
  const Matrix coframe = checked_inverse(frame, "frame");
  Tensor3 out(m);
  for (int mu = 0; mu < m; ++mu) {
    const Matrix mixed = coframe * (omega.slice(mu) * frame + de[static_cast<std::size_t>(mu)]);  // ω^b_{cμ}
    out.set_slice(mu, mixed * eta);  // η^{-1} = η
  }
  return out;
}

/// Lowered torsion T_{γβμ} → K_{γβμ}, before exact antisymmetrisation.
inline Tensor3 contorsion_from_lowered_torsion(const Tensor3& t_low) {
  const int m = t_low.dim();
  Tensor3 k(m);
  for (int g = 0; g < m; ++g)
    for (int b = 0; b < m; ++b)
      for (int mu = 0; mu < m; ++mu) k(g, b, mu) = 0.5 * (t_low(b, mu, g) + t_low(mu, b, g) + t_low(g, b, mu));
  return k;
}

inline Tensor3 torsion_at(const Tensor3& omega) {
  const int m = omega.dim();
  Tensor3 t(m);
  for (int l = 0; l < m; ++l)
    for (int b = 0; b < m; ++b)
      for (int mu = 0; mu < m; ++mu) t(l, b, mu) = omega(l, b, mu) - omega(l, mu, b);
  return t;
}

/// max |½(T_{λβμ} + T_{λμβ})|
inline double lower_pair_symmetry_defect(const Tensor3& t) {
  const int m = t.dim();
  double worst = 0.0;
  for (int l = 0; l < m; ++l)
    for (int b = 0; b < m; ++b)
      for (int mu = 0; mu < m; ++mu) worst = nan_max(worst, 0.5 * std::abs(t(l, b, mu) + t(l, mu, b)));
  return worst;
}

/// max |½(K_{γβμ} + K_{βγμ})|
inline double first_pair_symmetry_defect(const Tensor3& k) { return sym01(k).max_abs(); }

/// K^{bc}_μ = η^{bd} η^{ce} e^γ_d e^β_e K_{γβμ}
inline Tensor3 frame_contorsion_at(const Tensor3& k, const Matrix& frame, const Matrix& eta) {
  const int m = k.dim();
  const Matrix left = eta * frame.transpose();  // (b, γ) = η^{bd} e^γ_d
  Tensor3 out(m);
  for (int mu = 0; mu < m; ++mu) out.set_slice(mu, left * k.slice(mu) * left.transpose());
  return out;
}

/// ∇_μ g_{αβ} = ∂_μ g_{αβ} − ω^λ_{αμ} g_{λβ} − ω^λ_{βμ} g_{αλ}, at (α, β, μ).
inline Tensor3 metric_compatibility_at(const Tensor3& omega, const Matrix& g, const std::vector<Matrix>& dg) {
  return covariant_derivative(omega, g, dg, {Slot::Lower, Slot::Lower});
}

namespace detail {

inline void require_antisymmetric_pair(double defect, double scale, const char* what) {
  if (!(defect <= 1e-12 * std::max(1.0, scale)))
    throw GeometryError(std::string(what) + ": index symmetry violated (defect " + std::to_string(defect) + ")");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Typed construction
// ---------------------------------------------------------------------------

/// Contorsion from arbitrary rank-3 data, antisymmetrised in (γ, β).
inline ContorsionField make_contorsion(const Tensor3Field& raw) {
  return ContorsionField(raw.chart_ptr(), [raw](const Point& x) { return antisym01(raw(x)); });
}

/// Torsion from arbitrary rank-3 data, antisymmetrised in (β, μ).
inline TorsionField make_torsion(const Tensor3Field& raw) {
  return TorsionField(raw.chart_ptr(), [raw](const Point& x) { return antisym12(raw(x)); });
}

inline ContorsionField zero_contorsion(std::shared_ptr<const Chart> chart) {
  const int m = chart->dim();
  return ContorsionField(std::move(chart), [m](const Point&) { return Tensor3(m); });
}

// ---------------------------------------------------------------------------
// Field-level operations
// ---------------------------------------------------------------------------

inline LinearConnection levi_civita(const MetricField& g) {
  return LinearConnection(g.chart_ptr(), [g](const Point& x) {
    const Matrix g_inv = checked_inverse(g(x), "metric");
    return christoffel_at(g_inv, gradient_at<Matrix>(g, g.chart(), x));
  });
}

inline SpinConnectionCoeffs spin_coeffs(const LinearConnection& omega, const FrameField& e, const Matrix& eta) {
  return SpinConnectionCoeffs(e.chart_ptr(), [omega, e, eta](const Point& x) {
    return spin_coeffs_at(omega(x), e(x), gradient_at<Matrix>(e, e.chart(), x), eta);
  });
}

struct ProjectabilityDefect {
  std::vector<Tensor3> symmetric_part;  ///< ω^{(ab)}_μ at every grid point
  double max = 0.0;

  [[nodiscard]] bool projectable(double tol) const { return max < tol; }
};

/// ω^{(ab)}_μ = η^{c(a} ω^{b)}_{cμ} over the chart grid, and its max-abs.
inline ProjectabilityDefect projectability_defect(const SpinConnectionCoeffs& sc) {
  ProjectabilityDefect out;
  const Chart& chart = sc.chart();
  out.symmetric_part.reserve(chart.num_points());
  for (std::size_t p = 0; p < chart.num_points(); ++p) {
    out.symmetric_part.push_back(sym01(sc(chart.point(p))));
    out.max = nan_max(out.max, out.symmetric_part.back().max_abs());
  }
  return out;
}

inline TorsionField torsion(const LinearConnection& omega) {
  return TorsionField(omega.chart_ptr(), [omega](const Point& x) { return torsion_at(omega(x)); });
}

/// Contorsion of a torsion tensor; the result is antisymmetric in (γ, β).
inline ContorsionField contorsion_from_torsion(const MetricField& g, const TorsionField& t) {
  return ContorsionField(g.chart_ptr(), [g, t](const Point& x) {
    const Tensor3 tv = t(x);
    detail::require_antisymmetric_pair(lower_pair_symmetry_defect(tv), tv.max_abs(), "torsion");
    const Tensor3 k = contorsion_from_lowered_torsion(contract_first(g(x), tv));
    detail::require_antisymmetric_pair(first_pair_symmetry_defect(k), k.max_abs(), "contorsion");
    return antisym01(k);
  });
}

/// ω^α_{βμ} = {g}^α_{βμ} + g^{αγ} K_{γβμ}
inline LinearConnection connection_from_contorsion(const MetricField& g, const ContorsionField& k) {
  const LinearConnection lc = levi_civita(g);
  return LinearConnection(g.chart_ptr(), [g, k, lc](const Point& x) {
    const Tensor3 kv = k(x);
    detail::require_antisymmetric_pair(first_pair_symmetry_defect(kv), kv.max_abs(), "contorsion");
    return lc(x) + contract_first(checked_inverse(g(x), "metric"), kv);
  });
}

/// The projectable connection whose torsion is I: {g} + ½ g^{αγ}(I_{βμγ} + I_{μβγ} + I_{γβμ}).
inline LinearConnection connection_from_torsion_tensor(const MetricField& g, const TorsionField& i) {
  const LinearConnection lc = levi_civita(g);
  return LinearConnection(g.chart_ptr(), [g, i, lc](const Point& x) {
    const Tensor3 iv = i(x);
    detail::require_antisymmetric_pair(lower_pair_symmetry_defect(iv), iv.max_abs(), "torsion");
    const Matrix gx = g(x);
    return lc(x) + contract_first(checked_inverse(gx, "metric"), contorsion_from_lowered_torsion(contract_first(gx, iv)));
  });
}

/// ∇_μ g_{αβ} for a connection; zero exactly for metric-compatible ω.
inline Tensor3Field metric_compatibility(const LinearConnection& omega, const MetricField& g) {
  return Tensor3Field(g.chart_ptr(), [omega, g](const Point& x) {
    return metric_compatibility_at(omega(x), g(x), gradient_at<Matrix>(g, g.chart(), x));
  });
}

/// K^{bc}_μ field for a frame.
inline Tensor3Field frame_contorsion(const ContorsionField& k, const FrameField& e, const Matrix& eta) {
  return Tensor3Field(e.chart_ptr(), [k, e, eta](const Point& x) { return frame_contorsion_at(k(x), e(x), eta); });
}

/// max over the chart grid of ‖f(x)‖∞
template <class Value, class Norm>
double grid_max(const Field<Value>& f, Norm norm) {
  double worst = 0.0;
  const Chart& chart = f.chart();
  for (std::size_t p = 0; p < chart.num_points(); ++p) worst = nan_max(worst, norm(f(chart.point(p))));
  return worst;
}

inline double grid_max(const Tensor3Field& f) {
  return grid_max(f, [](const Tensor3& t) { return t.max_abs(); });
}

inline double grid_max(const MatrixField& f) {
  return grid_max(f, [](const Matrix& t) { return max_abs(t); });
}

}  // namespace spinframe
