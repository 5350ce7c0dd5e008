// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file transform.hpp
 * @brief Transport of connections and contorsions under frame transformations φ.
 *
 * Notation: φ̄ = φ⁻¹ pointwise, D_μ φ̄^γ_β = ∇^{g}_μ φ̄^γ_β (Levi-Civita of g,
 * φ̄ treated as a (1,1) tensor), g̃ = φ̄ᵀ g φ̄, ẽ = φ e. Everything is evaluated
 * as coordinate components in the natural trivialisation.
 */

#pragma once

#include <spinframe/chart.hpp>
#include <spinframe/connection.hpp>
#include <spinframe/tensor.hpp>

#include <string>
#include <vector>

namespace spinframe {

// ---------------------------------------------------------------------------
// Pointwise kernels
// ---------------------------------------------------------------------------

/// ω̃^α_{βμ} = φ^α_γ (ω^γ_{δμ} φ̄^δ_β + ∂_μ φ̄^γ_β)
inline Tensor3 transport_at(const Tensor3& omega, const Matrix& phi, const Matrix& phib,
                            const std::vector<Matrix>& dphib) {
  const int m = omega.dim();
  Tensor3 out(m);
  for (int mu = 0; mu < m; ++mu)
    out.set_slice(mu, phi * (omega.slice(mu) * phib + dphib[static_cast<std::size_t>(mu)]));
  return out;
}

/// ∇_μ φ̄^γ_β at (γ, β, μ) for a connection ω.
inline Tensor3 nabla_phibar_at(const Tensor3& omega, const Matrix& phib, const std::vector<Matrix>& dphib) {
  return covariant_derivative(omega, phib, dphib, {Slot::Upper, Slot::Lower});
}

/// k^α_{βμ} = φ^α_γ ∇^ω_μ φ̄^γ_β
inline Tensor3 k_at(const Tensor3& omega, const Matrix& phi, const Matrix& phib, const std::vector<Matrix>& dphib) {
  return contract_first(phi, nabla_phibar_at(omega, phib, dphib));
}

namespace detail {

// X(β, μ, λ) = g_{ρσ} φ̄^ρ_β D_μ φ̄^σ_λ
inline Tensor3 x_term(const Matrix& g, const Matrix& phib, const Tensor3& dpb) {
  const int m = dpb.dim();
  Tensor3 x(m);
  const Matrix left = phib.transpose() * g;
  for (int mu = 0; mu < m; ++mu) {
    const Matrix s = left * dpb.slice(mu);  // (β, λ)
    for (int b = 0; b < m; ++b)
      for (int l = 0; l < m; ++l) x(b, mu, l) = s(b, l);
  }
  return x;
}

// Y(β, μ, λ) = g_{ρσ} (D_λ φ̄^ρ_{(β}) φ̄^σ_{μ)}, symmetric in (β, μ)
inline Tensor3 y_term(const Matrix& g, const Matrix& phib, const Tensor3& dpb) {
  const int m = dpb.dim();
  Tensor3 y(m);
  for (int l = 0; l < m; ++l) {
    const Matrix d = dpb.slice(l);
    const Matrix s = 0.5 * (d.transpose() * g * phib + phib.transpose() * g * d);
    for (int b = 0; b < m; ++b)
      for (int mu = 0; mu < m; ++mu) y(b, mu, l) = s(b, mu);
  }
  return y;
}

}  // namespace detail

/**
 * h^α_{βμ} = φ^α_γ D_{(β} φ̄^γ_{μ)}
 *          + φ^α_γ g^{γδ} φ^λ_δ g_{ρσ} φ̄^ρ_{(β} D_{μ)} φ̄^σ_λ
 *          − φ^α_γ g^{γδ} φ^λ_δ g_{ρσ} (D_λ φ̄^ρ_{(β}) φ̄^σ_{μ)}
 * with dpb = D φ̄ at (γ, β, μ).
 */
inline Tensor3 h_at(const Matrix& g, const Matrix& g_inv, const Matrix& phi, const Matrix& phib, const Tensor3& dpb) {
  const int m = dpb.dim();
  const Matrix raise = phi * g_inv * phi.transpose();  // g̃^{αλ}
  const Tensor3 x = detail::x_term(g, phib, dpb);
  const Tensor3 y = detail::y_term(g, phib, dpb);

  Tensor3 sym(m);  // D_{(β} φ̄^γ_{μ)} at (γ, β, μ)
  Tensor3 low(m);  // X_{(βμ)λ} − Y_{βμλ} at (λ, β, μ)
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int mu = 0; mu < m; ++mu) {
        sym(a, b, mu) = 0.5 * (dpb(a, mu, b) + dpb(a, b, mu));
        low(a, b, mu) = 0.5 * (x(b, mu, a) + x(mu, b, a)) - y(b, mu, a);
      }
  return contract_first(phi, sym) + contract_first(raise, low);
}

/**
 * K̃_{ρβμ} = g_{αγ} φ̄^α_ρ D_{[μ} φ̄^γ_{β]} − g_{αγ} φ̄^α_{(β} D_{μ)} φ̄^γ_ρ
 *          + g_{αγ} (D_ρ φ̄^α_{(β}) φ̄^γ_{μ)} + φ̄^σ_ρ K_{σημ} φ̄^η_β
 */
inline Tensor3 ktilde_at(const Matrix& g, const Matrix& phib, const Tensor3& dpb, const Tensor3& k) {
  const int m = dpb.dim();
  const Tensor3 x = detail::x_term(g, phib, dpb);
  const Tensor3 y = detail::y_term(g, phib, dpb);
  const Matrix left = phib.transpose() * g;

  Tensor3 out(m);
  for (int mu = 0; mu < m; ++mu) {
    Matrix anti(m, m);  // (γ, β) = D_{[μ} φ̄^γ_{β]}
    for (int c = 0; c < m; ++c)
      for (int b = 0; b < m; ++b) anti(c, b) = 0.5 * (dpb(c, b, mu) - dpb(c, mu, b));
    const Matrix first = left * anti;
    const Matrix last = phib.transpose() * k.slice(mu) * phib;
    for (int r = 0; r < m; ++r)
      for (int b = 0; b < m; ++b)
        out(r, b, mu) = first(r, b) - 0.5 * (x(b, mu, r) + x(mu, b, r)) + y(b, mu, r) + last(r, b);
  }
  return out;
}

/// T̃^λ_{βμ} = 2 φ^λ_γ D_{[μ} φ̄^γ_{β]} + 2 φ^λ_γ g^{γσ} K_{ση[μ} φ̄^η_{β]}
inline Tensor3 ttilde_at(const Matrix& g_inv, const Matrix& phi, const Matrix& phib, const Tensor3& dpb,
                         const Tensor3& k) {
  const int m = dpb.dim();
  Tensor3 kp(m);  // K_{σημ} φ̄^η_β at (σ, μ, β)
  for (int mu = 0; mu < m; ++mu) {
    const Matrix s = k.slice(mu) * phib;
    for (int sg = 0; sg < m; ++sg)
      for (int b = 0; b < m; ++b) kp(sg, mu, b) = s(sg, b);
  }
  Tensor3 d(m);
  Tensor3 c(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int mu = 0; mu < m; ++mu) {
        d(a, b, mu) = dpb(a, b, mu) - dpb(a, mu, b);
        c(a, b, mu) = kp(a, mu, b) - kp(a, b, mu);
      }
  return contract_first(phi, d) + contract_first(phi * g_inv, c);
}

/// Torsion of the transported Levi-Civita connection in closed form:
/// T′^λ_{βμ} = φ^λ_γ (D_μ φ̄^γ_β − D_β φ̄^γ_μ).
inline Tensor3 torsionless_ttilde_at(const Matrix& phi, const Tensor3& dpb) {
  const int m = dpb.dim();
  Tensor3 d(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int mu = 0; mu < m; ++mu) d(a, b, mu) = dpb(a, b, mu) - dpb(a, mu, b);
  return contract_first(phi, d);
}

// ---------------------------------------------------------------------------
// Field-level operations
// ---------------------------------------------------------------------------

/// g̃_{μν} = φ̄^ρ_μ g_{ρσ} φ̄^σ_ν
inline MetricField transform_metric(const MetricField& g, const TransformField& phi) {
  return MetricField(g.chart_ptr(), [g, phi](const Point& x) {
    const Matrix pb = phi.inverse()(x);
    Matrix out = pb.transpose() * g(x) * pb;
    return Matrix(0.5 * (out + out.transpose()));
  });
}

namespace detail {

struct PhiAt {
  Matrix phi, phib;
  std::vector<Matrix> dphib;
};

inline PhiAt phi_at(const TransformField& phi, const Point& x) {
  return {phi(x), phi.inverse()(x), gradient_at<Matrix>(phi.inverse(), phi.chart(), x)};
}

}  // namespace detail

inline LinearConnection transport_connection(const LinearConnection& omega, const TransformField& phi) {
  return LinearConnection(omega.chart_ptr(), [omega, phi](const Point& x) {
    const auto p = detail::phi_at(phi, x);
    return transport_at(omega(x), p.phi, p.phib, p.dphib);
  });
}

inline Tensor3Field k_tensor(const LinearConnection& omega, const TransformField& phi) {
  return Tensor3Field(omega.chart_ptr(), [omega, phi](const Point& x) {
    const auto p = detail::phi_at(phi, x);
    return k_at(omega(x), p.phi, p.phib, p.dphib);
  });
}

/// D_μ φ̄^γ_β with the Levi-Civita connection of g.
inline Tensor3Field nabla_phibar(const MetricField& g, const TransformField& phi) {
  const LinearConnection lc = levi_civita(g);
  return Tensor3Field(g.chart_ptr(), [lc, phi](const Point& x) {
    const auto p = detail::phi_at(phi, x);
    return nabla_phibar_at(lc(x), p.phib, p.dphib);
  });
}

inline Tensor3Field h_tensor(const MetricField& g, const TransformField& phi) {
  const Tensor3Field dpb = nabla_phibar(g, phi);
  return Tensor3Field(g.chart_ptr(), [g, phi, dpb](const Point& x) {
    const Matrix gx = g(x);
    const Matrix p = phi(x);
    return h_at(gx, checked_inverse(gx, "metric"), p, checked_inverse(p, "transformation"), dpb(x));
  });
}

/// K̃ straight from the closed form, without enforcing its antisymmetry.
inline Tensor3Field transported_contorsion_raw(const ContorsionField& k, const MetricField& g,
                                               const TransformField& phi) {
  const Tensor3Field dpb = nabla_phibar(g, phi);
  return Tensor3Field(g.chart_ptr(), [k, g, phi, dpb](const Point& x) {
    return ktilde_at(g(x), phi.inverse()(x), dpb(x), k(x));
  });
}

/// K̃ as a contorsion of g̃; throws if the closed form is not antisymmetric in (ρ, β) within 1e−10.
inline ContorsionField transported_contorsion(const ContorsionField& k, const MetricField& g,
                                              const TransformField& phi) {
  const Tensor3Field raw = transported_contorsion_raw(k, g, phi);
  return ContorsionField(g.chart_ptr(), [raw](const Point& x) {
    const Tensor3 kt = raw(x);
    const double defect = first_pair_symmetry_defect(kt);
    if (!(defect <= 1e-10 * std::max(1.0, kt.max_abs())))
      throw GeometryError("transported contorsion is not antisymmetric (defect " + std::to_string(defect) + ")");
    return antisym01(kt);
  });
}

inline TorsionField transported_torsion(const ContorsionField& k, const MetricField& g, const TransformField& phi) {
  const Tensor3Field dpb = nabla_phibar(g, phi);
  return TorsionField(g.chart_ptr(), [k, g, phi, dpb](const Point& x) {
    const Matrix p = phi(x);
    return ttilde_at(checked_inverse(g(x), "metric"), p, checked_inverse(p, "transformation"), dpb(x), k(x));
  });
}

inline TorsionField torsionless_transported_torsion(const MetricField& g, const TransformField& phi) {
  const Tensor3Field dpb = nabla_phibar(g, phi);
  return TorsionField(g.chart_ptr(), [phi, dpb](const Point& x) { return torsionless_ttilde_at(phi(x), dpb(x)); });
}

// ---------------------------------------------------------------------------
// Identity checks
// ---------------------------------------------------------------------------

struct Tolerances {
  double exact = 1e-12;
  double fd1 = 1e-7;
  double fd2 = 1e-5;
};

struct IdentityDefect {
  double defect = 0.0;
  double tolerance = 0.0;

  [[nodiscard]] bool pass() const { return defect < tolerance; }
};

/// max over the grid of |a(x) − b(x)|∞
inline double grid_difference(const Field<Tensor3>& a, const Field<Tensor3>& b) {
  double worst = 0.0;
  const Chart& chart = a.chart();
  for (std::size_t p = 0; p < chart.num_points(); ++p) {
    const Point x = chart.point(p);
    worst = nan_max(worst, (a(x) - b(x)).max_abs());
  }
  return worst;
}

/// ‖sc − s̃c‖∞: spin coefficients of {g}+g·K on e against those of {g̃}+g̃·K̃ on ẽ.
inline double pullback_equality_defect(const FrameField& e, const ContorsionField& k, const TransformField& phi,
                                       const Matrix& eta) {
  const MetricField g = induce_metric(e, eta);
  const FrameField et = transform_frame(e, phi);
  const MetricField gt = induce_metric(et, eta);
  const SpinConnectionCoeffs sc = spin_coeffs(connection_from_contorsion(g, k), e, eta);
  const SpinConnectionCoeffs sct =
      spin_coeffs(connection_from_contorsion(gt, transported_contorsion(k, g, phi)), et, eta);
  return grid_difference(sc, sct);
}

inline IdentityDefect pullback_equality_check(const FrameField& e, const ContorsionField& k,
                                              const TransformField& phi, const Matrix& eta, double tol = 1e-6) {
  return {pullback_equality_defect(e, k, phi, eta), tol};
}

struct TransportReport {
  IdentityDefect h_defect;            ///< h − ({g̃} − {g})
  IdentityDefect k_defect;            ///< k − (ω̃ − ω)
  IdentityDefect ktilde_antisymmetry; ///< K̃_{(ρβ)μ}
  IdentityDefect ktilde_consistency;  ///< K̃ − g̃(g⁻¹K + k − h)
  IdentityDefect transported_projectability;
  IdentityDefect ttilde_consistency;  ///< T̃ − torsion({g̃} + g̃⁻¹K̃)
  IdentityDefect ttilde_torsionless;  ///< closed form against torsion of the transported Levi-Civita connection
  IdentityDefect pullback_equality;

  [[nodiscard]] bool pass() const {
    return h_defect.pass() && k_defect.pass() && ktilde_antisymmetry.pass() && ktilde_consistency.pass() &&
           transported_projectability.pass() && ttilde_consistency.pass() && ttilde_torsionless.pass() &&
           pullback_equality.pass();
  }
};

/// K̃_{ρβμ} − g̃_{ρα}(g^{αγ} K_{γβμ} + k^α_{βμ} − h^α_{βμ}) with h = {g̃} − {g} and k = ω̃ − ω computed
/// from their definitions, not from the closed forms.
inline double ktilde_consistency_defect(const Field<Tensor3>& ktilde, const ContorsionField& k,
                                        const MetricField& g, const TransformField& phi) {
  const MetricField gt = transform_metric(g, phi);
  const LinearConnection lc = levi_civita(g);
  const LinearConnection lct = levi_civita(gt);
  const LinearConnection omega = connection_from_contorsion(g, k);
  const LinearConnection moved = transport_connection(omega, phi);
  double worst = 0.0;
  const Chart& chart = g.chart();
  for (std::size_t p = 0; p < chart.num_points(); ++p) {
    const Point x = chart.point(p);
    const Tensor3 lc_x = lc(x);
    const Tensor3 om = omega(x);
    const Tensor3 raised = contract_first(checked_inverse(g(x), "metric"), k(x));
    const Tensor3 rhs = raised + (moved(x) - om) - (lct(x) - lc_x);
    worst = nan_max(worst, (ktilde(x) - contract_first(gt(x), rhs)).max_abs());
  }
  return worst;
}

/// Every transport identity on one (e, K, φ), reduced to grid maxima.
inline TransportReport transport_report(const FrameField& e, const ContorsionField& k, const TransformField& phi,
                                        const Matrix& eta, const Tolerances& tol = {}) {
  TransportReport r;
  const Chart& chart = e.chart();
  const MetricField g = induce_metric(e, eta);
  const MetricField gt = transform_metric(g, phi);
  const LinearConnection lc = levi_civita(g);
  const LinearConnection lct = levi_civita(gt);
  const LinearConnection omega = connection_from_contorsion(g, k);
  const LinearConnection moved = transport_connection(omega, phi);
  const Tensor3Field h = h_tensor(g, phi);
  const Tensor3Field kk = k_tensor(omega, phi);
  const Tensor3Field kt_raw = transported_contorsion_raw(k, g, phi);
  const FrameField et = transform_frame(e, phi);

  double hd = 0.0, kd = 0.0, anti = 0.0;
  for (std::size_t p = 0; p < chart.num_points(); ++p) {
    const Point x = chart.point(p);
    hd = nan_max(hd, (h(x) - (lct(x) - lc(x))).max_abs());
    kd = nan_max(kd, (kk(x) - (moved(x) - omega(x))).max_abs());
    anti = nan_max(anti, first_pair_symmetry_defect(kt_raw(x)));
  }
  r.h_defect = {hd, tol.fd1};
  r.k_defect = {kd, tol.fd1};
  r.ktilde_antisymmetry = {anti, 1e-10};
  r.ktilde_consistency = {ktilde_consistency_defect(kt_raw, k, g, phi), tol.fd1};
  r.transported_projectability = {projectability_defect(spin_coeffs(moved, et, eta)).max, tol.fd1};

  if (anti <= 1e-10) {
    const ContorsionField kt = transported_contorsion(k, g, phi);
    r.ttilde_consistency = {grid_difference(transported_torsion(k, g, phi), torsion(connection_from_contorsion(gt, kt))),
                            tol.fd1};
    r.pullback_equality = {pullback_equality_defect(e, k, phi, eta), tol.fd1};
  } else {
    r.ttilde_consistency = {std::numeric_limits<double>::quiet_NaN(), tol.fd1};
    r.pullback_equality = {std::numeric_limits<double>::quiet_NaN(), tol.fd1};
  }
  r.ttilde_torsionless = {grid_difference(torsionless_transported_torsion(g, phi),
                                          torsion(transport_connection(lc, phi))),
                          tol.fd1};
  return r;
}

}  // namespace spinframe
