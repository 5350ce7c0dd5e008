// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file dirac.hpp
 * @brief Spinor covariant derivative, Dirac residual and its covariance checks.
 *
 *   ∇̂_μ ψ = ∂_μ ψ + ¼ ω^{ab}_μ γ_a γ_b ψ,     γ_a = η_{ab} γ^b
 *   R     = i e^μ_a γ^a ∇̂_μ ψ + μ ψ
 */

#pragma once

#include <spinframe/chart.hpp>
#include <spinframe/clifford.hpp>
#include <spinframe/connection.hpp>
#include <spinframe/transform.hpp>

#include <memory>
#include <vector>

namespace spinframe {

struct DiracParams {
  double mass = 0.0;
  GammaRep rep;
};

/// ¼ ω^{ab}_μ γ_a γ_b for one direction μ.
inline CMatrix spinor_connection_at(const Tensor3& sc, int mu, const GammaRep& rep) {
  const int m = rep.dim();
  CMatrix a = CMatrix::Zero(rep.k, rep.k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double w = sc(i, j, mu);
      if (w != 0.0) a += (0.25 * w) * (rep.lower(i) * rep.lower(j));
    }
  return a;
}

/// ∇̂_μ ψ for every μ; dpsi[μ] = ∂_μ ψ.
inline std::vector<CVector> spinor_cov_deriv_at(const CVector& psi, const std::vector<CVector>& dpsi,
                                                const Tensor3& sc, const GammaRep& rep) {
  std::vector<CVector> out;
  out.reserve(dpsi.size());
  for (int mu = 0; mu < rep.dim(); ++mu)
    out.push_back(dpsi[static_cast<std::size_t>(mu)] + spinor_connection_at(sc, mu, rep) * psi);
  return out;
}

/// i e^μ_a γ^a v_μ + μ ψ
inline CVector dirac_contract_at(const Matrix& frame, const std::vector<CVector>& nabla, const CVector& psi,
                                 const DiracParams& p) {
  const int m = p.rep.dim();
  CVector acc = CVector::Zero(p.rep.k);
  for (int mu = 0; mu < m; ++mu) {
    CMatrix slash = CMatrix::Zero(p.rep.k, p.rep.k);
    for (int a = 0; a < m; ++a)
      if (frame(mu, a) != 0.0) slash += frame(mu, a) * p.rep.gammas[a];
    acc += slash * nabla[static_cast<std::size_t>(mu)];
  }
  return Complex(0.0, 1.0) * acc + p.mass * psi;
}

/// ∇̂_μ ψ as a field of k × m matrices (column μ).
inline Field<CMatrix> spinor_cov_deriv(const SpinorField& psi, const SpinConnectionCoeffs& sc, const GammaRep& rep) {
  return Field<CMatrix>(psi.chart_ptr(), [psi, sc, rep](const Point& x) {
    const auto d = spinor_cov_deriv_at(psi(x), gradient_at<CVector>(psi, psi.chart(), x), sc(x), rep);
    CMatrix out(rep.k, rep.dim());
    for (int mu = 0; mu < rep.dim(); ++mu) out.col(mu) = d[static_cast<std::size_t>(mu)];
    return out;
  });
}

inline SpinorField dirac_residual(const FrameField& e, const Field<Tensor3>& sc, const SpinorField& psi,
                                  const DiracParams& p) {
  return SpinorField(e.chart_ptr(), [e, sc, psi, p](const Point& x) {
    const CVector v = psi(x);
    const auto nabla = spinor_cov_deriv_at(v, gradient_at<CVector>(psi, psi.chart(), x), sc(x), p.rep);
    return dirac_contract_at(e(x), nabla, v, p);
  });
}

/// max over the grid of |a(x) − b(x)|∞ for spinor fields
inline double grid_difference(const SpinorField& a, const SpinorField& b) {
  double worst = 0.0;
  const Chart& chart = a.chart();
  for (std::size_t i = 0; i < chart.num_points(); ++i) {
    const Point x = chart.point(i);
    worst = nan_max(worst, max_abs(CVector(a(x) - b(x))));
  }
  return worst;
}

/// R({g}+g·K) − R({g}) against i e^μ_a γ^a ¼ K^{bc}_μ γ_b γ_c ψ.
inline double contorsion_split_check(const FrameField& e, const MetricField& g, const ContorsionField& k,
                                     const SpinorField& psi, const DiracParams& p) {
  const Matrix eta = build_eta(p.rep.signature);
  const SpinorField total = dirac_residual(e, spin_coeffs(connection_from_contorsion(g, k), e, eta), psi, p);
  const SpinorField lc = dirac_residual(e, spin_coeffs(levi_civita(g), e, eta), psi, p);
  const Tensor3Field kf = frame_contorsion(k, e, eta);
  const DiracParams massless{0.0, p.rep};
  const SpinorField extra(e.chart_ptr(), [e, kf, psi, massless](const Point& x) {
    const CVector v = psi(x);
    const Tensor3 kv = kf(x);
    std::vector<CVector> terms;
    for (int mu = 0; mu < massless.rep.dim(); ++mu) terms.push_back(spinor_connection_at(kv, mu, massless.rep) * v);
    return dirac_contract_at(e(x), terms, v, massless);
  });
  const SpinorField diff(e.chart_ptr(), [total, lc](const Point& x) { return CVector(total(x) - lc(x)); });
  return grid_difference(diff, extra);
}

/**
 * Spin-transformation covariance. With M = covering_map(S⁻¹):
 *   e′ = e M,  Ω′ = M⁻¹ Ω M + M⁻¹ ∂M  (Ω^a_c = ω^{ab} η_{bc}),  ψ′ = S ψ,
 * and R′ must equal S R pointwise. Returns max |R′ − S R|.
 */
inline double covariance_check(const FrameField& e, const SpinConnectionCoeffs& sc, const SpinorField& psi,
                               const DiracParams& p, const SpinElementField& s) {
  const GammaRep& rep = p.rep;
  const Matrix eta = build_eta(rep.signature);
  const int m = rep.dim();
  const auto chart = e.chart_ptr();

  const MatrixField lorentz(chart, [s, rep](const Point& x) { return covering_map(rep, s(x).inverse()); });
  const FrameField e2(chart, [e, lorentz](const Point& x) { return Matrix(e(x) * lorentz(x)); });
  const SpinConnectionCoeffs sc2(chart, [sc, lorentz, eta, m](const Point& x) {
    const Matrix l = lorentz(x);
    const Matrix l_inv = checked_inverse(l, "Lorentz transformation");
    const auto dl = gradient_at<Matrix>(lorentz, lorentz.chart(), x);
    const Tensor3 w = sc(x);
    Tensor3 out(m);
    for (int mu = 0; mu < m; ++mu) {
      const Matrix mixed = l_inv * (w.slice(mu) * eta) * l + l_inv * dl[static_cast<std::size_t>(mu)];
      out.set_slice(mu, mixed * eta);
    }
    return out;
  });
  const SpinorField psi2(chart, [s, psi](const Point& x) { return CVector(s(x).matrix() * psi(x)); });

  const SpinorField r = dirac_residual(e, sc, psi, p);
  const SpinorField r2 = dirac_residual(e2, sc2, psi2, p);
  const SpinorField moved(chart, [s, r](const Point& x) { return CVector(s(x).matrix() * r(x)); });
  return grid_difference(r2, moved);
}

struct FrameTransformDiracResult {
  double coefficient_defect = 0.0;  ///< ‖sc − s̃c‖∞
  double residual_gap = 0.0;        ///< ‖R(e, s̃c) − R(e, sc)‖∞
};

/// Dirac operators built from (e, {g}+g·K) and (ẽ, {g̃}+g̃·K̃) share their spin coefficients.
inline FrameTransformDiracResult frame_transform_dirac_check(const FrameField& e, const ContorsionField& k,
                                                             const TransformField& phi, const SpinorField& psi,
                                                             const DiracParams& p) {
  const Matrix eta = build_eta(p.rep.signature);
  const MetricField g = induce_metric(e, eta);
  const FrameField et = transform_frame(e, phi);
  const MetricField gt = induce_metric(et, eta);
  const SpinConnectionCoeffs sc = spin_coeffs(connection_from_contorsion(g, k), e, eta);
  const SpinConnectionCoeffs sct = spin_coeffs(connection_from_contorsion(gt, transported_contorsion(k, g, phi)), et, eta);
  FrameTransformDiracResult out;
  out.coefficient_defect = grid_difference(sc, sct);
  out.residual_gap = grid_difference(dirac_residual(e, sc, psi, p), dirac_residual(e, sct, psi, p));
  return out;
}

}  // namespace spinframe
