// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file clifford.hpp
 * @brief Signature matrices, gamma-matrix representations of Cl(r,s), spin-group
 *        elements and the two-to-one covering map onto SO(r,s).
 *
 * Conventions:
 *  - η = diag(+1 × plus, −1 × minus): the +1 block comes first.
 *  - γ^a γ^b + γ^b γ^a = 2 η^{ab} 1, with k = 2^⌊m/2⌋.
 *  - σ^{ab} = ¼[γ^a, γ^b], and spin_exp(θ) = exp(½ θ_{ab} σ^{ab}).
 *  - covering_map(S) = L with S⁻¹ γ^a S = L^a_c γ^c.
 */

#pragma once

#include <spinframe/tensor.hpp>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinframe {

struct Signature {
  int plus = 0;
  int minus = 0;

  Signature() = default;
  Signature(int p, int q) : plus(p), minus(q) {
    if (p < 0 || q < 0 || p + q < 1)
      throw std::invalid_argument("signature needs plus >= 0, minus >= 0 and plus + minus >= 1");
  }

  [[nodiscard]] int dim() const noexcept { return plus + minus; }
  [[nodiscard]] double eta(int a) const noexcept { return a < plus ? 1.0 : -1.0; }

  friend bool operator==(const Signature&, const Signature&) = default;
};

inline Matrix build_eta(const Signature& sig) {
  const int m = sig.dim();
  Matrix eta = Matrix::Zero(m, m);
  for (int a = 0; a < m; ++a) eta(a, a) = sig.eta(a);
  return eta;
}

/// Largest chart dimension for which a gamma representation is built (k = 64).
inline constexpr int kMaxCliffordDim = 12;

struct GammaRep {
  Signature signature;
  int k = 0;
  std::vector<CMatrix> gammas;  ///< γ^a, upper frame index

  [[nodiscard]] int dim() const noexcept { return signature.dim(); }

  /// γ_a = η_{ab} γ^b.
  [[nodiscard]] CMatrix lower(int a) const { return signature.eta(a) * gammas[a]; }

  /// max_{a,b} ‖γ^a γ^b + γ^b γ^a − 2 η^{ab} 1‖∞
  [[nodiscard]] double anticommutator_defect() const {
    const int m = dim();
    double worst = 0.0;
    const CMatrix id = CMatrix::Identity(k, k);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        CMatrix ac = gammas[a] * gammas[b] + gammas[b] * gammas[a];
        if (a == b) ac -= 2.0 * signature.eta(a) * id;
        worst = nan_max(worst, max_abs(ac));
      }
    return worst;
  }
};

namespace detail {

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline std::array<CMatrix, 4> pauli() {
  CMatrix id(2, 2), s1(2, 2), s2(2, 2), s3(2, 2);
  const Complex I(0.0, 1.0);
  id << 1.0, 0.0, 0.0, 1.0;
  s1 << 0.0, 1.0, 1.0, 0.0;
  s2 << 0.0, -I, I, 0.0;
  s3 << 1.0, 0.0, 0.0, -1.0;
  return {id, s1, s2, s3};
}

// Euclidean generators for Cl(n, 0) by iterated tensor products:
//   Γ_{2j}   = σ3⊗…⊗σ3 ⊗ σ1 ⊗ 1⊗…⊗1
//   Γ_{2j+1} = σ3⊗…⊗σ3 ⊗ σ2 ⊗ 1⊗…⊗1
// and for odd n the last one is σ3⊗…⊗σ3.
inline std::vector<CMatrix> euclidean_gammas(int n) {
  const int half = n / 2;
  const auto [id, s1, s2, s3] = pauli();
  std::vector<CMatrix> out;
  auto chain = [&](int slot, const CMatrix& middle) {
    CMatrix acc = CMatrix::Identity(1, 1);
    for (int j = 0; j < half; ++j) acc = kron(acc, j < slot ? s3 : (j == slot ? middle : id));
    return acc;
  };
  for (int j = 0; j < half; ++j) {
    out.push_back(chain(j, s1));
    out.push_back(chain(j, s2));
  }
  if (n % 2 == 1) out.push_back(chain(half, id));  // every slot < half gets σ3
  return out;
}

}  // namespace detail

/**
 * Gamma matrices for the given signature. Deterministic: the same signature
 * always yields bitwise-identical matrices. Throws std::invalid_argument for
 * m > 12.
 */
inline GammaRep build_gamma(const Signature& sig) {
  const int m = sig.dim();
  if (m < 1) throw std::invalid_argument("build_gamma: dimension must be >= 1");
  if (m > kMaxCliffordDim)
    throw std::invalid_argument("build_gamma: dimension " + std::to_string(m) +
                                " exceeds the supported maximum of " + std::to_string(kMaxCliffordDim));

  GammaRep rep;
  rep.signature = sig;
  rep.gammas = detail::euclidean_gammas(m);
  rep.k = static_cast<int>(rep.gammas.front().rows());
  const Complex I(0.0, 1.0);
  for (int a = sig.plus; a < m; ++a) rep.gammas[a] *= I;

  // covering_map relies on tr(γ^a γ^b) = k η^{ab}
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const Complex tr = (rep.gammas[a] * rep.gammas[b]).trace();
      const double expect = a == b ? rep.k * sig.eta(a) : 0.0;
      if (std::abs(tr - expect) > 1e-12)
        throw std::logic_error("build_gamma: trace orthogonality violated");
    }
  return rep;
}

/// σ^{ab} = ¼[γ^a, γ^b]
inline CMatrix sigma(const GammaRep& rep, int a, int b) {
  return 0.25 * (rep.gammas[a] * rep.gammas[b] - rep.gammas[b] * rep.gammas[a]);
}

/// exp(A) by scaling and squaring with a truncated Taylor series.
inline CMatrix matrix_exp(const CMatrix& a, double tol = 1e-14) {
  const Eigen::Index n = a.rows();
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMatrix scaled = a / std::ldexp(1.0, squarings);

  CMatrix sum = CMatrix::Identity(n, n);
  CMatrix term = CMatrix::Identity(n, n);
  for (int j = 1; j <= 40; ++j) {
    term = term * scaled / static_cast<double>(j);
    sum += term;
    if (max_abs(term) <= tol * max_abs(sum)) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

class SpinElement;
SpinElement spin_exp(const GammaRep& rep, const Matrix& theta);

/// Element of Spin(r,s) in the representation. Only spin_exp, products,
/// inverses and negation produce one.
class SpinElement {
 public:
  [[nodiscard]] const CMatrix& matrix() const noexcept { return s_; }

  [[nodiscard]] SpinElement inverse() const { return SpinElement(s_.inverse()); }
  friend SpinElement operator-(const SpinElement& s) { return SpinElement(-s.s_); }
  friend SpinElement operator*(const SpinElement& a, const SpinElement& b) {
    return SpinElement(a.s_ * b.s_);
  }

 private:
  explicit SpinElement(CMatrix s) : s_(std::move(s)) {}
  friend SpinElement spin_exp(const GammaRep& rep, const Matrix& theta);

  CMatrix s_;
};

/// S = exp(½ θ_{ab} σ^{ab}). θ must be antisymmetric.
inline SpinElement spin_exp(const GammaRep& rep, const Matrix& theta) {
  const int m = rep.dim();
  if (theta.rows() != m || theta.cols() != m)
    throw std::invalid_argument("spin_exp: theta must be m x m");
  const double scale = std::max(1.0, max_abs(theta));
  if (max_abs(Matrix(theta + theta.transpose())) > 1e-12 * scale)
    throw std::invalid_argument("spin_exp: theta is not antisymmetric");

  CMatrix gen = CMatrix::Zero(rep.k, rep.k);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (theta(a, b) != 0.0) gen += theta(a, b) * sigma(rep, a, b);  // ½(θ_ab σ^ab + θ_ba σ^ba)
  return SpinElement(matrix_exp(gen));
}

/**
 * L^a_c = (1/k) η_{cb} tr(γ^b S⁻¹ γ^a S), so that S⁻¹ γ^a S = L^a_c γ^c.
 * Throws GeometryError if the extracted L is not real or does not reproduce
 * the conjugation, i.e. S does not normalise the span of the generators.
 */
inline Matrix covering_map(const GammaRep& rep, const CMatrix& s, double tol = 1e-10) {
  const int m = rep.dim();
  if (s.rows() != rep.k || s.cols() != rep.k)
    throw std::invalid_argument("covering_map: element has the wrong size");
  const CMatrix s_inv = s.inverse();
  Matrix out(m, m);
  double imag = 0.0;
  double recon = 0.0;
  for (int a = 0; a < m; ++a) {
    const CMatrix conj = s_inv * rep.gammas[a] * s;
    CMatrix rebuilt = CMatrix::Zero(rep.k, rep.k);
    for (int c = 0; c < m; ++c) {
      const Complex l = rep.signature.eta(c) * (rep.gammas[c] * conj).trace() / static_cast<double>(rep.k);
      imag = nan_max(imag, std::abs(l.imag()));
      out(a, c) = l.real();
      rebuilt += l.real() * rep.gammas[c];
    }
    recon = nan_max(recon, max_abs(CMatrix(rebuilt - conj)));
  }
  const double scale = std::max(1.0, max_abs(out));
  if (!(imag <= tol * scale) || !(recon <= tol * scale))
    throw GeometryError("covering_map: element is not in the spin group (imaginary part " +
                        std::to_string(imag) + ", conjugation residual " + std::to_string(recon) + ")");
  return out;
}

inline Matrix covering_map(const GammaRep& rep, const SpinElement& s, double tol = 1e-10) {
  return covering_map(rep, s.matrix(), tol);
}

}  // namespace spinframe
