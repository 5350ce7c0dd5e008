// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <spinframe/scenario.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace sf = spinframe;
using sf::CMatrix;
using sf::Complex;
using sf::CVector;
using sf::Matrix;
using sf::Point;
using sf::Tensor3;

namespace {

const std::string kDir = SPINFRAME_SCENARIO_DIR;
const std::vector<std::string> kStock{"flat2d", "polar", "polar_diag", "spherical_g1", "minkowski_g2", "lorentz31"};
// scenarios with a curved frame or a non-trivial transformation, for the per-seed transport criteria
const std::vector<std::string> kTransportSet{"polar", "spherical_g1", "minkowski_g2", "lorentz31"};

constexpr int kRandomK = 5;
constexpr int kPhiSeeds = 3;
constexpr int kSpinSeeds = 5;

sf::Scenario stock(const std::string& name) { return sf::load_scenario(kDir + "/" + name + ".json"); }

/// One measured quantity against its bound.
struct Measure {
  std::string label;
  double worst = 0.0;
  double bound = 0.0;

  void add(double v) { worst = sf::nan_max(worst, v); }
  [[nodiscard]] bool ok() const { return std::isfinite(worst) && worst < bound; }
};

struct Criterion {
  int id;
  std::string title;
  std::deque<Measure> measures;  // references handed out by m() stay valid
  std::string note;

  Measure& m(const std::string& label, double bound) {
    for (auto& x : measures)
      if (x.label == label) return x;
    measures.push_back({label, 0.0, bound});
    return measures.back();
  }
  [[nodiscard]] bool ok() const {
    for (const auto& x : measures)
      if (!x.ok()) return false;
    return note.empty();
  }
};

double max_matrix_diff(const sf::MatrixField& a, const std::function<Matrix(const Point&)>& b) {
  double worst = 0;
  for (const auto& x : a.chart().grid()) worst = sf::nan_max(worst, sf::max_abs(Matrix(a(x) - b(x))));
  return worst;
}

sf::ContorsionField random_k(const sf::Scenario& s, std::uint64_t seed) {
  return sf::FieldSampler(s.chart, seed).contorsion(0.5);
}

sf::TransformField random_phi(const sf::Scenario& s, std::uint64_t seed) {
  return sf::FieldSampler(s.chart, seed).transform();
}

void clifford(Criterion& c) {
  auto& anti = c.m("anticommutator", 1e-13);
  auto& hom = c.m("homomorphism", 1e-10);
  auto& orth = c.m("eta-orthogonality", 1e-10);
  auto& sign = c.m("L(-S)-L(S) bitwise", 0.5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int m = 1; m <= 6; ++m)
    for (int q = 0; q <= m; ++q) {
      const sf::Signature sig(m - q, q);
      const auto rep = sf::build_gamma(sig);
      const Matrix eta = sf::build_eta(sig);
      anti.add(rep.anticommutator_defect());
      for (int trial = 0; trial < 3; ++trial) {
        Matrix th1 = Matrix::Zero(m, m), th2 = Matrix::Zero(m, m);
        for (int i = 0; i < m; ++i)
          for (int j = i + 1; j < m; ++j) {
            th1(i, j) = 0.8 * u(rng);
            th1(j, i) = -th1(i, j);
            th2(i, j) = 0.8 * u(rng);
            th2(j, i) = -th2(i, j);
          }
        const auto s1 = sf::spin_exp(rep, th1);
        const auto s2 = sf::spin_exp(rep, th2);
        const Matrix l1 = sf::covering_map(rep, s1);
        const Matrix l2 = sf::covering_map(rep, s2);
        hom.add(sf::max_abs(Matrix(sf::covering_map(rep, s1 * s2) - l1 * l2)));
        orth.add(sf::max_abs(Matrix(l1.transpose() * eta * l1 - eta)));
        sign.add(sf::covering_map(rep, -s1) == l1 ? 0.0 : 1.0);
      }
    }
}

void metric_induction(Criterion& c) {
  auto& polar = c.m("polar diag(1,r^2)", 1e-12);
  auto& g1 = c.m("g1", 1e-12);
  auto& g2 = c.m("g2", 1e-10);
  {
    const auto s = stock("polar");
    const auto g = sf::induce_metric(*s.frame, s.eta);
    polar.add(max_matrix_diff(g, [](const Point& x) {
      Matrix e = Matrix::Zero(2, 2);
      e.diagonal() << 1.0, x[0] * x[0];
      return e;
    }));
  }
  {
    const auto s = stock("spherical_g1");
    const auto g = sf::induce_metric(*s.frame, s.eta);
    g1.add(max_matrix_diff(g, [](const Point& x) {
      Matrix e = Matrix::Zero(3, 3);
      e.diagonal() << -1.0, x[0] * x[0], std::pow(x[0] * std::sin(x[1]), 2);
      return e;
    }));
  }
  {
    const auto s = stock("minkowski_g2");
    const auto gt = sf::transform_metric(sf::induce_metric(*s.frame, s.eta), *s.transform);
    g2.add(max_matrix_diff(gt, [](const Point& x) {
      const double r = x[0], th = x[1];
      Matrix e = Matrix::Zero(3, 3);
      e(0, 0) = -std::cos(2 * th);
      e(0, 1) = e(1, 0) = r * std::sin(2 * th);
      e(1, 1) = r * r * std::cos(2 * th);
      e(2, 2) = std::pow(r * std::sin(th), 2);
      return e;
    }));
  }
}

void vertical_invariance(Criterion& c) {
  auto& m = c.m("|g'-g|", 1e-9);
  for (const auto& name : kStock) {
    const auto s = stock(name);
    const auto g = sf::induce_metric(*s.frame, s.eta);
    for (int i = 0; i < kSpinSeeds; ++i) {
      const auto spin = sf::FieldSampler(s.chart, 500 + static_cast<std::uint64_t>(i)).spin_element(s.rep, 1.0);
      const auto g2 = sf::induce_metric(sf::change_trivialization(*s.frame, spin, s.rep), s.eta);
      m.add(max_matrix_diff(g2, [g](const Point& x) { return g(x); }));
    }
  }
}

void projectability(Criterion& c) {
  auto& lc = c.m("Levi-Civita", 1e-7);
  auto& withk = c.m("with random K", 1e-7);
  for (const auto& name : kStock) {
    const auto s = stock(name);
    const auto g = sf::induce_metric(*s.frame, s.eta);
    lc.add(sf::projectability_defect(sf::spin_coeffs(sf::levi_civita(g), *s.frame, s.eta)).max);
    for (int i = 0; i < kRandomK; ++i) {
      const auto k = random_k(s, 700 + static_cast<std::uint64_t>(i));
      withk.add(sf::projectability_defect(sf::spin_coeffs(sf::connection_from_contorsion(g, k), *s.frame, s.eta)).max);
    }
  }
}

void roundtrips(Criterion& c) {
  auto& kt = c.m("K->T->K", 1e-8);
  auto& tk = c.m("T->K->T", 1e-8);
  for (const auto& name : kStock) {
    const auto s = stock(name);
    const auto g = sf::induce_metric(*s.frame, s.eta);
    const auto k = random_k(s, 800);
    kt.add(sf::grid_difference(sf::contorsion_from_torsion(g, sf::torsion(sf::connection_from_contorsion(g, k))), k));
    const auto t = sf::FieldSampler(s.chart, 801).torsion(0.5);
    tk.add(sf::grid_difference(sf::torsion(sf::connection_from_contorsion(g, sf::contorsion_from_torsion(g, t))), t));
    tk.add(sf::grid_difference(sf::torsion(sf::connection_from_torsion_tensor(g, t)), t));
  }
}

struct TransportCase {
  sf::Scenario s;
  sf::MetricField g;
  sf::ContorsionField k;
  sf::TransformField phi;
};

std::vector<TransportCase> transport_cases() {
  std::vector<TransportCase> out;
  for (const auto& name : kTransportSet) {
    const auto s = stock(name);
    const auto g = sf::induce_metric(*s.frame, s.eta);
    for (int i = 0; i < kPhiSeeds; ++i) {
      const auto seed = 900 + static_cast<std::uint64_t>(i);
      out.push_back({s, g, random_k(s, seed + 50), random_phi(s, seed)});
    }
  }
  return out;
}

void lemmas(Criterion& c, const std::vector<TransportCase>& cases) {
  auto& h = c.m("h", 1e-6);
  auto& k = c.m("k", 1e-8);
  for (const auto& tc : cases) {
    const auto lc = sf::levi_civita(tc.g);
    const auto lct = sf::levi_civita(sf::transform_metric(tc.g, tc.phi));
    h.add(sf::grid_difference(sf::h_tensor(tc.g, tc.phi),
                              sf::Tensor3Field(tc.s.chart, [lc, lct](const Point& x) { return Tensor3(lct(x) - lc(x)); })));
    const auto omega = sf::connection_from_contorsion(tc.g, tc.k);
    const auto moved = sf::transport_connection(omega, tc.phi);
    k.add(sf::grid_difference(sf::k_tensor(omega, tc.phi),
                              sf::Tensor3Field(tc.s.chart, [omega, moved](const Point& x) { return Tensor3(moved(x) - omega(x)); })));
  }
}

void ktilde(Criterion& c, const std::vector<TransportCase>& cases) {
  auto& anti = c.m("antisymmetry", 1e-10);
  auto& cons = c.m("K+k-h consistency", 1e-6);
  auto& proj = c.m("transported projectability", 1e-6);
  for (const auto& tc : cases) {
    const auto raw = sf::transported_contorsion_raw(tc.k, tc.g, tc.phi);
    anti.add(sf::grid_max(raw, [](const Tensor3& t) { return sf::first_pair_symmetry_defect(t); }));
    cons.add(sf::ktilde_consistency_defect(raw, tc.k, tc.g, tc.phi));
    const auto moved = sf::transport_connection(sf::connection_from_contorsion(tc.g, tc.k), tc.phi);
    proj.add(sf::projectability_defect(sf::spin_coeffs(moved, sf::transform_frame(*tc.s.frame, tc.phi), tc.s.eta)).max);
  }
}

void ttilde(Criterion& c, const std::vector<TransportCase>& cases) {
  auto& gen = c.m("general", 1e-6);
  auto& tless = c.m("torsionless", 1e-6);
  for (const auto& tc : cases) {
    const auto gt = sf::transform_metric(tc.g, tc.phi);
    gen.add(sf::grid_difference(sf::transported_torsion(tc.k, tc.g, tc.phi),
                                sf::torsion(sf::connection_from_contorsion(gt, sf::transported_contorsion(tc.k, tc.g, tc.phi)))));
    tless.add(sf::grid_difference(sf::torsionless_transported_torsion(tc.g, tc.phi),
                                  sf::torsion(sf::transport_connection(sf::levi_civita(tc.g), tc.phi))));
  }
}

void pullback(Criterion& c) {
  auto& m = c.m("|sc - sc~|", 1e-6);
  for (const auto& name : kStock) {
    const auto s = stock(name);
    const auto f = sf::resolve_fields(s);
    m.add(sf::pullback_equality_defect(*s.frame, f.k, f.phi, s.eta));
  }
}

double plane_wave_residual() {
  const auto s = stock("flat2d");
  const double mass = s.mass;
  Eigen::VectorXd p(2);
  p << mass * std::cos(0.9), mass * std::sin(0.9);
  CMatrix op = mass * CMatrix::Identity(s.rep.k, s.rep.k);
  for (int a = 0; a < 2; ++a) op -= p[a] * s.rep.gammas[static_cast<std::size_t>(a)];
  Eigen::JacobiSVD<CMatrix> svd(op, Eigen::ComputeFullV);
  const CVector u = svd.matrixV().col(s.rep.k - 1);
  const sf::SpinorField psi(s.chart, [u, p](const Point& x) { return CVector(u * std::exp(Complex(0, 1) * p.dot(x))); });
  const sf::SpinConnectionCoeffs zero(s.chart, [](const Point&) { return Tensor3(2); });
  const auto r = sf::dirac_residual(*s.frame, zero, psi, {mass, s.rep});
  double worst = 0;
  for (const auto& x : s.chart->grid()) worst = sf::nan_max(worst, sf::max_abs(CVector(r(x))));
  return worst;
}

void dirac(Criterion& c) {
  auto& pw = c.m("plane wave", 1e-6);
  auto& split = c.m("split", 1e-8);
  auto& cov = c.m("covariance", 1e-6);
  auto& ft = c.m("frame-transform", 1e-6);
  pw.add(plane_wave_residual());
  for (const auto& name : kStock) {
    const auto s = stock(name);
    const auto f = sf::resolve_fields(s);
    const sf::DiracParams dp{s.mass, s.rep};
    split.add(sf::contorsion_split_check(*s.frame, f.g, f.k, f.psi, dp));
    const auto sc = sf::spin_coeffs(sf::connection_from_contorsion(f.g, f.k), *s.frame, s.eta);
    for (const auto& spin : f.spin_fields) cov.add(sf::covariance_check(*s.frame, sc, f.psi, dp, spin));
    const auto res = sf::frame_transform_dirac_check(*s.frame, f.k, f.phi, f.psi, dp);
    ft.add(res.coefficient_defect);
    ft.add(res.residual_gap);
  }
}

void fault_injection(Criterion& c) {
  // log3 of defect / 1e-3 must lie within [-1, 1]
  auto& m = c.m("|log3(defect/1e-3)|", 1.0 + 1e-12);
  const double delta = 1e-3;
  for (const auto& name : {"polar", "spherical_g1", "lorentz31"}) {
    auto s = stock(name);
    const int dim = s.signature.dim();
    const std::vector<std::array<int, 3>> picks{{0, 1, 0}, {1, 0, dim - 1}, {dim - 1, dim - 1, 0}, {0, 0, 1}};
    for (const auto& idx : picks) {
      s.inject = sf::Injection{idx, delta};
      const auto r = sf::run_checks(s, {"ktilde-theorem"});
      const auto& chk = r.checks.at(0);
      m.add(std::abs(std::log(chk.defect / delta) / std::log(3.0)));
      if (chk.pass) c.note = "an injected perturbation passed check 7";
    }
  }
}

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2e", v);
  return b;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Criterion> all{
      {1, "Clifford algebra and covering map", {}, {}},
      {2, "metric induction (polar, g1, g2)", {}, {}},
      {3, "vertical-automorphism metric invariance", {}, {}},
      {4, "projectability", {}, {}},
      {5, "torsion/contorsion roundtrips", {}, {}},
      {6, "lemmas h and k", {}, {}},
      {7, "transported contorsion", {}, {}},
      {8, "transported torsion", {}, {}},
      {9, "pullback equality", {}, {}},
      {10, "Dirac residual identities", {}, {}},
      {11, "fault injection detected by check 7", {}, {}},
  };
  const auto cases = transport_cases();
  const std::vector<std::function<void(Criterion&)>> runners{
      clifford,
      metric_induction,
      vertical_invariance,
      projectability,
      roundtrips,
      [&](Criterion& c) { lemmas(c, cases); },
      [&](Criterion& c) { ktilde(c, cases); },
      [&](Criterion& c) { ttilde(c, cases); },
      pullback,
      dirac,
      fault_injection,
  };

  bool ok = true;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Criterion& c = all[i];
    try {
      runners[i](c);
    } catch (const std::exception& e) {
      c.note = std::string("error: ") + e.what();
    }
    std::string line = (c.ok() ? "PASS" : "FAIL") + std::string("  criterion ") + std::to_string(c.id) + ": " + c.title;
    for (const auto& m : c.measures) line += " | " + m.label + " " + fmt(m.worst) + " < " + fmt(m.bound);
    if (!c.note.empty()) line += " | " + c.note;
    std::printf("%s\n", line.c_str());
    ok = ok && c.ok();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s  total %.1f s\n", ok ? "ALL PASS" : "SOME CRITERIA FAILED", secs);
  return ok ? 0 : 1;
}
