// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file scenario.hpp
 * @brief JSON scenario files, the fixed check list, and the JSON report.
 *
 * Scenario (schema 1):
 *
 *   {
 *     "schema": 1,
 *     "name": "polar",                                  optional
 *     "signature": {"plus": 2, "minus": 0},
 *     "chart": {"coords": ["r", "th"], "ranges": [[1, 2], [0.2, 1.2]],
 *               "samples": [8, 8], "fd_step": 1e-5},   samples, fd_step optional
 *     "frame": [["1", "0"], ["0", "1/r"]],             e^μ_a, row μ, column a
 *     "transform": [[...]],                             φ^μ_ν, optional
 *     "contorsion": [[[...]]] or "random",              K_{γβμ}, optional
 *     "torsion": [[[...]]],                             T^λ_{βμ}, optional, not with contorsion
 *     "spinor": [["re", "im"], ...],                    k components, optional
 *     "spin_transform": [[...]],                        θ_{ab}(x) for S = exp(½ θ_{ab} σ^{ab}), optional
 *     "mass": 0.5,
 *     "tolerances": {"exact": 1e-12, "fd1": 1e-7, "fd2": 1e-5},
 *     "seed": 42,
 *     "expected_metric": [[...]],                       optional
 *     "expected_transformed_metric": [[...]],           optional
 *     "inject": {"target": "ktilde", "index": [0, 1, 0], "delta": 1e-3}   optional
 *   }
 *
 * A missing transform or spinor is replaced by a seeded random field; five
 * seeded random spin transformations are always added to any given one. A
 * missing contorsion/torsion means K = 0.
 */

#pragma once

#include <spinframe/chart.hpp>
#include <spinframe/clifford.hpp>
#include <spinframe/connection.hpp>
#include <spinframe/dirac.hpp>
#include <spinframe/random_fields.hpp>
#include <spinframe/transform.hpp>

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace spinframe {

inline constexpr const char* kToolName = "spinframe";
inline constexpr const char* kToolVersion = "0.1.0";

/// Schema or sampling problem in a scenario file; `pointer` is a JSON pointer into the document.
class LoadError : public std::runtime_error {
 public:
  LoadError(std::string pointer, const std::string& msg)
      : std::runtime_error(pointer.empty() ? msg : pointer + ": " + msg), pointer_(std::move(pointer)) {}
  [[nodiscard]] const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

struct Injection {
  std::array<int, 3> index{};
  double delta = 0.0;
};

struct Scenario {
  std::string name;
  Signature signature;
  GammaRep rep;
  Matrix eta;
  std::shared_ptr<const Chart> chart;
  std::optional<FrameField> frame;
  std::optional<TransformField> transform;     ///< as given; empty means random
  std::optional<ContorsionField> contorsion;   ///< as given or converted from torsion
  std::optional<TorsionField> torsion;         ///< as given
  bool random_contorsion = false;              ///< seeded random K instead of expressions
  std::optional<SpinorField> spinor;
  std::optional<MatrixField> spin_theta;
  std::optional<MatrixField> expected_metric;
  std::optional<MatrixField> expected_transformed_metric;
  std::optional<Injection> inject;
  double mass = 0.0;
  Tolerances tol;
  std::uint64_t seed = 0;
  std::string digest;  ///< FNV-1a 64 of the canonical document
};

namespace detail {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

using json = nlohmann::json;

class Loader {
 public:
  explicit Loader(const json& doc) : doc_(doc) {}

  Scenario load() {
    Scenario s;
    require_object(doc_, "");
    if (doc_.contains("schema") && !(doc_["schema"].is_number_integer() && doc_["schema"].get<int>() == 1))
      throw LoadError("/schema", "unsupported schema (expected 1)");
    s.name = doc_.contains("name") ? string_at(doc_["name"], "/name") : "";

    const json& sig = member(doc_, "signature", "");
    try {
      s.signature = Signature(int_at(member(sig, "plus", "/signature"), "/signature/plus"),
                              int_at(member(sig, "minus", "/signature"), "/signature/minus"));
      s.rep = build_gamma(s.signature);
    } catch (const std::invalid_argument& e) {
      throw LoadError("/signature", e.what());
    }
    s.eta = build_eta(s.signature);
    const int m = s.signature.dim();

    s.chart = load_chart(member(doc_, "chart", ""), m);
    coords_ = s.chart->coords();

    try {
      s.frame = make_frame(matrix_field(matrix_def(member(doc_, "frame", ""), "/frame", m, s.chart), s.chart));
    } catch (const GeometryError& e) {
      throw LoadError("/frame", e.what());
    }
    if (doc_.contains("transform")) {
      try {
        s.transform = make_transform(matrix_field(matrix_def(doc_["transform"], "/transform", m, s.chart), s.chart));
      } catch (const GeometryError& e) {
        throw LoadError("/transform", e.what());
      }
    }

    if (doc_.contains("contorsion") && doc_.contains("torsion"))
      throw LoadError("", "give either contorsion or torsion, not both");
    if (doc_.contains("contorsion") && doc_["contorsion"].is_string()) {
      if (doc_["contorsion"].get<std::string>() != "random")
        throw LoadError("/contorsion", "expected an m x m x m array or \"random\"");
      s.random_contorsion = true;
    } else if (doc_.contains("contorsion"))
      s.contorsion = make_contorsion(tensor3_field(tensor3_def(doc_["contorsion"], "/contorsion", m, s.chart), s.chart));
    if (doc_.contains("torsion"))
      s.torsion = make_torsion(tensor3_field(tensor3_def(doc_["torsion"], "/torsion", m, s.chart), s.chart));

    if (doc_.contains("spinor")) s.spinor = spinor_field(spinor_def(doc_["spinor"], "/spinor", s.rep.k, s.chart), s.chart);
    if (doc_.contains("spin_transform")) {
      const MatrixField raw = matrix_field(matrix_def(doc_["spin_transform"], "/spin_transform", m, s.chart), s.chart);
      s.spin_theta = MatrixField(s.chart, [raw](const Point& x) {
        const Matrix v = raw(x);
        return Matrix(0.5 * (v - v.transpose()));
      });
    }
    if (doc_.contains("expected_metric"))
      s.expected_metric = matrix_field(matrix_def(doc_["expected_metric"], "/expected_metric", m, s.chart), s.chart);
    if (doc_.contains("expected_transformed_metric")) {
      if (!s.transform) throw LoadError("/expected_transformed_metric", "needs an explicit transform");
      s.expected_transformed_metric = matrix_field(
          matrix_def(doc_["expected_transformed_metric"], "/expected_transformed_metric", m, s.chart), s.chart);
    }

    if (doc_.contains("mass")) s.mass = number_at(doc_["mass"], "/mass");
    if (doc_.contains("tolerances")) {
      const json& t = doc_["tolerances"];
      require_object(t, "/tolerances");
      if (t.contains("exact")) s.tol.exact = positive_at(t["exact"], "/tolerances/exact");
      if (t.contains("fd1")) s.tol.fd1 = positive_at(t["fd1"], "/tolerances/fd1");
      if (t.contains("fd2")) s.tol.fd2 = positive_at(t["fd2"], "/tolerances/fd2");
    }
    if (doc_.contains("seed")) {
      if (!doc_["seed"].is_number_unsigned()) throw LoadError("/seed", "expected a non-negative integer");
      s.seed = doc_["seed"].get<std::uint64_t>();
    }
    if (doc_.contains("inject")) s.inject = load_injection(doc_["inject"], m);
    return s;
  }

 private:
  static void require_object(const json& j, const std::string& ptr) {
    if (!j.is_object()) throw LoadError(ptr.empty() ? "/" : ptr, "expected an object");
  }

  static const json& member(const json& j, const char* key, const std::string& ptr) {
    require_object(j, ptr);
    if (!j.contains(key)) throw LoadError(ptr + "/" + key, "missing required member");
    return j[key];
  }

  static std::string string_at(const json& j, const std::string& ptr) {
    if (!j.is_string()) throw LoadError(ptr, "expected a string");
    return j.get<std::string>();
  }

  static int int_at(const json& j, const std::string& ptr) {
    if (!j.is_number_integer()) throw LoadError(ptr, "expected an integer");
    return j.get<int>();
  }

  static double number_at(const json& j, const std::string& ptr) {
    if (!j.is_number()) throw LoadError(ptr, "expected a number");
    return j.get<double>();
  }

  static double positive_at(const json& j, const std::string& ptr) {
    const double v = number_at(j, ptr);
    if (!(v > 0.0)) throw LoadError(ptr, "expected a positive number");
    return v;
  }

  static const json& array_at(const json& j, const std::string& ptr, std::size_t n) {
    if (!j.is_array()) throw LoadError(ptr, "expected an array");
    if (j.size() != n)
      throw LoadError(ptr, "expected " + std::to_string(n) + " entries, found " + std::to_string(j.size()));
    return j;
  }

  std::shared_ptr<const Chart> load_chart(const json& c, int m) {
    const auto n = static_cast<std::size_t>(m);
    const json& coords = array_at(member(c, "coords", "/chart"), "/chart/coords", n);
    const json& ranges = array_at(member(c, "ranges", "/chart"), "/chart/ranges", n);
    std::vector<std::string> names;
    std::vector<double> lo, hi;
    std::vector<int> samples(n, Chart::kDefaultSamples);
    std::vector<double> step;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string p = "/chart/ranges/" + std::to_string(i);
      names.push_back(string_at(coords[i], "/chart/coords/" + std::to_string(i)));
      const json& r = array_at(ranges[i], p, 2);
      lo.push_back(number_at(r[0], p + "/0"));
      hi.push_back(number_at(r[1], p + "/1"));
    }
    if (c.contains("samples")) {
      const json& s = array_at(c["samples"], "/chart/samples", n);
      for (std::size_t i = 0; i < n; ++i) samples[i] = int_at(s[i], "/chart/samples/" + std::to_string(i));
    }
    if (c.contains("fd_step")) {
      const json& f = c["fd_step"];
      if (f.is_array()) {
        array_at(f, "/chart/fd_step", n);
        for (std::size_t i = 0; i < n; ++i) step.push_back(positive_at(f[i], "/chart/fd_step/" + std::to_string(i)));
      } else {
        step.push_back(positive_at(f, "/chart/fd_step"));
      }
    }
    try {
      return std::make_shared<const Chart>(names, lo, hi, samples, step);
    } catch (const std::invalid_argument& e) {
      throw LoadError("/chart", e.what());
    }
  }

  // Parses every leaf string into one definition and samples it once, so bad
  // expressions and non-finite values are reported at load time.
  fieldlang::FieldDef def_from(std::vector<std::string> sources, std::vector<std::string> pointers,
                               std::vector<std::size_t> shape, const std::shared_ptr<const Chart>& chart) {
    fieldlang::FieldDef def{coords_, std::move(shape), {}};
    for (std::size_t i = 0; i < sources.size(); ++i) {
      try {
        def.exprs.push_back(fieldlang::parse(sources[i], coords_));
      } catch (const fieldlang::ParseError& e) {
        throw LoadError(pointers[i], e.what());
      }
    }
    try {
      sample(def, chart);
    } catch (const SampleError& e) {
      throw LoadError(pointers[e.component()], e.what());
    }
    return def;
  }

  fieldlang::FieldDef matrix_def(const json& j, const std::string& ptr, int m, const std::shared_ptr<const Chart>& chart) {
    const auto n = static_cast<std::size_t>(m);
    std::vector<std::string> src, ptrs;
    array_at(j, ptr, n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string pi = ptr + "/" + std::to_string(i);
      array_at(j[i], pi, n);
      for (std::size_t k = 0; k < n; ++k) {
        ptrs.push_back(pi + "/" + std::to_string(k));
        src.push_back(string_at(j[i][k], ptrs.back()));
      }
    }
    return def_from(std::move(src), std::move(ptrs), {n, n}, chart);
  }

  fieldlang::FieldDef tensor3_def(const json& j, const std::string& ptr, int m, const std::shared_ptr<const Chart>& chart) {
    const auto n = static_cast<std::size_t>(m);
    std::vector<std::string> src, ptrs;
    array_at(j, ptr, n);
    for (std::size_t a = 0; a < n; ++a) {
      const std::string pa = ptr + "/" + std::to_string(a);
      array_at(j[a], pa, n);
      for (std::size_t b = 0; b < n; ++b) {
        const std::string pb = pa + "/" + std::to_string(b);
        array_at(j[a][b], pb, n);
        for (std::size_t c = 0; c < n; ++c) {
          ptrs.push_back(pb + "/" + std::to_string(c));
          src.push_back(string_at(j[a][b][c], ptrs.back()));
        }
      }
    }
    return def_from(std::move(src), std::move(ptrs), {n, n, n}, chart);
  }

  fieldlang::FieldDef spinor_def(const json& j, const std::string& ptr, int k, const std::shared_ptr<const Chart>& chart) {
    const auto n = static_cast<std::size_t>(k);
    std::vector<std::string> src, ptrs;
    array_at(j, ptr, n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string pi = ptr + "/" + std::to_string(i);
      array_at(j[i], pi, 2);
      for (std::size_t c = 0; c < 2; ++c) {
        ptrs.push_back(pi + "/" + std::to_string(c));
        src.push_back(string_at(j[i][c], ptrs.back()));
      }
    }
    return def_from(std::move(src), std::move(ptrs), {n, 2}, chart);
  }

  static Injection load_injection(const json& j, int m) {
    require_object(j, "/inject");
    if (string_at(member(j, "target", "/inject"), "/inject/target") != "ktilde")
      throw LoadError("/inject/target", "only \"ktilde\" can be perturbed");
    Injection inj;
    const json& idx = array_at(member(j, "index", "/inject"), "/inject/index", 3);
    for (std::size_t i = 0; i < 3; ++i) {
      const std::string p = "/inject/index/" + std::to_string(i);
      inj.index[i] = int_at(idx[i], p);
      if (inj.index[i] < 0 || inj.index[i] >= m) throw LoadError(p, "index out of range");
    }
    inj.delta = number_at(member(j, "delta", "/inject"), "/inject/delta");
    return inj;
  }

  const json& doc_;
  std::vector<std::string> coords_;
};

}  // namespace detail

inline Scenario load_scenario_json(const nlohmann::json& doc) {
  Scenario s = detail::Loader(doc).load();
  s.digest = "fnv1a64:" + detail::hex64(detail::fnv1a64(doc.dump()));
  return s;
}

inline Scenario load_scenario_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError("", std::string("invalid JSON: ") + e.what());
  }
  return load_scenario_json(doc);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario_string(ss.str());
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "metric-induce",    "lc-projectable",    "contorsion-antisym",   "torsion-roundtrip", "h-lemma",
      "k-lemma",          "ktilde-theorem",    "ttilde-corollary",     "pullback-equality", "dirac-split",
      "dirac-covariance", "frame-transform-dirac", "metric-invariance-vertical"};
  return names;
}

struct CheckResult {
  std::string name;
  double defect = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  bool pass = false;
  std::string error;
  std::vector<std::pair<std::string, double>> details;
};

struct Report {
  std::string scenario_name;
  std::string digest;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  [[nodiscard]] bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// The random stand-ins a scenario does not specify, derived from its seed.
struct ScenarioFields {
  MetricField g;
  TransformField phi;
  ContorsionField k;
  SpinorField psi;
  std::vector<SpinElementField> spin_fields;
};

inline constexpr int kRandomSpinFields = 5;
inline constexpr double kRandomContorsionScale = 0.5;

inline ScenarioFields resolve_fields(const Scenario& s) {
  const MetricField g = induce_metric(*s.frame, s.eta);
  FieldSampler phi_rng(s.chart, s.seed);
  FieldSampler psi_rng(s.chart, s.seed + 1);
  const TransformField phi = s.transform ? *s.transform : phi_rng.transform();
  FieldSampler k_rng(s.chart, s.seed + 2);
  const ContorsionField k = s.contorsion         ? *s.contorsion
                            : s.torsion          ? contorsion_from_torsion(g, *s.torsion)
                            : s.random_contorsion ? k_rng.contorsion(kRandomContorsionScale)
                                                 : zero_contorsion(s.chart);
  const SpinorField psi = s.spinor ? *s.spinor : psi_rng.spinor(s.rep.k);
  std::vector<SpinElementField> spins;
  if (s.spin_theta) {
    const MatrixField th = *s.spin_theta;
    const GammaRep rep = s.rep;
    spins.emplace_back(s.chart, [th, rep](const Point& x) { return spin_exp(rep, th(x)); });
  }
  for (int i = 0; i < kRandomSpinFields; ++i) {
    FieldSampler rng(s.chart, s.seed + 100 + static_cast<std::uint64_t>(i));
    spins.push_back(rng.spin_element(s.rep, 1.0));
  }
  return {g, phi, k, psi, std::move(spins)};
}

namespace detail {

inline double grid_matrix_difference(const MatrixField& a, const MatrixField& b) {
  const MatrixField d(a.chart_ptr(), [a, b](const Point& x) { return Matrix(a(x) - b(x)); });
  return grid_max(d);
}

inline CheckResult run_one(const std::string& name, const Scenario& s, const ScenarioFields& f) {
  CheckResult r;
  r.name = name;
  const Chart& chart = *s.chart;
  const FrameField& e = *s.frame;
  const Matrix& eta = s.eta;
  const DiracParams dp{s.mass, s.rep};
  auto set = [&r](double defect, double tol) {
    r.defect = defect;
    r.tolerance = tol;
    r.pass = defect < tol;
  };

  if (name == "metric-induce") {
    double duality = 0.0, symmetry = 0.0, expected = 0.0, transformed = 0.0;
    int bad_signature = 0;
    const Matrix id = Matrix::Identity(s.signature.dim(), s.signature.dim());
    const FrameField et = transform_frame(e, f.phi);
    const MetricField gt = induce_metric(et, eta);
    for (std::size_t p = 0; p < chart.num_points(); ++p) {
      const Point x = chart.point(p);
      const Matrix ex = e(x);
      duality = nan_max(duality, max_abs(Matrix(checked_inverse(ex, "frame") * ex - id)));
      const Matrix gx = f.g(x);
      symmetry = nan_max(symmetry, max_abs(Matrix(gx - gx.transpose())));
      if (!(eigen_signature(gx) == s.signature)) ++bad_signature;
      if (s.expected_metric) expected = nan_max(expected, max_abs(Matrix(gx - (*s.expected_metric)(x))));
      if (s.expected_transformed_metric)
        transformed = nan_max(transformed, max_abs(Matrix(gt(x) - (*s.expected_transformed_metric)(x))));
    }
    r.details = {{"frame_duality", duality},
                 {"symmetry", symmetry},
                 {"signature_mismatches", static_cast<double>(bad_signature)}};
    if (s.expected_metric) r.details.emplace_back("expected_metric", expected);
    if (s.expected_transformed_metric) r.details.emplace_back("expected_transformed_metric", transformed);
    set(nan_max(nan_max(duality, symmetry), nan_max(expected, transformed)), s.tol.exact);
    if (bad_signature > 0) {
      r.pass = false;
      r.error = "induced metric signature differs from the declared one at " + std::to_string(bad_signature) + " points";
    }
  } else if (name == "lc-projectable") {
    const double lc = projectability_defect(spin_coeffs(levi_civita(f.g), e, eta)).max;
    const double withk = projectability_defect(spin_coeffs(connection_from_contorsion(f.g, f.k), e, eta)).max;
    const double compat = grid_max(metric_compatibility(connection_from_contorsion(f.g, f.k), f.g));
    r.details = {{"levi_civita", lc}, {"with_contorsion", withk}, {"metric_compatibility", compat}};
    set(nan_max(lc, withk), s.tol.fd1);
  } else if (name == "contorsion-antisym") {
    set(grid_max(f.k, [](const Tensor3& t) { return first_pair_symmetry_defect(t); }), s.tol.exact);
  } else if (name == "torsion-roundtrip") {
    const LinearConnection omega = connection_from_contorsion(f.g, f.k);
    const double k_rt = grid_difference(contorsion_from_torsion(f.g, torsion(omega)), f.k);
    const TorsionField i = s.torsion ? *s.torsion : torsion(omega);
    const double t_rt = grid_difference(torsion(connection_from_torsion_tensor(f.g, i)), i);
    r.details = {{"contorsion_roundtrip", k_rt}, {"torsion_roundtrip", t_rt}};
    set(nan_max(k_rt, t_rt), s.tol.fd1);
  } else if (name == "h-lemma") {
    const Tensor3Field h = h_tensor(f.g, f.phi);
    const LinearConnection lc = levi_civita(f.g);
    const LinearConnection lct = levi_civita(transform_metric(f.g, f.phi));
    const Tensor3Field diff(s.chart, [lc, lct](const Point& x) { return Tensor3(lct(x) - lc(x)); });
    set(grid_difference(h, diff), s.tol.fd1);
  } else if (name == "k-lemma") {
    const LinearConnection omega = connection_from_contorsion(f.g, f.k);
    const LinearConnection moved = transport_connection(omega, f.phi);
    const Tensor3Field diff(s.chart, [omega, moved](const Point& x) { return Tensor3(moved(x) - omega(x)); });
    set(grid_difference(k_tensor(omega, f.phi), diff), s.tol.fd1);
  } else if (name == "ktilde-theorem") {
    Tensor3Field kt = transported_contorsion_raw(f.k, f.g, f.phi);
    if (s.inject) {
      const Injection inj = *s.inject;
      const Tensor3Field clean = kt;
      kt = Tensor3Field(s.chart, [clean, inj](const Point& x) {
        Tensor3 v = clean(x);
        v(inj.index[0], inj.index[1], inj.index[2]) += inj.delta;
        return v;
      });
    }
    const double anti = grid_max(kt, [](const Tensor3& t) { return first_pair_symmetry_defect(t); });
    const double consistency = ktilde_consistency_defect(kt, f.k, f.g, f.phi);
    const LinearConnection moved = transport_connection(connection_from_contorsion(f.g, f.k), f.phi);
    const double proj = projectability_defect(spin_coeffs(moved, transform_frame(e, f.phi), eta)).max;
    r.details = {{"antisymmetry", anti}, {"consistency", consistency}, {"transported_projectability", proj}};
    set(consistency, s.tol.fd1);
    r.pass = r.pass && anti < 1e-10 && proj < s.tol.fd1;
  } else if (name == "ttilde-corollary") {
    const MetricField gt = transform_metric(f.g, f.phi);
    const double general = grid_difference(transported_torsion(f.k, f.g, f.phi),
                                           torsion(connection_from_contorsion(gt, transported_contorsion(f.k, f.g, f.phi))));
    const double torsionless = grid_difference(torsionless_transported_torsion(f.g, f.phi),
                                               torsion(transport_connection(levi_civita(f.g), f.phi)));
    r.details = {{"with_contorsion", general}, {"torsionless", torsionless}};
    set(nan_max(general, torsionless), s.tol.fd1);
  } else if (name == "pullback-equality") {
    set(pullback_equality_defect(e, f.k, f.phi, eta), s.tol.fd1);
  } else if (name == "dirac-split") {
    set(contorsion_split_check(e, f.g, f.k, f.psi, dp), s.tol.fd1);
  } else if (name == "dirac-covariance") {
    const SpinConnectionCoeffs sc = spin_coeffs(connection_from_contorsion(f.g, f.k), e, eta);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.spin_fields.size(); ++i) {
      const double d = covariance_check(e, sc, f.psi, dp, f.spin_fields[i]);
      r.details.emplace_back("spin_field_" + std::to_string(i), d);
      worst = nan_max(worst, d);
    }
    set(worst, s.tol.fd2);
  } else if (name == "frame-transform-dirac") {
    const auto res = frame_transform_dirac_check(e, f.k, f.phi, f.psi, dp);
    r.details = {{"coefficient_defect", res.coefficient_defect}, {"residual_gap", res.residual_gap}};
    set(res.coefficient_defect, s.tol.fd1);
    r.pass = r.pass && res.residual_gap < s.tol.fd1;
  } else if (name == "metric-invariance-vertical") {
    double worst = 0.0;
    for (std::size_t i = 0; i < f.spin_fields.size(); ++i) {
      const MetricField g2 = induce_metric(change_trivialization(e, f.spin_fields[i], s.rep), eta);
      const double d = grid_matrix_difference(g2, f.g);
      r.details.emplace_back("spin_field_" + std::to_string(i), d);
      worst = nan_max(worst, d);
    }
    set(worst, s.tol.fd1);
  } else {
    throw std::invalid_argument("unknown check '" + name + "'");
  }
  return r;
}

}  // namespace detail

/// Runs the selected checks (all when `which` is empty) in the fixed order. A failing
/// check records its error and the run continues.
inline Report run_checks(const Scenario& s, const std::vector<std::string>& which = {}) {
  for (const auto& w : which) {
    bool known = false;
    for (const auto& n : check_names()) known = known || n == w;
    if (!known) throw std::invalid_argument("unknown check '" + w + "'");
  }
  Report rep;
  rep.scenario_name = s.name;
  rep.digest = s.digest;
  rep.seed = s.seed;
  std::optional<ScenarioFields> fields;
  std::string field_error;
  try {
    fields = resolve_fields(s);
  } catch (const std::exception& e) {
    field_error = e.what();
  }
  for (const auto& name : check_names()) {
    bool wanted = which.empty();
    for (const auto& w : which) wanted = wanted || w == name;
    if (!wanted) continue;
    if (!fields) {
      CheckResult r;
      r.name = name;
      r.error = field_error;
      rep.checks.push_back(r);
      continue;
    }
    try {
      rep.checks.push_back(detail::run_one(name, s, *fields));
    } catch (const std::exception& e) {
      CheckResult r;
      r.name = name;
      r.error = e.what();
      rep.checks.push_back(r);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Report serialisation
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace detail

inline nlohmann::ordered_json conventions_json() {
  nlohmann::ordered_json c;
  c["eta"] = "diag(+1 x plus, -1 x minus), +1 block first";
  c["clifford"] = "gamma^a gamma^b + gamma^b gamma^a = 2 eta^{ab}";
  c["connection"] = "nabla_mu V^alpha = d_mu V^alpha + omega^alpha_{beta mu} V^beta";
  c["torsion"] = "T^l_{b m} = omega^l_{b m} - omega^l_{m b}";
  c["spin_coefficients"] = "omega^{ab}_mu = e^a_alpha (omega^alpha_{beta mu} e^beta_c + d_mu e^alpha_c) eta^{cb}";
  c["spinor_derivative"] = "d_mu psi + 1/4 omega^{ab}_mu gamma_a gamma_b psi";
  c["dirac_residual"] = "i e^mu_a gamma^a nabla_mu psi + mass psi";
  return c;
}

inline nlohmann::ordered_json report_to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["scenario"] = {{"name", r.scenario_name}, {"digest", r.digest}, {"seed", r.seed}};
  j["conventions"] = conventions_json();
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["defect"] = detail::number_or_null(c.defect);
    cj["tolerance"] = c.tolerance;
    cj["pass"] = c.pass;
    if (!c.details.empty()) {
      nlohmann::ordered_json d = nlohmann::ordered_json::object();
      for (const auto& [k, v] : c.details) d[k] = detail::number_or_null(v);
      cj["details"] = d;
    }
    if (!c.error.empty()) cj["error"] = c.error;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["pass"] = r.pass();
  return j;
}

/// Human-readable table for a serialized report.
inline std::string render_pretty(const nlohmann::ordered_json& j) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%s %s  scenario '%s'  %s  seed %llu\n", j.value("tool", "").c_str(),
                j.value("version", "").c_str(), j["scenario"].value("name", "").c_str(),
                j["scenario"].value("digest", "").c_str(),
                static_cast<unsigned long long>(j["scenario"].value("seed", std::uint64_t{0})));
  out += line;
  for (const auto& c : j["checks"]) {
    const std::string defect = c["defect"].is_null() ? "n/a" : [&] {
      char b[32];
      std::snprintf(b, sizeof b, "%.3e", c["defect"].get<double>());
      return std::string(b);
    }();
    std::snprintf(line, sizeof line, "  %-28s %-4s defect %-10s tol %.0e\n", c["name"].get<std::string>().c_str(),
                  c["pass"].get<bool>() ? "ok" : "FAIL", defect.c_str(), c["tolerance"].get<double>());
    out += line;
    if (c.contains("error")) out += "      error: " + c["error"].get<std::string>() + "\n";
  }
  out += j.value("pass", false) ? "PASS\n" : "FAIL\n";
  return out;
}

}  // namespace spinframe
