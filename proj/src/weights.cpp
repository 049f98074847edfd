#include "temb/weights.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace temb {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::OneByL: return "1xl";
    case Variant::TwoByL: return "2xl";
    case Variant::TwoPeriodic1: return "two-periodic-1";
    case Variant::TwoPeriodic2: return "two-periodic-2";
    case Variant::TwoPeriodic3: return "two-periodic-3";
    case Variant::TwoPeriodic4: return "two-periodic-4";
    case Variant::General: return "general";
  }
  return "general";
}

Variant variant_from_name(const std::string& s) {
  if (s == "1xl" || s == "one-by-l") return Variant::OneByL;
  if (s == "2xl" || s == "two-by-l") return Variant::TwoByL;
  if (s == "two-periodic-1") return Variant::TwoPeriodic1;
  if (s == "two-periodic-2") return Variant::TwoPeriodic2;
  if (s == "two-periodic-3") return Variant::TwoPeriodic3;
  if (s == "two-periodic-4") return Variant::TwoPeriodic4;
  if (s == "general") return Variant::General;
  throw ConfigError("unknown weight variant '" + s + "'");
}

namespace {

using Arr = std::vector<std::vector<double>>;

Arr constant_array(int k, int l, double v) {
  return Arr(k, std::vector<double>(l, v));
}

void check_positive(const Arr& a, const char* name) {
  for (const auto& row : a)
    for (double v : row)
      if (!(v > 0.0) || !std::isfinite(v))
        throw NonPositiveWeight(std::string(name) + " weights must be strictly positive");
}

void check_shape(const Arr& a, int k, int l, const char* name) {
  if ((int)a.size() != k)
    throw ConfigError(std::string(name) + ": expected " + std::to_string(k) + " rows");
  for (const auto& row : a)
    if ((int)row.size() != l)
      throw ConfigError(std::string(name) + ": expected " + std::to_string(l) + " columns");
}

}  // namespace

PeriodicWeights build_weights(const WeightSpec& spec) {
  PeriodicWeights w;
  w.variant = spec.variant;
  w.param = spec.param;

  switch (spec.variant) {
    case Variant::TwoPeriodic1:
    case Variant::TwoPeriodic2:
    case Variant::TwoPeriodic3:
    case Variant::TwoPeriodic4: {
      double al = spec.param;
      if (!(al > 0.0) || !(al < 1.0))
        throw VariantViolation("two-periodic weights require 0 < alpha < 1, got " +
                               std::to_string(al));
      w.k = 2;
      w.l = 2;
      double a1, b1, a2, b2;
      switch (spec.variant) {
        // The four shifts of the same one-parameter family.
        case Variant::TwoPeriodic1: a1 = 1 / al; b1 = 1 / al; a2 = al; b2 = al; break;
        case Variant::TwoPeriodic2: a1 = al; b1 = al; a2 = 1 / al; b2 = 1 / al; break;
        case Variant::TwoPeriodic3: a1 = 1 / al; b1 = al; a2 = al; b2 = 1 / al; break;
        default:                    a1 = al; b1 = 1 / al; a2 = 1 / al; b2 = al; break;
      }
      w.alpha = {{a1, a2}, {1 / a1, 1 / a2}};
      w.beta = {{b1, b2}, {1 / b1, 1 / b2}};
      w.gamma = constant_array(2, 2, 1.0);
      w.delta = constant_array(2, 2, 1.0);
      break;
    }
    case Variant::OneByL: {
      w.k = 1;
      if (spec.alpha.empty() || spec.beta.empty())
        throw ConfigError("1xl weights require alpha and beta rows");
      w.l = (int)spec.alpha[0].size();
      check_shape(spec.alpha, 1, w.l, "alpha");
      check_shape(spec.beta, 1, w.l, "beta");
      w.alpha = spec.alpha;
      w.beta = spec.beta;
      w.gamma = spec.gamma.empty() ? constant_array(1, w.l, 1.0) : spec.gamma;
      check_shape(w.gamma, 1, w.l, "gamma");
      w.delta = constant_array(1, w.l, 1.0);
      break;
    }
    case Variant::TwoByL: {
      w.k = 2;
      if (spec.alpha.empty() || spec.beta.empty())
        throw ConfigError("2xl weights require alpha and beta rows");
      w.l = (int)spec.alpha[0].size();
      // Row 1 given, row 2 forced to the inverse pattern.
      std::vector<double> a1 = spec.alpha[0], b1 = spec.beta[0];
      if ((int)b1.size() != w.l) throw ConfigError("beta row length mismatch");
      std::vector<double> a2(w.l), b2(w.l);
      for (int i = 0; i < w.l; ++i) {
        if (!(a1[i] > 0) || !(b1[i] > 0)) throw NonPositiveWeight("2xl weights must be positive");
        a2[i] = 1 / a1[i];
        b2[i] = 1 / b1[i];
      }
      w.alpha = {a1, a2};
      w.beta = {b1, b2};
      w.gamma = constant_array(2, w.l, 1.0);
      w.delta = constant_array(2, w.l, 1.0);
      break;
    }
    case Variant::General: {
      w.k = spec.k;
      w.l = spec.l;
      check_shape(spec.alpha, w.k, w.l, "alpha");
      check_shape(spec.beta, w.k, w.l, "beta");
      check_shape(spec.gamma, w.k, w.l, "gamma");
      w.alpha = spec.alpha;
      w.beta = spec.beta;
      w.gamma = spec.gamma;
      w.delta = spec.delta.empty() ? constant_array(w.k, w.l, 1.0) : spec.delta;
      check_shape(w.delta, w.k, w.l, "delta");
      break;
    }
  }

  check_positive(w.alpha, "alpha");
  check_positive(w.beta, "beta");
  check_positive(w.gamma, "gamma");
  check_positive(w.delta, "delta");

  // Normalize north weights to 1 with a gauge at each white site, recording
  // the applied gauge.
  w.delta_gauge = w.delta;
  for (int j = 0; j < w.k; ++j)
    for (int i = 0; i < w.l; ++i) {
      double d = w.delta[j][i];
      if (d != 1.0) {
        w.alpha[j][i] /= d;
        w.beta[j][i] /= d;
        w.gamma[j][i] /= d;
        w.delta[j][i] = 1.0;
      }
    }

  // Variant invariants.
  if (w.variant == Variant::OneByL) {
    for (int i = 0; i < w.l; ++i) {
      if (!(w.beta[0][i] < 1.0))
        throw VariantViolation("beta_" + std::to_string(i + 1) + " = " +
                               std::to_string(w.beta[0][i]) + " violates beta_i < 1");
      if (!(w.alpha[0][i] / w.gamma[0][i] > 1.0))
        throw VariantViolation("alpha_" + std::to_string(i + 1) + "/gamma_" +
                               std::to_string(i + 1) + " violates alpha_i/gamma_i > 1");
    }
    for (int i = 0; i < w.l; ++i)
      for (int j = i + 1; j < w.l; ++j) {
        if (w.beta[0][i] == w.beta[0][j])
          throw VariantViolation("beta_" + std::to_string(i + 1) + "=beta_" +
                                 std::to_string(j + 1) + " violates distinctness");
        if (w.alpha[0][i] / w.gamma[0][i] == w.alpha[0][j] / w.gamma[0][j])
          throw VariantViolation("alpha_" + std::to_string(i + 1) + "/gamma_" +
                                 std::to_string(i + 1) + " = alpha_" + std::to_string(j + 1) +
                                 "/gamma_" + std::to_string(j + 1) + " violates distinctness");
      }
  }
  if (w.variant == Variant::TwoByL || (int)w.variant >= (int)Variant::TwoPeriodic1) {
    if (w.k == 2) {
      double pa = 1.0, pb = 1.0;
      for (int i = 0; i < w.l; ++i) {
        pa *= w.alpha[0][i];
        pb *= w.beta[0][i];
      }
      if (std::abs(pa - pb) > 1e-12 * std::abs(pa))
        throw VariantViolation("prod alpha_1i = " + std::to_string(pa) +
                               " differs from prod beta_1i = " + std::to_string(pb));
      for (int i = 0; i < w.l; ++i) {
        if (std::abs(w.alpha[1][i] * w.alpha[0][i] - 1.0) > 1e-12 ||
            std::abs(w.beta[1][i] * w.beta[0][i] - 1.0) > 1e-12)
          throw VariantViolation("row 2 weights must be inverses of row 1");
        if (w.gamma[0][i] != 1.0 || w.gamma[1][i] != 1.0)
          throw VariantViolation("2xl weights require gamma = 1");
      }
    }
  }
  return w;
}

namespace {

Arr parse_array(const nlohmann::json& j) {
  Arr out;
  for (const auto& row : j) {
    std::vector<double> r;
    for (const auto& v : row) r.push_back(v.get<double>());
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

WeightSpec parse_weight_spec(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  WeightSpec s;
  static const char* known[] = {"variant", "k", "l", "alpha", "beta", "gamma", "delta", "param"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* kkey : known) ok = ok || (it.key() == kkey);
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in weight spec");
  }
  if (j.contains("variant")) s.variant = variant_from_name(j["variant"].get<std::string>());
  if (j.contains("k")) s.k = j["k"].get<int>();
  if (j.contains("l")) s.l = j["l"].get<int>();
  if (j.contains("param")) s.param = j["param"].get<double>();
  if (j.contains("alpha")) s.alpha = parse_array(j["alpha"]);
  if (j.contains("beta")) s.beta = parse_array(j["beta"]);
  if (j.contains("gamma")) s.gamma = parse_array(j["gamma"]);
  if (j.contains("delta")) s.delta = parse_array(j["delta"]);
  return s;
}

WeightSpec load_weight_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open weight spec '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_weight_spec(ss.str());
}

}  // namespace temb
