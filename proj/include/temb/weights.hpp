#pragma once

#include <string>
#include <vector>

#include "temb/common.hpp"

namespace temb {

enum class Variant {
  OneByL,
  TwoByL,
  TwoPeriodic1,
  TwoPeriodic2,
  TwoPeriodic3,
  TwoPeriodic4,
  General,
};

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& s);

// Validated (k x l)-periodic edge weights. Arrays are 0-based: alpha[j][i]
// holds the weight attached to white vertices in row j+1, column i+1 of the
// fundamental domain. North weights are normalized to 1 at construction; the
// applied per-site gauge is recorded in delta_gauge.
struct PeriodicWeights {
  int k = 1;
  int l = 1;
  Variant variant = Variant::General;
  std::vector<std::vector<double>> alpha, beta, gamma, delta;
  std::vector<std::vector<double>> delta_gauge;  // original delta before normalization
  double param = 0.0;                            // shortcut parameter when applicable

  double a(int j, int i) const { return alpha[mod_k(j)][mod_l(i)]; }  // 1-based j,i
  double b(int j, int i) const { return beta[mod_k(j)][mod_l(i)]; }
  double g(int j, int i) const { return gamma[mod_k(j)][mod_l(i)]; }
  double d(int j, int i) const { return delta[mod_k(j)][mod_l(i)]; }

  int mod_k(int j) const { return ((j - 1) % k + k) % k; }
  int mod_l(int i) const { return ((i - 1) % l + l) % l; }
};

struct WeightSpec {
  Variant variant = Variant::General;
  int k = 1, l = 1;
  double param = 0.0;  // alpha parameter for two-periodic shortcuts
  std::vector<std::vector<double>> alpha, beta, gamma, delta;  // optional per variant
};

// Validates the spec and returns periodic weights with all variant
// invariants enforced. Throws NonPositiveWeight / VariantViolation.
PeriodicWeights build_weights(const WeightSpec& spec);

// JSON weight-spec file:
// {"variant": str, "k": int, "l": int, "alpha": [[..]], "beta": [[..]],
//  "gamma": [[..]], "delta": [[..]], "param": float}
WeightSpec load_weight_spec(const std::string& path);
WeightSpec parse_weight_spec(const std::string& json_text);

}  // namespace temb
