#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace temb {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline const cplx kI{0.0, 1.0};

// Lattice point on the tilted square grid. Black vertices sit at (even,odd),
// white at (odd,even), faces at (even,even) and (odd,odd).
struct Pos {
  int x = 0, y = 0;
  friend bool operator==(const Pos&, const Pos&) = default;
};

struct PosHash {
  size_t operator()(const Pos& p) const {
    return std::hash<int64_t>()((int64_t(p.x) << 32) ^ uint32_t(p.y));
  }
};

inline bool is_black(Pos p) { return (p.x % 2 == 0) && (p.y % 2 != 0); }
inline bool is_white(Pos p) { return (p.x % 2 != 0) && (p.y % 2 == 0); }

// Rotate a lattice vector by +90 degrees.
inline Pos rot90(Pos v) { return Pos{-v.y, v.x}; }

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Error taxonomy used across modules; all carry a plain message.
struct NonPositiveWeight : ConfigError { using ConfigError::ConfigError; };
struct VariantViolation : ConfigError { using ConfigError::ConfigError; };
struct UnbalancedGraph : NumericalError { using NumericalError::NumericalError; };
struct SingularOperator : NumericalError { using NumericalError::NumericalError; };
struct NegativeRadicand : NumericalError { using NumericalError::NumericalError; };
struct DimensionCap : NumericalError { using NumericalError::NumericalError; };
struct OutOfRange : NumericalError { using NumericalError::NumericalError; };
struct KernelResidual : NumericalError { using NumericalError::NumericalError; };
struct NonClosedForm : NumericalError { using NumericalError::NumericalError; };
struct PoleHit : NumericalError { using NumericalError::NumericalError; };
struct BranchPointSingular : NumericalError { using NumericalError::NumericalError; };
struct NotLiquid : NumericalError { using NumericalError::NumericalError; };
struct ArcticAmbiguous : NumericalError { using NumericalError::NumericalError; };
struct GenusDrop : NumericalError { using NumericalError::NumericalError; };
struct GenusNotOne : NumericalError { using NumericalError::NumericalError; };
struct OvalDegenerate : NumericalError { using NumericalError::NumericalError; };
struct PathConstructionFailed : NumericalError { using NumericalError::NumericalError; };
struct QuadratureNonConvergent : NumericalError { using NumericalError::NumericalError; };
struct BranchTrackingLost : NumericalError { using NumericalError::NumericalError; };
struct NonUnitSpiderEdge : NumericalError { using NumericalError::NumericalError; };

// Principal-branch square roots of a+i and friends. The identities
// sqrt(-a-i) = -i*sqrt(a+i) and sqrt(-a+i) = i*sqrt(a-i) hold for a > 0
// with the principal branch; they are asserted numerically at startup of the
// embedding pipeline.
inline cplx sqrt_api(double a) { return std::sqrt(cplx(a, 1.0)); }
inline cplx sqrt_ami(double a) { return std::sqrt(cplx(a, -1.0)); }
inline cplx sqrt_mami(double a) { return -kI * sqrt_api(a); }  // sqrt(-a-i)
inline cplx sqrt_mapi(double a) { return kI * sqrt_ami(a); }   // sqrt(-a+i)

// Minimal parallel-for; used by classification grids and validation sweeps.
inline void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  int nt = std::min(threads, n);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([=, &body] {
      for (int i = t; i < n; i += nt) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace temb
