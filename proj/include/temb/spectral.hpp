#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "temb/poly.hpp"
#include "temb/weights.hpp"

namespace temb {

// Point (z,w) of the spectral curve P(z,w) = 0, with the w-branch carried
// explicitly. For k = 1, w = Phi(z) is determined by z.
struct SurfacePoint {
  cplx z, w;
};

enum class PhaseTag { Liquid, Frozen, Gas, Arctic };

struct PhaseClass {
  PhaseTag tag = PhaseTag::Arctic;
  int index = 0;  // frozen: 1-based interval A_{0,m}; gas: 1-based oval A_i
  std::vector<SurfacePoint> witness;  // zeros of the action differential
};

// Spectral data of the weighted lattice: transfer symbols, characteristic
// polynomial, branch structure and ovals (k = 2), real-locus intervals (k=1).
struct SpectralCurve {
  PeriodicWeights wts;
  int k = 1, l = 1;

  // k = 1: A(z) = prod(gamma_m z + alpha_m), B(z) = prod(z - beta_m) and the
  // scalar symbol Phi = A/B; the 2(l+1) real-locus intervals are bounded by
  // {-alpha/gamma}, 0 and {beta} (rightmost interval first).
  Poly A, B;
  std::vector<double> div_points;  // ascending division points on R

  // k = 2: G(z) = z^l (z-1)^l Phi(z) entrywise polynomial; n~ = (z-1)^l tr Phi;
  // P_D = n~^2 - 4 (z-1)^{2l}; branch points are the roots of P_D plus z = 0
  // and infinity; ovals are the closures of {x < 0 : tr^2 - 4 >= 0}.
  std::array<std::array<Poly, 2>, 2> G;
  Poly n_tilde, P_D, P_D_deriv;
  std::vector<double> branch_pts;                  // negative, descending
  std::vector<std::pair<double, double>> ovals;    // A_1, A_2, ... right to left
  int genus = 0;

  // Evaluators.
  cplx phi1(int m, cplx z) const;               // k=1 scalar symbol, m in 1..2l
  Eigen::Matrix2cd phi2(int m, cplx z) const;   // k=2 matrix symbol
  cplx Phi_scalar(cplx z) const { return poly_eval(A, z) / poly_eval(B, z); }
  Eigen::Matrix2cd Phi(cplx z) const;           // k=2, poles at 0 and 1
  Eigen::Matrix2cd SPhi(cplx z) const;          // (1 - 1/z)^l Phi, entire in 1/z
  cplx trPhi(cplx z) const;
  std::array<cplx, 2> w_branches(cplx z) const;  // roots of w^2 - tr w + 1
  Eigen::Matrix2cd Qm(const SurfacePoint& p) const;
  cplx P(cplx z, cplx w) const;  // characteristic polynomial

  // Action function; principal logarithm branches.
  cplx action(const SurfacePoint& p, double xi, double eta) const;

  // Value of the action differential coefficient (d F / d z on the sheet).
  cplx dF(const SurfacePoint& p, double xi, double eta) const;

  // Branch continuation of w along a z-path (k=2).
  cplx continue_w(const std::vector<cplx>& zpath, cplx w_start) const;
  // R_0 membership: reachability from the anchor on the w-large sheet.
  bool in_R0(const SurfacePoint& p) const;
  SurfacePoint anchor() const;  // (x0, w_large(x0)) with x0 > 1 on A_{0,1}
  double cut_point() const;     // midpoint of the cut adjacent to z = 0
};

SpectralCurve make_curve(const PeriodicWeights& w);

// The unique non-real zero of the action differential in H^- (k=1) or R_0
// (k=2); throws NotLiquid outside the liquid region.
SurfacePoint critical_point(const SpectralCurve& sc, double xi, double eta);

PhaseClass classify(const SpectralCurve& sc, double xi, double eta,
                    double arctic_tol = 1e-9);

}  // namespace temb
