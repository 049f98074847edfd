#include "temb/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace temb {

namespace {

// Stable branch pair of w^2 - T w + 1: the large root avoids cancellation,
// the small root is its reciprocal.
std::array<cplx, 2> branch_pair(cplx T) {
  cplx s = std::sqrt(T * T - 4.0);
  if ((std::conj(T) * s).real() < 0) s = -s;
  cplx wl = (T + s) / 2.0;
  return {wl, 1.0 / wl};
}

}  // namespace

cplx SpectralCurve::phi1(int m, cplx z) const {
  int i = (m + 1) / 2;
  if (m % 2 == 1) return wts.g(1, i) + wts.a(1, i) / z;
  return 1.0 / (1.0 - wts.b(1, i) / z);
}

Eigen::Matrix2cd SpectralCurve::phi2(int m, cplx z) const {
  int i = (m + 1) / 2;
  Eigen::Matrix2cd out;
  if (m % 2 == 1) {
    double ai = wts.alpha[0][wts.mod_l(i)];
    out << 1.0, 1.0 / (ai * z), ai, 1.0;
  } else {
    double bi = wts.beta[0][wts.mod_l(i)];
    out << 1.0, 1.0 / (bi * z), bi, 1.0;
    out *= 1.0 / (1.0 - 1.0 / z);
  }
  return out;
}

Eigen::Matrix2cd SpectralCurve::Phi(cplx z) const {
  Eigen::Matrix2cd P = Eigen::Matrix2cd::Identity();
  for (int m = 1; m <= 2 * l; ++m) P *= phi2(m, z);
  return P;
}

Eigen::Matrix2cd SpectralCurve::SPhi(cplx z) const {
  // (1 - 1/z)^l Phi(z) = G(z) / z^(2l), polynomial data, regular at z = 1.
  Eigen::Matrix2cd out;
  cplx zl = std::pow(z, 2 * l);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out(r, c) = poly_eval(G[r][c], z) / zl;
  return out;
}

cplx SpectralCurve::trPhi(cplx z) const {
  return poly_eval(n_tilde, z) / std::pow(z - 1.0, l);
}

std::array<cplx, 2> SpectralCurve::w_branches(cplx z) const { return branch_pair(trPhi(z)); }

Eigen::Matrix2cd SpectralCurve::Qm(const SurfacePoint& p) const {
  const cplx z = p.z, w = p.w;
  if (std::abs(z - 1.0) > 0.25) {
    cplx T = trPhi(z);
    cplx den = 2.0 * w - T;
    if (std::abs(den) < 1e-11 * (1 + std::abs(T)))
      throw BranchPointSingular("Q evaluated at a branch point");
    Eigen::Matrix2cd M = Phi(z);
    M(0, 0) += w - T;
    M(1, 1) += w - T;
    return M / den;
  }
  // Near z = 1 use the (1-1/z)^l-scaled form, finite on both branches.
  cplx s = std::pow(1.0 - 1.0 / z, l);
  Eigen::Matrix2cd SP = SPhi(z);
  cplx sT = SP.trace();
  cplx W = s * w;
  cplx den = 2.0 * W - sT;
  if (std::abs(den) < 1e-11 * (1 + std::abs(sT)))
    throw BranchPointSingular("Q evaluated at a branch point");
  Eigen::Matrix2cd M = SP;
  M(0, 0) += W - sT;
  M(1, 1) += W - sT;
  return M / den;
}

cplx SpectralCurve::P(cplx z, cplx w) const {
  if (k == 1) {
    cplx pref = poly_eval(B, z) / std::pow(z, l);
    return pref * (Phi_scalar(z) - w);
  }
  cplx pref = std::pow(1.0 - 1.0 / z, l);
  return pref * (w * w - trPhi(z) * w + 1.0);
}

cplx SpectralCurve::action(const SurfacePoint& p, double xi, double eta) const {
  const cplx z = p.z;
  if (k == 1) {
    cplx lg = 0;
    for (int m = 1; m <= l; ++m) lg += std::log(wts.g(1, m) + wts.a(1, m) / z);
    return 0.5 * (1 - xi) * std::log(Phi_scalar(z)) - 0.5 * l * (1 - eta) * std::log(z) - lg;
  }
  return (1.0 - xi) * std::log(p.w) - 0.5 * l * (1 - eta) * std::log(z) -
         (double(l) * std::log(1.0 - 1.0 / z) + std::log(p.w));
}

cplx SpectralCurve::dF(const SurfacePoint& p, double xi, double eta) const {
  const cplx z = p.z;
  if (k == 1) {
    cplx Av = poly_eval(A, z), Bv = poly_eval(B, z);
    cplx Ad = poly_eval(poly_deriv(A), z), Bd = poly_eval(poly_deriv(B), z);
    return -0.5 * (1 + xi) * Ad / Av - 0.5 * (1 - xi) * Bd / Bv + 0.5 * l * (1 + eta) / z;
  }
  cplx T = trPhi(z);
  cplx Td = (poly_eval(poly_deriv(n_tilde), z) * (z - 1.0) -
             double(l) * poly_eval(n_tilde, z)) /
            std::pow(z - 1.0, l + 1);
  return -xi * Td / (2.0 * p.w - T) + 0.5 * l * (1 + eta) / z - double(l) / (z - 1.0);
}

cplx SpectralCurve::continue_w(const std::vector<cplx>& zpath, cplx w_start) const {
  cplx w = w_start;
  for (size_t s = 0; s + 1 < zpath.size(); ++s) {
    cplx z0 = zpath[s], z1 = zpath[s + 1];
    cplx z = z0;
    while (std::abs(z - z1) > 0) {
      // Step bounded by half the distance to the nearest branch point.
      double safe = std::abs(z);  // z = 0 is a branch point
      for (double b : branch_pts) safe = std::min(safe, std::abs(z - b));
      safe = std::max(0.5 * safe, 1e-9);
      cplx dir = z1 - z;
      cplx step = std::abs(dir) <= safe ? dir : dir / std::abs(dir) * safe;
      cplx zn = z + step;
      auto br = branch_pair(trPhi(zn));
      // First-order prediction w' = T' w / (2w - T).
      cplx T = trPhi(z);
      cplx Td = (poly_eval(poly_deriv(n_tilde), z) * (z - 1.0) -
                 double(l) * poly_eval(n_tilde, z)) /
                std::pow(z - 1.0, l + 1);
      cplx pred = w;
      cplx den = 2.0 * w - T;
      if (std::abs(den) > 1e-8 * (1 + std::abs(T))) pred = w + Td * w / den * step;
      cplx next = std::abs(br[0] - pred) <= std::abs(br[1] - pred) ? br[0] : br[1];
      if (std::abs(br[0] - br[1]) < 1e-12 * (std::abs(br[0]) + 1))
        throw BranchTrackingLost("continuation stepped onto a branch point");
      w = next;
      z = zn;
    }
  }
  return w;
}

SurfacePoint SpectralCurve::anchor() const {
  double far = 1.0;
  for (double b : branch_pts) far = std::max(far, std::abs(b));
  double x0 = 1.0 + far;
  auto br = branch_pair(trPhi(cplx(x0, 0)));
  cplx wl = std::abs(br[0]) >= std::abs(br[1]) ? br[0] : br[1];
  return SurfacePoint{cplx(x0, 0), cplx(wl.real(), 0)};
}

double SpectralCurve::cut_point() const {
  if (branch_pts.empty()) throw GenusDrop("no negative branch points");
  return branch_pts.front() / 2.0;
}

bool SpectralCurve::in_R0(const SurfacePoint& p) const {
  auto a0 = anchor();
  double h = 0.6 * (1.0 + std::max(std::abs(p.z), std::abs(a0.z)));
  std::vector<cplx> path;
  path.push_back(a0.z);
  path.push_back(a0.z - cplx(0, h));
  if (p.z.imag() <= 0) {
    path.push_back(cplx(p.z.real(), -h));
    path.push_back(p.z);
  } else {
    double xc = cut_point();
    path.push_back(cplx(xc, -h));
    path.push_back(cplx(xc, h));
    path.push_back(cplx(p.z.real(), h));
    path.push_back(p.z);
  }
  cplx wc = continue_w(path, a0.w);
  cplx other = 1.0 / wc;
  return std::abs(wc - p.w) <= std::abs(other - p.w);
}

SpectralCurve make_curve(const PeriodicWeights& w) {
  SpectralCurve sc;
  sc.wts = w;
  sc.k = w.k;
  sc.l = w.l;
  if (w.k == 1) {
    sc.A = {1.0};
    sc.B = {1.0};
    for (int m = 1; m <= w.l; ++m) {
      sc.A = poly_mul(sc.A, Poly{w.a(1, m), w.g(1, m)});
      sc.B = poly_mul(sc.B, Poly{-w.b(1, m), 1.0});
    }
    for (int m = 1; m <= w.l; ++m) {
      sc.div_points.push_back(-w.a(1, m) / w.g(1, m));
      sc.div_points.push_back(w.b(1, m));
    }
    sc.div_points.push_back(0.0);
    std::sort(sc.div_points.begin(), sc.div_points.end());
    sc.genus = 0;
    return sc;
  }
  if (w.k != 2) throw ConfigError("spectral curve supports k = 1 or 2");

  // G(z) = prod_i M_i N_i with M_i = z phi_{2i-1}, N_i = (z-1) phi_{2i};
  // entries are polynomials and G = z^l (z-1)^l Phi.
  std::array<std::array<Poly, 2>, 2> Gm = {{{Poly{1.0}, Poly{0.0}}, {Poly{0.0}, Poly{1.0}}}};
  auto matmul = [](const std::array<std::array<Poly, 2>, 2>& X,
                   const std::array<std::array<Poly, 2>, 2>& Y) {
    std::array<std::array<Poly, 2>, 2> Z;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        Z[r][c] = poly_add(poly_mul(X[r][0], Y[0][c]), poly_mul(X[r][1], Y[1][c]));
    return Z;
  };
  for (int i = 1; i <= w.l; ++i) {
    double ai = w.alpha[0][i - 1], bi = w.beta[0][i - 1];
    std::array<std::array<Poly, 2>, 2> M = {{{Poly{0.0, 1.0}, Poly{1.0 / ai}},
                                             {Poly{0.0, ai}, Poly{0.0, 1.0}}}};
    std::array<std::array<Poly, 2>, 2> N = {{{Poly{0.0, 1.0}, Poly{1.0 / bi}},
                                             {Poly{0.0, bi}, Poly{0.0, 1.0}}}};
    Gm = matmul(Gm, matmul(M, N));
  }
  sc.G = Gm;
  Poly tr = poly_add(Gm[0][0], Gm[1][1]);
  // n~ = tr G / z^l exactly (tr G has an order-l zero at the origin).
  double top = 0;
  for (double v : tr) top = std::max(top, std::abs(v));
  for (int i = 0; i < w.l; ++i)
    if (std::abs(tr[i]) > 1e-10 * top)
      throw NumericalError("trace does not vanish to order l at 0");
  sc.n_tilde = Poly(tr.begin() + w.l, tr.end());

  Poly zm1 = {-1.0, 1.0};
  sc.P_D = poly_add(poly_mul(sc.n_tilde, sc.n_tilde), poly_scale(poly_pow(zm1, 2 * w.l), -4.0));
  sc.P_D_deriv = poly_deriv(sc.P_D);

  // Branch points: roots of P_D. For the TwoByL family they are real and
  // non-positive (M-curve); complex or positive roots signal invalid input.
  auto roots = poly_roots(sc.P_D);
  std::vector<double> neg;
  for (auto r : roots) {
    if (std::abs(r.imag()) > 1e-7 * (1 + std::abs(r)))
      throw GenusDrop("non-real branch point " + std::to_string(r.real()) + "+" +
                      std::to_string(r.imag()) + "i");
    if (r.real() > 1e-9) throw GenusDrop("positive branch point");
    if (r.real() < -1e-12) neg.push_back(r.real());
  }
  std::sort(neg.begin(), neg.end(), std::greater<double>());
  // Near-coincident branch points mean an oval degenerated to a point.
  for (size_t i = 0; i + 1 < neg.size(); ++i)
    if (std::abs(neg[i] - neg[i + 1]) < 1e-7 * (1 + std::abs(neg[i])))
      throw GenusDrop("degenerate oval at z = " + std::to_string(neg[i]));
  sc.branch_pts = neg;

  // Ovals: alternating intervals on the negative axis where tr^2 >= 4.
  auto disc = [&](double x) {
    cplx t = sc.trPhi(cplx(x, 0));
    return t.real() * t.real() - 4.0;
  };
  std::vector<double> pts = neg;
  pts.insert(pts.begin(), 0.0);
  for (size_t i = 0; i + 2 < pts.size(); i += 2) {
    double hi = pts[i + 1], lo = pts[i + 2];
    if (disc(0.5 * (lo + hi)) < 0)
      throw GenusDrop("expected oval between branch points");
    sc.ovals.push_back({lo, hi});
  }
  sc.genus = (int)sc.ovals.size();
  if (sc.genus != w.l - 1)
    throw GenusDrop("genus " + std::to_string(sc.genus) + " != l-1");
  return sc;
}

namespace {

// Secant polish of the on-sheet equation H(z) = xi T'(z) + R(z)(2w(z)-T(z)).
SurfacePoint polish_zero(const SpectralCurve& sc, SurfacePoint p, double xi, double eta) {
  auto Hval = [&](SurfacePoint q) {
    cplx z = q.z;
    cplx T = sc.trPhi(z);
    cplx Td = (poly_eval(poly_deriv(sc.n_tilde), z) * (z - 1.0) -
               double(sc.l) * poly_eval(sc.n_tilde, z)) /
              std::pow(z - 1.0, sc.l + 1);
    cplx R = 0.5 * sc.l * (1 + eta) / z - double(sc.l) / (z - 1.0);
    return xi * Td + R * (2.0 * q.w - T);
  };
  for (int it = 0; it < 12; ++it) {
    cplx h = 1e-7 * (1.0 + std::abs(p.z));
    SurfacePoint ph{p.z + h, sc.continue_w({p.z, p.z + h}, p.w)};
    cplx f0 = Hval(p), f1 = Hval(ph);
    cplx deriv = (f1 - f0) / h;
    if (std::abs(deriv) == 0) break;
    cplx step = -f0 / deriv;
    if (std::abs(step) > 0.5 * (1 + std::abs(p.z))) break;
    SurfacePoint pn{p.z + step, sc.continue_w({p.z, p.z + step}, p.w)};
    p = pn;
    if (std::abs(step) < 1e-14 * (1 + std::abs(p.z))) break;
  }
  return p;
}

}  // namespace

PhaseClass classify(const SpectralCurve& sc, double xi, double eta, double arctic_tol) {
  PhaseClass pc;
  if (sc.k == 1) {
    // Numerator polynomial of F'(z).
    Poly Ad = poly_deriv(sc.A), Bd = poly_deriv(sc.B);
    Poly t1 = poly_scale(poly_mul(poly_mul(Ad, sc.B), Poly{0.0, 1.0}), -0.5 * (1 + xi));
    Poly t2 = poly_scale(poly_mul(poly_mul(sc.A, Bd), Poly{0.0, 1.0}), -0.5 * (1 - xi));
    Poly t3 = poly_scale(poly_mul(sc.A, sc.B), 0.5 * sc.l * (1 + eta));
    auto roots = poly_roots(poly_add(poly_add(t1, t2), t3));
    std::vector<cplx> nonreal;
    std::vector<double> real;
    for (auto r : roots) {
      if (std::abs(r.imag()) > arctic_tol * (1 + std::abs(r)))
        nonreal.push_back(r);
      else
        real.push_back(r.real());
    }
    // Near-double real roots make the census tolerance-dependent.
    std::sort(real.begin(), real.end());
    for (size_t i = 0; i + 1 < real.size(); ++i)
      if (std::abs(real[i] - real[i + 1]) < arctic_tol * (1 + std::abs(real[i])))
        throw ArcticAmbiguous("near-double real zero of F'");
    if (!nonreal.empty()) {
      if (nonreal.size() != 2) throw ArcticAmbiguous("unexpected non-real zero count");
      cplx zc = nonreal[0].imag() < 0 ? nonreal[0] : nonreal[1];
      pc.tag = PhaseTag::Liquid;
      pc.witness.push_back(SurfacePoint{zc, sc.Phi_scalar(zc)});
      return pc;
    }
    // Interval census: A_{0,1} is the rightmost interval, increasing leftward.
    int nd = (int)sc.div_points.size();
    std::vector<int> count(nd + 1, 0);
    for (double x : real) {
      int idx = (int)(std::lower_bound(sc.div_points.begin(), sc.div_points.end(), x) -
                      sc.div_points.begin());
      count[idx] += 1;  // idx = 0 means left of everything
    }
    for (int idx = nd; idx >= 0; --idx)
      if (count[idx] >= 2) {
        pc.tag = PhaseTag::Frozen;
        pc.index = nd - idx + 1;
        for (double x : real) pc.witness.push_back(SurfacePoint{x, sc.Phi_scalar(cplx(x, 0))});
        return pc;
      }
    throw ArcticAmbiguous("no interval holds two zeros");
  }

  // k = 2: zeros of the squared polynomial, resolved per sheet.
  Poly Abr = poly_add(poly_mul(poly_deriv(sc.n_tilde), Poly{-1.0, 1.0}),
                      poly_scale(sc.n_tilde, -double(sc.l)));
  Poly Rbr = {-0.5 * sc.l * (1 + eta), 0.5 * sc.l * (1 + eta) - sc.l};
  std::vector<SurfacePoint> zeros;
  if (std::abs(xi) < 1e-12) {
    double zstar = -Rbr[0] / Rbr[1];
    for (cplx w : sc.w_branches(cplx(zstar, 0.0))) zeros.push_back({cplx(zstar, 0.0), w});
  } else {
    Poly S = poly_add(
        poly_scale(poly_mul(poly_mul(Poly{0, 0, 1.0}, Abr), Abr), xi * xi),
        poly_scale(poly_mul(sc.P_D, poly_mul(Rbr, Rbr)), -1.0));
    for (cplx z : poly_roots(S)) {
      for (cplx w : sc.w_branches(z)) {
        SurfacePoint q{z, w};
        cplx T = sc.trPhi(z);
        cplx Td = (poly_eval(poly_deriv(sc.n_tilde), z) * (z - 1.0) -
                   double(sc.l) * poly_eval(sc.n_tilde, z)) /
                  std::pow(z - 1.0, sc.l + 1);
        cplx t1 = -xi * Td / (2.0 * w - T);
        cplx t2 = 0.5 * sc.l * (1 + eta) / z - double(sc.l) / (z - 1.0);
        double rel = std::abs(t1 + t2) / (std::abs(t1) + std::abs(t2) + 1e-300);
        if (rel < 1e-6) {
          q = polish_zero(sc, q, xi, eta);
          bool dup = false;
          for (auto& z0 : zeros)
            if (std::abs(z0.z - q.z) < 1e-8 * (1 + std::abs(q.z)) &&
                std::abs(z0.w - q.w) < 1e-6 * (1 + std::abs(q.w)))
              dup = true;
          if (!dup) zeros.push_back(q);
        }
      }
    }
  }
  pc.witness = zeros;

  std::vector<SurfacePoint> offreal;
  std::vector<SurfacePoint> on_A0, on_oval;
  for (auto& q : zeros) {
    bool zreal = std::abs(q.z.imag()) < arctic_tol * (1 + std::abs(q.z));
    bool wreal = std::abs(q.w.imag()) < 1e-7 * (1 + std::abs(q.w));
    if (!zreal || !wreal)
      offreal.push_back(q);
    else if (q.z.real() > 0)
      on_A0.push_back(q);
    else
      on_oval.push_back(q);
  }
  if (!offreal.empty()) {
    if (offreal.size() != 2) throw ArcticAmbiguous("unexpected off-locus zero count");
    pc.tag = PhaseTag::Liquid;
    pc.witness = offreal;
    return pc;
  }
  if (on_oval.size() >= 2) {
    pc.tag = PhaseTag::Gas;
    double x = on_oval[0].z.real();
    for (int i = 0; i < (int)sc.ovals.size(); ++i)
      if (x >= sc.ovals[i].first - 1e-9 && x <= sc.ovals[i].second + 1e-9) pc.index = i + 1;
    if (pc.index == 0) throw ArcticAmbiguous("gas zero not inside an oval");
    return pc;
  }
  if (on_A0.size() >= 2) {
    pc.tag = PhaseTag::Frozen;
    // A_{0,1}: z>1 on the w-large sheet, then counterclockwise.
    auto& q = on_A0[0];
    bool large = std::abs(q.w) > 1.0;
    bool right = q.z.real() > 1.0;
    pc.index = right ? (large ? 1 : 4) : (large ? 2 : 3);
    return pc;
  }
  throw ArcticAmbiguous("no phase census matched");
}

SurfacePoint critical_point(const SpectralCurve& sc, double xi, double eta) {
  PhaseClass pc;
  try {
    pc = classify(sc, xi, eta);
  } catch (const ArcticAmbiguous& e) {
    throw NotLiquid(std::string("ambiguous classification: ") + e.what());
  }
  if (pc.tag != PhaseTag::Liquid)
    throw NotLiquid("point (" + std::to_string(xi) + "," + std::to_string(eta) +
                    ") is not in the liquid region");
  if (sc.k == 1) {
    auto q = pc.witness[0];
    return q.z.imag() < 0 ? q : SurfacePoint{std::conj(q.z), std::conj(q.w)};
  }
  for (auto& q : pc.witness)
    if (sc.in_R0(q)) return q;
  throw NotLiquid("no R_0 representative among the critical points");
}

}  // namespace temb
