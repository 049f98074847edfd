#pragma once

// Small dense polynomial helpers over double, ascending coefficient order,
// with companion-matrix root finding.

#include <Eigen/Dense>
#include <vector>

#include "temb/common.hpp"

namespace temb {

using Poly = std::vector<double>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return c;
}

inline Poly poly_scale(Poly a, double s) {
  for (auto& v : a) v *= s;
  return a;
}

inline Poly poly_deriv(const Poly& a) {
  if (a.size() <= 1) return {0.0};
  Poly d(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) d[i - 1] = i * a[i];
  return d;
}

inline Poly poly_pow(const Poly& a, int n) {
  Poly r{1.0};
  for (int i = 0; i < n; ++i) r = poly_mul(r, a);
  return r;
}

template <typename T>
T poly_eval(const Poly& a, T z) {
  T acc = T(0);
  for (size_t i = a.size(); i-- > 0;) acc = acc * z + T(a[i]);
  return acc;
}

// Roots via the companion matrix; trailing (near-)zero leading coefficients
// are stripped relative to the largest coefficient.
inline std::vector<cplx> poly_roots(Poly p, double strip_tol = 1e-12) {
  double top = 0;
  for (double v : p) top = std::max(top, std::abs(v));
  if (top == 0) return {};
  while (p.size() > 1 && std::abs(p.back()) < strip_tol * top) p.pop_back();
  int n = (int)p.size() - 1;
  if (n <= 0) return {};
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) C(i, n - 1) = -p[i] / p[n];
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, /*computeEigenvectors=*/false);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

}  // namespace temb
