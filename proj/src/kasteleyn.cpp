#include "temb/kasteleyn.hpp"

#include <Eigen/SparseLU>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <cmath>
#include <fstream>

namespace temb {

// Entries of the reduced inverse span d^(+-N), far beyond double range of
// relative resolution for moderate N, so the four boundary solves run in
// extended precision. 120 decimal digits covers N up to ~40 for the weight
// families in scope.
using mpfloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<120>,
                                              boost::multiprecision::et_off>;

KasteleynOperator assemble(const ReducedAztec& r) {
  if (r.black_count() != r.white_count())
    throw UnbalancedGraph("reduced Aztec has unequal color classes");
  KasteleynOperator op;
  op.blacks = r.blacks;
  op.whites = r.whites;
  op.b0 = r.b0;
  op.b1 = r.b1;
  op.w0 = r.w0;
  op.w1 = r.w1;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(r.edges.size());
  for (const auto& e : r.edges) trip.emplace_back(e.b, e.w, e.kweight);
  op.K.resize(r.black_count(), r.white_count());
  op.K.setFromTriplets(trip.begin(), trip.end());
  return op;
}

KasteleynOperator assemble(const AztecGraph& g) {
  KasteleynOperator op;
  std::unordered_map<Pos, int, PosHash> bid, wid;
  for (int j = 0; j <= g.n - 1; ++j)
    for (int i = 0; i <= g.n; ++i) {
      Pos p{2 * i, 2 * j + 1};
      bid[p] = (int)op.blacks.size();
      op.blacks.push_back(p);
    }
  for (int iy = 0; iy <= g.n; ++iy)
    for (int ix = 0; ix < g.n; ++ix) {
      Pos p{2 * ix + 1, 2 * iy};
      wid[p] = (int)op.whites.size();
      op.whites.push_back(p);
    }
  if (op.blacks.size() != op.whites.size()) throw UnbalancedGraph("Aztec color mismatch");
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& e : g.all_edges()) trip.emplace_back(bid.at(e.b), wid.at(e.w), e.kweight);
  op.K.resize((int)op.blacks.size(), (int)op.whites.size());
  op.K.setFromTriplets(trip.begin(), trip.end());
  return op;
}

Eigen::MatrixXd dense_inverse(const KasteleynOperator& K, int dim_cap) {
  if (K.rows() > dim_cap)
    throw DimensionCap("dense inverse capped at " + std::to_string(dim_cap));
  Eigen::MatrixXd D = Eigen::MatrixXd(K.K);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(D);
  if (std::abs(lu.determinant()) == 0.0) throw SingularOperator("Kasteleyn matrix singular");
  Eigen::MatrixXd inv = lu.inverse();
  double resid = (D * inv - Eigen::MatrixXd::Identity(D.rows(), D.cols())).cwiseAbs().maxCoeff();
  if (resid > 1e-10) throw SingularOperator("dense inverse residual " + std::to_string(resid));
  return inv;  // inv(w, b): rows whites, cols blacks
}

BoundaryData boundary_rows(const KasteleynOperator& K) {
  if (K.b0 < 0) throw ConfigError("boundary_rows requires a reduced operator");
  const int m = K.rows();
  using SpMat = Eigen::SparseMatrix<mpfloat>;
  using Vec = Eigen::Matrix<mpfloat, Eigen::Dynamic, 1>;

  SpMat A(m, m);
  {
    std::vector<Eigen::Triplet<mpfloat>> trip;
    for (int w = 0; w < K.K.outerSize(); ++w)
      for (Eigen::SparseMatrix<double>::InnerIterator it(K.K, w); it; ++it)
        trip.emplace_back((int)it.row(), w, mpfloat(it.value()));
    A.setFromTriplets(trip.begin(), trip.end());
  }
  SpMat At = SpMat(A.transpose());
  Eigen::SparseLU<SpMat> lu, lut;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SingularOperator("sparse LU failed");
  lut.compute(At);
  if (lut.info() != Eigen::Success) throw SingularOperator("sparse LU (transpose) failed");

  auto unit = [&](int i) {
    Vec e = Vec::Zero(m);
    e(i) = 1;
    return e;
  };
  // Rows of K^-1: K^T y = e_w gives y(b) = K^-1(w,b); columns: K x = e_b.
  Vec r0 = lut.solve(unit(K.w0));
  Vec r1 = lut.solve(unit(K.w1));
  Vec c0 = lu.solve(unit(K.b0));
  Vec c1 = lu.solve(unit(K.b1));

  BoundaryData bd;
  const mpfloat k00 = r0(K.b0), k01 = r0(K.b1), k10 = r1(K.b0), k11 = r1(K.b1);
  bd.corners_raw = Eigen::Vector4d((double)k00, (double)k01, (double)k10, (double)k11);
  const mpfloat rad = -(k00 * k11) / (k01 * k10);
  if (!(rad > 0))
    throw NegativeRadicand("boundary ratio radicand " + std::to_string((double)rad) +
                           " <= 0; Kasteleyn sign convention violated");
  const mpfloat a = sqrt(rad);
  bd.a = (double)a;

  // Remark-3.4 gauge: K~^-1(w,b) = a_w(w) a_b(b) K^-1(w,b).
  const mpfloat aw0 = 1 / k01;
  const mpfloat aw1 = a / k11;
  const mpfloat ab0 = a * k01 / k00;
  auto cast = [&](const Vec& v, const mpfloat& scale, int special, const mpfloat& sfac) {
    Eigen::VectorXd out(m);
    for (int i = 0; i < m; ++i) out(i) = (double)(v(i) * scale * (i == special ? sfac : 1));
    return out;
  };
  bd.row_w0 = cast(r0, aw0, K.b0, ab0);
  bd.row_w1 = cast(r1, aw1, K.b0, ab0);
  Eigen::VectorXd cb0(m), cb1(m);
  for (int w = 0; w < m; ++w) {
    mpfloat s0 = ab0, s1 = 1;
    if (w == K.w0) {
      s0 *= aw0;
      s1 *= aw0;
    }
    if (w == K.w1) {
      s0 *= aw1;
      s1 *= aw1;
    }
    cb0(w) = (double)(c0(w) * s0);
    cb1(w) = (double)(c1(w) * s1);
  }
  bd.col_b0 = cb0;
  bd.col_b1 = cb1;

  // Total multipliers: K~ = diag(mb) K diag(mw) with
  // K~^-1(w,b) = K^-1(w,b) / (mb(b) mw(w)).
  bd.mb = Eigen::VectorXd::Ones(m);
  bd.mw = Eigen::VectorXd::Ones(m);
  bd.mb(K.b0) = (double)(1 / ab0);
  bd.mw(K.w0) = (double)(1 / aw0);
  bd.mw(K.w1) = (double)(1 / aw1);

  // Normalization identities (3.2)-(3.3).
  auto near = [](double x, double y) { return std::abs(x - y) <= 1e-12 * (1 + std::abs(y)); };
  if (!near(bd.row_w0(K.b0), bd.a) || !near(bd.row_w1(K.b1), bd.a) ||
      !near(bd.row_w0(K.b1), 1.0) || !near(bd.row_w1(K.b0), -1.0))
    throw NumericalError("boundary normalization identities failed");

  // Coulomb combinations in extended precision. With hyp = sqrt(a^2+1),
  // sqrt(a+i) = p + qi where p = sqrt((hyp+a)/2), q = sqrt((hyp-a)/2), and
  // sqrt(-a-i) = -i sqrt(a+i), sqrt(-a+i) = i sqrt(a-i) = q + pi.
  {
    const mpfloat hyp = sqrt(a * a + 1);
    const mpfloat p = sqrt((hyp + a) / 2), q = sqrt((hyp - a) / 2);
    // F_black = -sqrt(-a-i) r0~ - sqrt(a+i) r1~ with sqrt(-a-i) = q - pi.
    // F_white = -sqrt(-a+i) c0~ + sqrt(a-i) c1~ with sqrt(-a+i) = q + pi
    // and sqrt(a-i) = p - qi.
    bd.Fb.resize(m);
    bd.Fw.resize(m);
    for (int b = 0; b < m; ++b) {
      mpfloat t0 = r0(b) * aw0 * (b == K.b0 ? ab0 : mpfloat(1));
      mpfloat t1 = r1(b) * aw1 * (b == K.b0 ? ab0 : mpfloat(1));
      bd.Fb(b) = cplx((double)(-q * t0 - p * t1), (double)(p * t0 - q * t1));
    }
    for (int w = 0; w < m; ++w) {
      mpfloat s0 = ab0, s1 = 1;
      if (w == K.w0) {
        s0 *= aw0;
        s1 *= aw0;
      }
      if (w == K.w1) {
        s0 *= aw1;
        s1 *= aw1;
      }
      mpfloat t0 = c0(w) * s0, t1 = c1(w) * s1;
      bd.Fw(w) = cplx((double)(-q * t0 + p * t1), (double)(-p * t0 - q * t1));
    }
  }
  return bd;
}

double edge_probability(const Eigen::MatrixXd& Kinv, const KasteleynOperator& K, int b, int w) {
  double p = K.K.coeff(b, w) * Kinv(w, b);
  if (p < -1e-9 || p > 1 + 1e-9)
    throw OutOfRange("edge probability " + std::to_string(p) + " outside [0,1]");
  return std::min(1.0, std::max(0.0, p));
}

void dump_inverse_row_csv(const std::string& path, const KasteleynOperator& K,
                          const Eigen::VectorXd& row) {
  std::ofstream out(path);
  out << "vertex_x,vertex_y,value\n";
  for (int i = 0; i < row.size(); ++i) {
    char buf[64];
    snprintf(buf, sizeof buf, "%.17g", row(i));
    out << K.blacks[i].x << "," << K.blacks[i].y << "," << buf << "\n";
  }
}

}  // namespace temb
