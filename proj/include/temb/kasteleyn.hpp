#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "temb/aztec.hpp"

namespace temb {

// Real Kasteleyn operator K: R^W -> R^B, rows indexed by black ids, columns
// by white ids, entries +-weight with the face-alternating sign condition.
struct KasteleynOperator {
  Eigen::SparseMatrix<double> K;
  std::vector<Pos> blacks, whites;
  int b0 = -1, b1 = -1, w0 = -1, w1 = -1;  // boundary ids when reduced
  int rows() const { return (int)K.rows(); }
};

KasteleynOperator assemble(const ReducedAztec& r);
KasteleynOperator assemble(const AztecGraph& g);

// Full dense inverse; an oracle for small sizes only.
Eigen::MatrixXd dense_inverse(const KasteleynOperator& K, int dim_cap = 4096);

// The four boundary rows/columns of the inverse of the reduced operator in
// the normalized gauge: K~^-1(w0,b0) = K~^-1(w1,b1) = a and
// K~^-1(w0,b1) = -K~^-1(w1,b0) = 1. The normalized operator is
// K~ = diag(mb) K diag(mw); the solves run on a power-of-two equilibrated
// matrix since raw entries span d^(+-N).
struct BoundaryData {
  double a = 0;
  Eigen::VectorXd row_w0, row_w1;  // K~^-1(w0,.), K~^-1(w1,.) over blacks
  Eigen::VectorXd col_b0, col_b1;  // K~^-1(.,b0), K~^-1(.,b1) over whites
  Eigen::VectorXd mw, mb;          // gauge: K~(b,w) = mb(b) K(b,w) mw(w)
  Eigen::Vector4d corners_raw;     // raw corner values (debug)
  // Coulomb combinations of the rows; the two terms cancel down to e^(-cN),
  // so they are formed in extended precision next to the solves.
  Eigen::VectorXcd Fb, Fw;
};

BoundaryData boundary_rows(const KasteleynOperator& K);

// K~(b,w) from a raw weight.
inline double normalized_weight(const KasteleynOperator&, const BoundaryData& bd, int b, int w,
                                double kweight) {
  return bd.mb(b) * kweight * bd.mw(w);
}

// P[e] = K(b,w) K^-1(w,b), checked to lie in [0,1].
double edge_probability(const Eigen::MatrixXd& Kinv, const KasteleynOperator& K, int b, int w);

// Debug dump of an inverse row: columns (vertex_x, vertex_y, value).
void dump_inverse_row_csv(const std::string& path, const KasteleynOperator& K,
                          const Eigen::VectorXd& row);

}  // namespace temb
