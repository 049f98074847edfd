#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "temb/kasteleyn.hpp"

namespace temb {

// Coulomb gauge pair: F_black in the cokernel and F_white in the kernel of
// the normalized Kasteleyn operator, built from the four boundary rows.
struct CoulombGauge {
  Eigen::VectorXcd Fb;  // over black ids
  Eigen::VectorXcd Fw;  // over white ids
  double a = 0;
  double kernel_residual = 0;
};

CoulombGauge gauges(const KasteleynOperator& K, const BoundaryData& bd,
                    double residual_tol = 1e-10);

// The t-surface: per augmented-dual face the pair (T, O), plus the edge
// 1-forms. Anchored at the lower-left outer face (1,1) = 0.
struct TSurface {
  int n = 0;
  double a = 0;
  std::vector<Pos> faces;
  std::unordered_map<Pos, int, PosHash> face_id;
  Eigen::VectorXcd T, O;
  struct DEdge {
    int from, to;    // dual vertex ids, white face on the left
    cplx dT, dO;
    int b, w;        // primal edge
    double kweight;  // normalized weight
  };
  std::vector<DEdge> dedges;
  int outer_id[4];  // (1,1), (2n-1,1), (2n-1,2n-1), (1,2n-1)

  cplx Tat(Pos f) const { return T(face_id.at(f)); }
  cplx Oat(Pos f) const { return O(face_id.at(f)); }
};

TSurface integrate(const ReducedAztec& r, const KasteleynOperator& K, const BoundaryData& bd,
                   const CoulombGauge& cg, double closure_tol = 1e-9);

// Convenience: weights -> reduced graph -> boundary data -> gauges -> surface.
TSurface embed(const PeriodicWeights& w, int N);

struct ValidationReport {
  double max_angle_dev = 0;       // max deviation of per-color angle sums from pi
  double max_cycle_residual = 0;  // closed-form residuals on fundamental cycles
  double rhombus_err = 0;         // boundary corners vs exact values
  double origami_boundary_err = 0;
  double tangential_err = 0;      // incircle tangency deviation
  double max_bisector_angle = 0;  // radians
  bool spokes_inward = true;
  long crossings = 0;
  double max_len_mismatch = 0;    // relative | |dO| - |dT| |
  double max_face_weight_err = 0; // gauge-equivalence of dual edge lengths
  bool all_pass(double angle_tol) const;
};

ValidationReport validate_perfect(const TSurface& ts, double angle_tol = 1e-8);

// Exports. SVG: t-embedding black, origami blue, boundary rhombus
// highlighted. JSON: {"faces":[{"u","v","T":[re,im],"O":[re,im]}],"a":..}.
void write_embedding_svg(const std::string& path, const TSurface& ts,
                         bool rescale_incircle = false);
void write_embedding_json(const std::string& path, const TSurface& ts);
TSurface read_embedding_json(const std::string& path);

}  // namespace temb
