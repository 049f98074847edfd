#pragma once

#include <unordered_map>
#include <vector>

#include "temb/common.hpp"
#include "temb/weights.hpp"

namespace temb {

// Aztec diamond of size n on the tilted square lattice: all vertices and
// edges inside the square [0,2n]^2. Black vertices b(2i,2j+1), white
// w(2i+1,2j). Edge weights are stored per white vertex: S (to black up-left),
// W (down-left), E (up-right), N (down-right). The Kasteleyn sign is -1 on
// north edges and +1 otherwise.
struct AztecGraph {
  int n = 0;
  // Arrays indexed [ix][iy] for the white vertex (2*ix+1, 2*iy),
  // ix in 0..n-1, iy in 0..n.
  std::vector<std::vector<double>> S, W, E, N;

  Pos white(int ix, int iy) const { return Pos{2 * ix + 1, 2 * iy}; }
  Pos black(int ix, int iy) const { return Pos{2 * ix, 2 * iy + 1}; }
  bool in_range_black(Pos p) const {
    return p.x >= 0 && p.x <= 2 * n && p.y >= 1 && p.y <= 2 * n - 1 && is_black(p);
  }
  bool in_range_white(Pos p) const {
    return p.x >= 1 && p.x <= 2 * n - 1 && p.y >= 0 && p.y <= 2 * n && is_white(p);
  }

  struct Edge {
    Pos b, w;
    double kweight;  // signed Kasteleyn weight
    char type;       // 'S','W','E','N'
  };
  // All edges incident to white (ix,iy) that exist inside the diamond.
  std::vector<Edge> edges_at_white(int ix, int iy) const;
  std::vector<Edge> all_edges() const;

  long black_count() const { return long(n) * (n + 1); }
  long white_count() const { return long(n) * (n + 1); }
};

// Size n = k*l*N diamond with the given periodic weights.
AztecGraph build_aztec(int N, const PeriodicWeights& w);
// Arbitrary-weight diamond from explicit arrays (used by shuffling).
AztecGraph build_aztec_arrays(int n, std::vector<std::vector<double>> S,
                              std::vector<std::vector<double>> W,
                              std::vector<std::vector<double>> E,
                              std::vector<std::vector<double>> N);

// Reduced Aztec diamond A'_n: boundary strings gauge-adjusted and contracted
// into four vertices w0, b0, w1 (= w_{n-1}), b1 (= b_{n-1}); parallel edges
// merged. Interior vertices keep their lattice positions. The augmented-dual
// faces carry the doubled-coordinate convention, with the four outer faces
// at (1,1), (2n-1,1), (2n-1,2n-1), (1,2n-1).
struct ReducedAztec {
  int n = 0;

  std::vector<Pos> blacks, whites;  // positions; boundary supers get sentinels
  int b0 = -1, b1 = -1, w0 = -1, w1 = -1;
  std::unordered_map<Pos, int, PosHash> black_id, white_id;  // interior only

  struct Edge {
    int b, w;          // vertex ids
    double kweight;    // signed, gauged, merged
    Pos dual_from, dual_to;  // oriented dual edge: white face on the left
  };
  std::vector<Edge> edges;

  // Gauge bookkeeping: multiplier applied to each original boundary-string
  // vertex during the reduction, and the Lemma-style constants c = 1/gauge
  // for identified vertices.
  std::unordered_map<Pos, double, PosHash> gauge;
  double c_w(Pos orig) const;  // c_{w_r, w}
  double c_b(Pos orig) const;  // c_{b_r, b}
  // Maps an original vertex to its id in the reduced graph (or -1 if the
  // vertex was removed as a contraction center).
  int map_black(Pos p) const;
  int map_white(Pos p) const;

  int black_count() const { return (int)blacks.size(); }
  int white_count() const { return (int)whites.size(); }

  // Dual (augmented) vertex set: interior faces (u,v), 2<=u,v<=2n-2 with
  // u = v mod 2, plus the four outer faces.
  std::vector<Pos> dual_vertices() const;
};

ReducedAztec reduce(const AztecGraph& g);

}  // namespace temb
