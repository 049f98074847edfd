#include "temb/aztec.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace temb {

std::vector<AztecGraph::Edge> AztecGraph::edges_at_white(int ix, int iy) const {
  std::vector<Edge> out;
  Pos w = white(ix, iy);
  if (iy <= n - 1) {
    out.push_back({Pos{w.x - 1, w.y + 1}, w, S[ix][iy], 'S'});
    out.push_back({Pos{w.x + 1, w.y + 1}, w, E[ix][iy], 'E'});
  }
  if (iy >= 1) {
    out.push_back({Pos{w.x - 1, w.y - 1}, w, W[ix][iy], 'W'});
    out.push_back({Pos{w.x + 1, w.y - 1}, w, -N[ix][iy], 'N'});
  }
  return out;
}

std::vector<AztecGraph::Edge> AztecGraph::all_edges() const {
  std::vector<Edge> out;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy <= n; ++iy)
      for (auto& e : edges_at_white(ix, iy)) out.push_back(e);
  return out;
}

AztecGraph build_aztec(int N, const PeriodicWeights& w) {
  if (N < 1) throw ConfigError("period count N must be >= 1");
  int n = w.k * w.l * N;
  AztecGraph g;
  g.n = n;
  g.S.assign(n, std::vector<double>(n + 1));
  g.W.assign(n, std::vector<double>(n + 1));
  g.E.assign(n, std::vector<double>(n + 1));
  g.N.assign(n, std::vector<double>(n + 1));
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy <= n; ++iy) {
      // White (2ix+1, 2iy) is w(2i-1,2j) with i = ix+1, j = iy.
      g.S[ix][iy] = w.a(iy, ix + 1);
      g.E[ix][iy] = w.b(iy, ix + 1);
      g.W[ix][iy] = w.g(iy, ix + 1);
      g.N[ix][iy] = w.d(iy, ix + 1);
    }
  return g;
}

AztecGraph build_aztec_arrays(int n, std::vector<std::vector<double>> S,
                              std::vector<std::vector<double>> W,
                              std::vector<std::vector<double>> E,
                              std::vector<std::vector<double>> N) {
  AztecGraph g;
  g.n = n;
  g.S = std::move(S);
  g.W = std::move(W);
  g.E = std::move(E);
  g.N = std::move(N);
  return g;
}

namespace {

// Oriented dual edge of a plain lattice edge (b,w): white face on the left,
// i.e. the dual direction is the 90-degree ccw rotation of b-w.
std::pair<Pos, Pos> plain_dual(Pos b, Pos w) {
  Pos d{b.x - w.x, b.y - w.y};
  Pos r = rot90(d);
  Pos mid2{b.x + w.x, b.y + w.y};  // doubled midpoint
  Pos from{(mid2.x - r.x) / 2, (mid2.y - r.y) / 2};
  Pos to{(mid2.x + r.x) / 2, (mid2.y + r.y) / 2};
  return {from, to};
}

}  // namespace

double ReducedAztec::c_w(Pos p) const {
  auto it = gauge.find(p);
  return it == gauge.end() ? 1.0 : 1.0 / it->second;
}
double ReducedAztec::c_b(Pos p) const { return c_w(p); }

int ReducedAztec::map_black(Pos p) const {
  if (p.y == 1) return b0;
  if (p.y == 2 * n - 1) return b1;
  if (p.x == 0 || p.x == 2 * n) return -1;  // contraction center, removed
  auto it = black_id.find(p);
  return it == black_id.end() ? -1 : it->second;
}

int ReducedAztec::map_white(Pos p) const {
  if (p.y == 0 || p.y == 2 * n) return -1;  // contraction center, removed
  if (p.x == 1) return w0;
  if (p.x == 2 * n - 1) return w1;
  auto it = white_id.find(p);
  return it == white_id.end() ? -1 : it->second;
}

std::vector<Pos> ReducedAztec::dual_vertices() const {
  std::vector<Pos> out;
  for (int u = 2; u <= 2 * n - 2; ++u) {
    int lo = (u % 2 == 0) ? 2 : 3;
    int hi = (u % 2 == 0) ? 2 * n - 2 : 2 * n - 3;
    for (int v = lo; v <= hi; v += 2) out.push_back(Pos{u, v});
  }
  out.push_back(Pos{1, 1});
  out.push_back(Pos{2 * n - 1, 1});
  out.push_back(Pos{2 * n - 1, 2 * n - 1});
  out.push_back(Pos{1, 2 * n - 1});
  return out;
}

ReducedAztec reduce(const AztecGraph& g) {
  const int n = g.n;
  if (n < 2 || n % 2 != 0) throw ConfigError("reduction requires even size >= 2");
  ReducedAztec r;
  r.n = n;

  // Gauge multipliers on the boundary strings. Weight labels follow the
  // white-vertex arrays: alpha_{0,j} and beta_{0,j} live on the bottom row
  // (iy = 0), gamma_{n,j} and delta_{n,j} on the top row (iy = n),
  // alpha_{j-1,1}, gamma_{j,1} on the left column (ix = 0) and
  // beta_{j-1,n}, delta_{j,n} on the right column (ix = n-1).
  {
    double acc = 1.0;
    for (int i = 1; i <= n; ++i) {  // b(2i, 1)
      acc *= g.S[i - 1][0] / g.E[i - 1][0];
      r.gauge[Pos{2 * i, 1}] = ((i % 2) ? -1.0 : 1.0) * acc;
    }
    acc = 1.0;
    for (int i = 1; i <= n; ++i) {  // b(2i, 2n-1)
      acc *= g.W[i - 1][n] / g.N[i - 1][n];
      r.gauge[Pos{2 * i, 2 * n - 1}] = acc;
    }
    acc = 1.0;
    for (int i = 2; i <= n - 1; ++i) {  // w(1, 2i)
      acc *= g.S[0][i - 1] / g.W[0][i];
      r.gauge[Pos{1, 2 * i}] = ((i % 2) ? 1.0 : -1.0) * acc;
    }
    acc = 1.0;
    for (int i = 2; i <= n - 1; ++i) {  // w(2n-1, 2i)
      acc *= g.E[n - 1][i - 1] / g.N[n - 1][i];
      r.gauge[Pos{2 * n - 1, 2 * i}] = acc;
    }
  }
  auto gauge_of = [&](Pos p) {
    auto it = r.gauge.find(p);
    return it == r.gauge.end() ? 1.0 : it->second;
  };

  // Vertex tables: boundary supers first, then interior by scanline.
  r.blacks.push_back(Pos{0, -1});       // b0 sentinel
  r.blacks.push_back(Pos{0, -3});       // b1 sentinel
  r.b0 = 0;
  r.b1 = 1;
  r.whites.push_back(Pos{-1, 0});
  r.whites.push_back(Pos{-3, 0});
  r.w0 = 0;
  r.w1 = 1;
  for (int i = 1; i <= n - 1; ++i)
    for (int j = 1; j <= n - 2; ++j) {
      Pos p{2 * i, 2 * j + 1};
      r.black_id[p] = (int)r.blacks.size();
      r.blacks.push_back(p);
    }
  for (int i = 1; i <= n - 2; ++i)
    for (int j = 1; j <= n - 1; ++j) {
      Pos p{2 * i + 1, 2 * j};
      r.white_id[p] = (int)r.whites.size();
      r.whites.push_back(p);
    }

  // Accumulate gauged weights over the vertex map; merged parallel edges sum.
  std::map<std::pair<int, int>, double> acc;
  for (const auto& e : g.all_edges()) {
    int bi = r.map_black(e.b);
    int wi = r.map_white(e.w);
    if (bi < 0 || wi < 0) continue;  // edge consumed by a contraction
    acc[{bi, wi}] += gauge_of(e.b) * e.kweight * gauge_of(e.w);
  }

  // Dual-edge assignment. Plain edges: rotation rule. Merged edges: fixed by
  // the face polygons of the boundary vertices (outer faces at the corners,
  // straight runs along the sides).
  auto super_dual = [&](int bi, int wi, Pos wpos, Pos bpos) -> std::pair<Pos, Pos> {
    int m = 2 * n;
    bool bB0 = bi == r.b0, bB1 = bi == r.b1, wW0 = wi == r.w0, wW1 = wi == r.w1;
    if (bB0 && wW0) return {Pos{1, 1}, Pos{2, 2}};
    if (bB0 && wW1) return {Pos{m - 2, 2}, Pos{m - 1, 1}};
    if (bB1 && wW1) return {Pos{m - 1, m - 1}, Pos{m - 2, m - 2}};
    if (bB1 && wW0) return {Pos{2, m - 2}, Pos{1, m - 1}};
    if (bB0) return {Pos{wpos.x - 1, 2}, Pos{wpos.x + 1, 2}};
    if (bB1) return {Pos{wpos.x + 1, m - 2}, Pos{wpos.x - 1, m - 2}};
    if (wW0) return {Pos{2, bpos.y - 1}, Pos{2, bpos.y + 1}};
    return {Pos{m - 2, bpos.y + 1}, Pos{m - 2, bpos.y - 1}};  // wW1
  };

  for (const auto& [key, kw] : acc) {
    auto [bi, wi] = key;
    ReducedAztec::Edge e;
    e.b = bi;
    e.w = wi;
    e.kweight = kw;
    bool super = (bi == r.b0 || bi == r.b1 || wi == r.w0 || wi == r.w1);
    if (!super) {
      auto [f, t] = plain_dual(r.blacks[bi], r.whites[wi]);
      e.dual_from = f;
      e.dual_to = t;
    } else {
      auto [f, t] = super_dual(bi, wi, wi >= 2 ? r.whites[wi] : Pos{0, 0},
                               bi >= 2 ? r.blacks[bi] : Pos{0, 0});
      e.dual_from = f;
      e.dual_to = t;
    }
    r.edges.push_back(e);
  }
  return r;
}

}  // namespace temb
