#include "temb/coulomb.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <json.hpp>

namespace temb {

CoulombGauge gauges(const KasteleynOperator& K, const BoundaryData& bd, double residual_tol) {
  CoulombGauge cg;
  cg.a = bd.a;
  const double a = bd.a;
  // Branch identities used silently throughout; guard them once.
  if (std::abs(sqrt_mami(a) * sqrt_mami(a) - cplx(-a, -1.0)) > 1e-14 ||
      std::abs(sqrt_api(a) * sqrt_ami(a) - std::sqrt(a * a + 1.0)) > 1e-12)
    throw NumericalError("principal-branch identities failed");

  const int m = K.rows();
  cg.Fb = bd.Fb;
  cg.Fw = bd.Fw;

  // Kernel / cokernel residuals at interior vertices, with the boundary
  // gauge applied to K. F spans e^(+-cN), so the residual is measured
  // against the largest term entering each cancelling sum.
  Eigen::VectorXcd KtFb = Eigen::VectorXcd::Zero(m), KFw = Eigen::VectorXcd::Zero(m);
  Eigen::VectorXd sw = Eigen::VectorXd::Zero(m), sb = Eigen::VectorXd::Zero(m);
  for (int w = 0; w < K.K.outerSize(); ++w)
    for (Eigen::SparseMatrix<double>::InnerIterator it(K.K, w); it; ++it) {
      double kt = normalized_weight(K, bd, (int)it.row(), w, it.value());
      KtFb(w) += kt * cg.Fb((int)it.row());
      KFw(it.row()) += kt * cg.Fw(w);
      sw(w) = std::max(sw(w), std::abs(kt * cg.Fb((int)it.row())));
      sb(it.row()) = std::max(sb(it.row()), std::abs(kt * cg.Fw(w)));
    }
  double worst = 0;
  int worst_v = -1;
  for (int w = 0; w < m; ++w)
    if (w != K.w0 && w != K.w1 && std::abs(KtFb(w)) / (1 + sw(w)) > worst) {
      worst = std::abs(KtFb(w)) / (1 + sw(w));
      worst_v = w;
    }
  for (int b = 0; b < m; ++b)
    if (b != K.b0 && b != K.b1 && std::abs(KFw(b)) / (1 + sb(b)) > worst) {
      worst = std::abs(KFw(b)) / (1 + sb(b));
      worst_v = b;
    }
  cg.kernel_residual = worst;
  if (worst > residual_tol)
    throw KernelResidual("Coulomb kernel residual " + std::to_string(worst) + " at vertex " +
                         std::to_string(worst_v));
  return cg;
}

TSurface integrate(const ReducedAztec& r, const KasteleynOperator& K, const BoundaryData& bd,
                   const CoulombGauge& cg, double closure_tol) {
  TSurface ts;
  ts.n = r.n;
  ts.a = bd.a;
  ts.faces = r.dual_vertices();
  for (int i = 0; i < (int)ts.faces.size(); ++i) ts.face_id[ts.faces[i]] = i;
  const int m = 2 * r.n;
  ts.outer_id[0] = ts.face_id.at(Pos{1, 1});
  ts.outer_id[1] = ts.face_id.at(Pos{m - 1, 1});
  ts.outer_id[2] = ts.face_id.at(Pos{m - 1, m - 1});
  ts.outer_id[3] = ts.face_id.at(Pos{1, m - 1});

  for (const auto& e : r.edges) {
    TSurface::DEdge d;
    d.from = ts.face_id.at(e.dual_from);
    d.to = ts.face_id.at(e.dual_to);
    d.b = e.b;
    d.w = e.w;
    d.kweight = normalized_weight(K, bd, e.b, e.w, e.kweight);
    d.dT = cg.Fb(e.b) * d.kweight * cg.Fw(e.w);
    d.dO = cg.Fb(e.b) * d.kweight * std::conj(cg.Fw(e.w));
    ts.dedges.push_back(d);
  }

  // Spanning-tree integration anchored at the lower-left outer face.
  const int F = (int)ts.faces.size();
  ts.T = Eigen::VectorXcd::Zero(F);
  ts.O = Eigen::VectorXcd::Zero(F);
  std::vector<char> seen(F, 0);
  std::vector<std::vector<int>> inc(F);
  for (int i = 0; i < (int)ts.dedges.size(); ++i) {
    inc[ts.dedges[i].from].push_back(i);
    inc[ts.dedges[i].to].push_back(i);
  }
  std::deque<int> bfs{ts.outer_id[0]};
  seen[ts.outer_id[0]] = 1;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop_front();
    for (int ei : inc[v]) {
      const auto& d = ts.dedges[ei];
      int u = d.from == v ? d.to : d.from;
      if (seen[u]) continue;
      seen[u] = 1;
      cplx sT = d.from == v ? d.dT : -d.dT;
      cplx sO = d.from == v ? d.dO : -d.dO;
      ts.T(u) = ts.T(v) + sT;
      ts.O(u) = ts.O(v) + sO;
      bfs.push_back(u);
    }
  }
  for (int f = 0; f < F; ++f)
    if (!seen[f]) throw NonClosedForm("augmented dual is not connected");

  // Path independence on all fundamental cycles.
  double scale = 1 + bd.a * bd.a;
  double worst = 0;
  for (const auto& d : ts.dedges) {
    worst = std::max(worst, std::abs(ts.T(d.to) - ts.T(d.from) - d.dT));
    worst = std::max(worst, std::abs(ts.O(d.to) - ts.O(d.from) - d.dO));
  }
  if (worst > closure_tol * scale)
    throw NonClosedForm("cycle residual " + std::to_string(worst));
  return ts;
}

TSurface embed(const PeriodicWeights& w, int N) {
  auto g = build_aztec(N, w);
  auto r = reduce(g);
  auto K = assemble(r);
  auto bd = boundary_rows(K);
  auto cg = gauges(K, bd);
  return integrate(r, K, bd, cg);
}

namespace {

double cross2(cplx o, cplx p, cplx q) {
  // Orientation predicate in extended precision.
  long double ax = (long double)p.real() - o.real(), ay = (long double)p.imag() - o.imag();
  long double bx = (long double)q.real() - o.real(), by = (long double)q.imag() - o.imag();
  return (double)(ax * by - ay * bx);
}

bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
  // Proper crossing test; shared endpoints do not count.
  double eps = 1e-13 * (std::abs(b - a) + std::abs(d - c));
  if (std::abs(a - c) < eps || std::abs(a - d) < eps || std::abs(b - c) < eps ||
      std::abs(b - d) < eps)
    return false;
  double d1 = cross2(c, d, a), d2 = cross2(c, d, b), d3 = cross2(a, b, c), d4 = cross2(a, b, d);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && std::abs(d1 - d2) > eps &&
         std::abs(d3 - d4) > eps;
}

}  // namespace

bool ValidationReport::all_pass(double angle_tol) const {
  double s = 1;
  return max_angle_dev < angle_tol && rhombus_err < 1e-9 * s && origami_boundary_err < 1e-9 * s &&
         tangential_err < 1e-8 && max_bisector_angle < 1e-8 && spokes_inward && crossings == 0 &&
         max_len_mismatch < 1e-12 && max_face_weight_err < 1e-9;
}

ValidationReport validate_perfect(const TSurface& ts, double angle_tol) {
  ValidationReport rep;
  const int m = 2 * ts.n;
  const double a = ts.a;
  const double s = std::sqrt(a * a + 1);

  // Boundary values (Remark-style normalization, anchored T(1,1) = O(1,1) = 0).
  cplx P1 = ts.T(ts.outer_id[0]), P2 = ts.T(ts.outer_id[1]), P3 = ts.T(ts.outer_id[2]),
       P4 = ts.T(ts.outer_id[3]);
  rep.rhombus_err = std::max({std::abs(P1 - cplx(0, 0)), std::abs(P2 - cplx(a, -1) * s),
                              std::abs(P3 - cplx(2 * a * s, 0)), std::abs(P4 - cplx(a, 1) * s)});
  rep.origami_boundary_err =
      std::max({std::abs(ts.O(ts.outer_id[0])), std::abs(ts.O(ts.outer_id[1]) + (a * a + 1)),
                std::abs(ts.O(ts.outer_id[2])), std::abs(ts.O(ts.outer_id[3]) + (a * a + 1))});

  // Tangential check: distance from the diagonal intersection to the four
  // sides must be the common inradius.
  {
    cplx c = (P1 + P3) / 2.0;  // rhombus diagonals bisect each other
    double dmin = 1e300, dmax = 0;
    cplx corners[5] = {P1, P2, P3, P4, P1};
    for (int i = 0; i < 4; ++i) {
      cplx u = corners[i + 1] - corners[i];
      double dist = std::abs(cross2(corners[i], corners[i + 1], c)) / std::abs(u);
      dmin = std::min(dmin, dist);
      dmax = std::max(dmax, dist);
    }
    rep.tangential_err = (dmax - dmin) / (dmax + 1e-300);
  }

  // Per inner dual vertex: cyclic order of incident dual edges by lattice
  // direction; signed angle between consecutive embedded edges, attributed to
  // the shared primal corner (white or black).
  std::vector<std::vector<int>> inc(ts.faces.size());
  for (int i = 0; i < (int)ts.dedges.size(); ++i) {
    inc[ts.dedges[i].from].push_back(i);
    inc[ts.dedges[i].to].push_back(i);
  }
  bool outer[4] = {};
  auto is_outer = [&](int f) {
    return f == ts.outer_id[0] || f == ts.outer_id[1] || f == ts.outer_id[2] ||
           f == ts.outer_id[3];
  };
  (void)outer;
  for (int f = 0; f < (int)ts.faces.size(); ++f) {
    if (is_outer(f)) continue;
    struct Spoke {
      double lattice_angle;
      cplx out;
      int b, w;
    };
    std::vector<Spoke> spokes;
    for (int ei : inc[f]) {
      const auto& d = ts.dedges[ei];
      int o = d.from == f ? d.to : d.from;
      Pos dir{ts.faces[o].x - ts.faces[f].x, ts.faces[o].y - ts.faces[f].y};
      // Use the edge form, not T-differences: deep frozen regions collapse
      // to e^(-cN) scales where only the form keeps relative accuracy.
      cplx out = d.from == f ? d.dT : -d.dT;
      spokes.push_back({std::atan2((double)dir.y, (double)dir.x), out, d.b, d.w});
    }
    if (spokes.size() != 4) continue;  // quads only; anything else is a bug upstream
    std::sort(spokes.begin(), spokes.end(),
              [](const Spoke& x, const Spoke& y) { return x.lattice_angle < y.lattice_angle; });
    double white_sum = 0, black_sum = 0, total = 0;
    double sign_ref = 0;
    bool sign_flip = false;
    for (int i2 = 0; i2 < 4; ++i2) {
      const Spoke& e1 = spokes[i2];
      const Spoke& e2 = spokes[(i2 + 1) % 4];
      double ang = std::arg(e2.out / e1.out);
      if (sign_ref == 0 && ang != 0) sign_ref = ang > 0 ? 1 : -1;
      if (ang * sign_ref < 0) sign_flip = true;
      // Wrap to the orientation of the first angle.
      if (sign_ref > 0 && ang < 0) ang += 2 * kPi;
      if (sign_ref < 0 && ang > 0) ang -= 2 * kPi;
      total += ang;
      // Shared corner: the common endpoint of the two crossed primal edges.
      bool shares_black = e1.b == e2.b;
      bool shares_white = e1.w == e2.w;
      if (shares_black == shares_white) sign_flip = true;  // degenerate adjacency
      if (shares_black)
        black_sum += ang;
      else
        white_sum += ang;
    }
    rep.max_angle_dev = std::max(rep.max_angle_dev, std::abs(std::abs(white_sum) - kPi));
    rep.max_angle_dev = std::max(rep.max_angle_dev, std::abs(std::abs(black_sum) - kPi));
    if (std::abs(std::abs(total) - 2 * kPi) > 1e-6) rep.crossings += 1;  // winding defect
    if (sign_flip) rep.crossings += 1;  // local orientation flip = fold/crossing
  }

  // Bisector condition at the four outer vertices; the spoke is a single
  // dual edge, so take its form value directly.
  {
    cplx corners[4] = {ts.T(ts.outer_id[0]), ts.T(ts.outer_id[1]), ts.T(ts.outer_id[2]),
                       ts.T(ts.outer_id[3])};
    for (int i = 0; i < 4; ++i) {
      cplx spoke(0, 0);
      for (const auto& d : ts.dedges) {
        if (d.from == ts.outer_id[i]) spoke = d.dT;
        if (d.to == ts.outer_id[i]) spoke = -d.dT;
      }
      cplx u1 = corners[(i + 3) % 4] - corners[i];
      cplx u2 = corners[(i + 1) % 4] - corners[i];
      cplx bis = u1 / std::abs(u1) + u2 / std::abs(u2);
      double angerr = std::abs(std::arg(spoke / bis));
      rep.max_bisector_angle = std::max(rep.max_bisector_angle, angerr);
      if ((spoke / bis).real() <= 0) rep.spokes_inward = false;
    }
  }

  // Closure residuals of the integrated values against the forms.
  for (const auto& d : ts.dedges) {
    rep.max_cycle_residual =
        std::max(rep.max_cycle_residual, std::abs(ts.T(d.to) - ts.T(d.from) - d.dT));
    rep.max_cycle_residual =
        std::max(rep.max_cycle_residual, std::abs(ts.O(d.to) - ts.O(d.from) - d.dO));
  }

  // |dO| = |dT| and face-weight gauge equivalence.
  for (const auto& d : ts.dedges)
    rep.max_len_mismatch = std::max(
        rep.max_len_mismatch, std::abs(std::abs(d.dO) - std::abs(d.dT)) / std::abs(d.dT));
  for (int f = 0; f < (int)ts.faces.size(); ++f) {
    if (is_outer(f)) continue;
    if (inc[f].size() != 4) continue;
    // Alternating products around the quad in cyclic order.
    std::vector<std::pair<double, int>> order;
    for (int ei : inc[f]) {
      const auto& d = ts.dedges[ei];
      int o = d.from == f ? d.to : d.from;
      Pos dir{ts.faces[o].x - ts.faces[f].x, ts.faces[o].y - ts.faces[f].y};
      order.push_back({std::atan2((double)dir.y, (double)dir.x), ei});
    }
    std::sort(order.begin(), order.end());
    double xw = 1, xl = 1;
    for (int i2 = 0; i2 < 4; ++i2) {
      const auto& d = ts.dedges[order[i2].second];
      double wgt = std::abs(d.kweight), len = std::abs(d.dT);
      if (i2 % 2 == 0) {
        xw *= wgt;
        xl *= len;
      } else {
        xw /= wgt;
        xl /= len;
      }
    }
    rep.max_face_weight_err =
        std::max(rep.max_face_weight_err, std::abs(xl - xw) / (std::abs(xw) + 1e-300));
  }

  // Local planarity: face polygons of the embedding must be simple. The
  // polygon of a primal vertex is the cycle of incident dual vertices.
  {
    std::unordered_map<int, std::vector<int>> at_black, at_white;
    for (int i = 0; i < (int)ts.dedges.size(); ++i) {
      at_black[ts.dedges[i].b].push_back(i);
      at_white[ts.dedges[i].w].push_back(i);
    }
    auto check_poly = [&](const std::vector<int>& es) {
      // Gather the distinct dual endpoints and their embedded positions; the
      // polygon is small so an all-pairs test is the local test.
      std::vector<cplx> pts;
      std::vector<int> ids;
      for (int ei : es) {
        for (int v : {ts.dedges[ei].from, ts.dedges[ei].to})
          if (std::find(ids.begin(), ids.end(), v) == ids.end()) ids.push_back(v);
      }
      if (ids.size() < 4) return;
      // Segments below the accumulated-T noise floor live inside collapsed
      // frozen regions; their local injectivity is covered by the (relative
      // exact) angle and orientation checks above.
      double floor = 1e-11 * (1 + ts.a * ts.a);
      for (int ei : es) {
        for (int ej : es) {
          if (ei >= ej) continue;
          const auto& d1 = ts.dedges[ei];
          const auto& d2 = ts.dedges[ej];
          if (std::abs(d1.dT) < floor || std::abs(d2.dT) < floor) continue;
          if (segments_cross(ts.T(d1.from), ts.T(d1.to), ts.T(d2.from), ts.T(d2.to)))
            rep.crossings += 1;
        }
      }
    };
    for (auto& [v, es] : at_black) check_poly(es);
    for (auto& [v, es] : at_white) check_poly(es);
  }
  return rep;
}

void write_embedding_svg(const std::string& path, const TSurface& ts, bool rescale_incircle) {
  double a = ts.a, s = std::sqrt(a * a + 1);
  double scale = 1.0;
  if (rescale_incircle) {
    // Inradius of the rhombus {0,(a+i)s,2as,(a-i)s} is a s / sqrt(a^2+1) * ...:
    // distance from center (as,0) to the side through 0 and (a+i)s.
    cplx c(a * s, 0), p(0, 0), q(a * s, s);
    double inr = std::abs((q - p).real() * (p - c).imag() - (q - p).imag() * (p - c).real()) /
                 std::abs(q - p);
    scale = 1.0 / inr;
  }
  double W = 2 * a * s * scale;
  double H = 2 * s * scale;
  double pad = 0.05 * std::max(W, H);
  std::ofstream out(path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' viewBox='" << -pad << " " << -H / 2 - pad
      << " " << W + 2 * pad << " " << H + 2 * pad << "'>\n";
  double sw = 0.0015 * std::max(W, H);
  auto line = [&](cplx p, cplx q, const char* color, double wd) {
    out << "<line x1='" << p.real() << "' y1='" << -p.imag() << "' x2='" << q.real() << "' y2='"
        << -q.imag() << "' stroke='" << color << "' stroke-width='" << wd << "'/>\n";
  };
  for (const auto& d : ts.dedges)
    line(scale * ts.O(d.from), scale * ts.O(d.to), "blue", sw);
  for (const auto& d : ts.dedges)
    line(scale * ts.T(d.from), scale * ts.T(d.to), "black", sw);
  for (int i = 0; i < 4; ++i)
    line(scale * ts.T(ts.outer_id[i]), scale * ts.T(ts.outer_id[(i + 1) % 4]), "red", 2 * sw);
  out << "</svg>\n";
}

void write_embedding_json(const std::string& path, const TSurface& ts) {
  std::ofstream out(path);
  char buf[256];
  out << "{\"a\":";
  snprintf(buf, sizeof buf, "%.17g", ts.a);
  out << buf << ",\"n\":" << ts.n << ",\"faces\":[";
  for (int f = 0; f < (int)ts.faces.size(); ++f) {
    snprintf(buf, sizeof buf,
             "%s{\"u\":%d,\"v\":%d,\"T\":[%.17g,%.17g],\"O\":[%.17g,%.17g]}",
             f ? "," : "", ts.faces[f].x, ts.faces[f].y, ts.T(f).real(), ts.T(f).imag(),
             ts.O(f).real(), ts.O(f).imag());
    out << buf;
  }
  out << "]}\n";
}

TSurface read_embedding_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embedding '" + path + "'");
  nlohmann::json j;
  in >> j;
  TSurface ts;
  ts.a = j["a"].get<double>();
  ts.n = j["n"].get<int>();
  int f = 0;
  ts.T.resize(j["faces"].size());
  ts.O.resize(j["faces"].size());
  for (const auto& jf : j["faces"]) {
    Pos p{jf["u"].get<int>(), jf["v"].get<int>()};
    ts.faces.push_back(p);
    ts.face_id[p] = f;
    ts.T(f) = cplx(jf["T"][0].get<double>(), jf["T"][1].get<double>());
    ts.O(f) = cplx(jf["O"][0].get<double>(), jf["O"][1].get<double>());
    ++f;
  }
  int m = 2 * ts.n;
  ts.outer_id[0] = ts.face_id.at(Pos{1, 1});
  ts.outer_id[1] = ts.face_id.at(Pos{m - 1, 1});
  ts.outer_id[2] = ts.face_id.at(Pos{m - 1, m - 1});
  ts.outer_id[3] = ts.face_id.at(Pos{1, m - 1});
  return ts;
}

}  // namespace temb
