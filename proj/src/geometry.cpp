#include "logcave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "logcave/linalg.hpp"
#include "logcave/mc.hpp"

namespace logcave {

Halfspace Halfspace::make(Vec a, double b) {
  check_finite(a, "halfspace normal");
  double na = norm(a);
  if (na < 1e-300) throw ConfigError("halfspace normal must be nonzero");
  for (double& v : a) v /= na;
  return Halfspace{std::move(a), b / na};
}

bool Halfspace::contains(const Vec& x, double rel_tol) const {
  double s = dot(normal, x);
  double scale = std::max({1.0, std::fabs(s), std::fabs(offset)});
  return s <= offset + rel_tol * scale;
}

double Polytope::slack(const Vec& x) const {
  double m = std::numeric_limits<double>::infinity();
  for (const Halfspace& h : facets) m = std::min(m, h.slack(x));
  return m;
}

bool Polytope::contains(const Vec& x, double rel_tol) const {
  for (const Halfspace& h : facets)
    if (!h.contains(x, rel_tol)) return false;
  return true;
}

Box Polytope::bounding_box() const {
  if (!vertices || vertices->empty())
    throw std::runtime_error("polytope has no vertex cache; bounding box unavailable");
  Box b{(*vertices)[0], (*vertices)[0]};
  for (const Vec& v : *vertices)
    for (int k = 0; k < dimension; ++k) {
      b.lo[k] = std::min(b.lo[k], v[k]);
      b.hi[k] = std::max(b.hi[k], v[k]);
    }
  return b;
}

namespace {

Vec cross3(const Vec& u, const Vec& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

double coord_scale(const std::vector<Vec>& pts) {
  double s = 1.0;
  for (const Vec& p : pts)
    for (double v : p) s = std::max(s, std::fabs(v));
  return s;
}

// --- 2-D convex hull (monotone chain), returns a CCW vertex cycle. ---
std::vector<Vec> hull2d(std::vector<Vec> pts, double eps) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [eps](const Vec& a, const Vec& b) {
                          return std::fabs(a[0] - b[0]) <= eps && std::fabs(a[1] - b[1]) <= eps;
                        }),
            pts.end());
  auto turn = [](const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  const std::size_t n = pts.size();
  std::vector<Vec> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && turn(h[k - 2], h[k - 1], pts[i]) <= eps) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
    while (k >= t && turn(h[k - 2], h[k - 1], pts[i]) <= eps) --k;
    h[k++] = pts[i];
  }
  h.resize(k ? k - 1 : 0);
  return h;  // CCW
}

// --- 3-D incremental convex hull. ---
struct Tri {
  int a, b, c;
  Vec n;       // outward unit normal
  double off;  // n . x = off on the plane
};

Tri make_tri(const std::vector<Vec>& pts, int a, int b, int c, const Vec& inside, double scale) {
  Vec n = cross3(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
  double nn = norm(n);
  if (nn < 1e-14 * scale * scale) throw std::runtime_error("degenerate hull face");
  for (double& v : n) v /= nn;
  double off = dot(n, pts[a]);
  if (dot(n, inside) > off) {
    std::swap(b, c);
    for (double& v : n) v = -v;
    off = -off;
  }
  return Tri{a, b, c, std::move(n), off};
}

std::vector<Tri> hull3d(const std::vector<Vec>& pts) {
  const int n = static_cast<int>(pts.size());
  const double scale = coord_scale(pts);
  const double eps = 1e-12 * scale;
  if (n < 4) throw std::runtime_error("degenerate hull: fewer than 4 points in 3-D");

  // Initial simplex: spread-out point, then farthest by distance, cross
  // product, and plane offset.
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  double best = -1.0;
  for (int i = 1; i < n; ++i) {
    double d = norm(sub(pts[i], pts[i0]));
    if (d > best) best = d, i1 = i;
  }
  if (best <= eps) throw std::runtime_error("degenerate hull: points coincide");
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1) continue;
    double d = norm(cross3(sub(pts[i1], pts[i0]), sub(pts[i], pts[i0])));
    if (d > best) best = d, i2 = i;
  }
  if (best <= eps * scale) throw std::runtime_error("degenerate hull: points collinear");
  Vec pn = cross3(sub(pts[i1], pts[i0]), sub(pts[i2], pts[i0]));
  double pnn = norm(pn);
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2) continue;
    double d = std::fabs(dot(pn, sub(pts[i], pts[i0]))) / pnn;
    if (d > best) best = d, i3 = i;
  }
  if (best <= eps) throw std::runtime_error("degenerate hull: points coplanar");

  Vec inside(3, 0.0);
  for (int k = 0; k < 3; ++k)
    inside[k] = (pts[i0][k] + pts[i1][k] + pts[i2][k] + pts[i3][k]) / 4.0;

  std::vector<Tri> faces;
  faces.push_back(make_tri(pts, i0, i1, i2, inside, scale));
  faces.push_back(make_tri(pts, i0, i1, i3, inside, scale));
  faces.push_back(make_tri(pts, i0, i2, i3, inside, scale));
  faces.push_back(make_tri(pts, i1, i2, i3, inside, scale));

  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<char> visible(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (dot(faces[f].n, pts[p]) - faces[f].off > eps) visible[f] = 1, any = true;
    }
    if (!any) continue;  // interior of the current hull

    // Horizon: directed edges of visible faces whose reverse lies on a
    // hidden face (i.e. is absent from the visible edge set).
    std::set<std::pair<int, int>> vis_edges;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      const Tri& t = faces[f];
      vis_edges.insert({t.a, t.b});
      vis_edges.insert({t.b, t.c});
      vis_edges.insert({t.c, t.a});
    }
    std::vector<std::pair<int, int>> horizon;
    for (const auto& e : vis_edges)
      if (!vis_edges.count({e.second, e.first})) horizon.push_back(e);

    std::vector<Tri> next;
    next.reserve(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) next.push_back(std::move(faces[f]));
    for (const auto& e : horizon) next.push_back(make_tri(pts, e.first, e.second, p, inside, scale));
    faces = std::move(next);
  }
  return faces;
}

}  // namespace

Polytope Polytope::from_halfspaces(std::vector<Halfspace> hs) {
  if (hs.empty()) return Polytope{{}, std::nullopt, false, 0};
  const int d = hs[0].dim();
  for (const Halfspace& h : hs)
    if (h.dim() != d) throw ConfigError("halfspace dimension mismatch");

  // Drop near-duplicate facets, keeping the tighter offset.
  std::vector<Halfspace> kept;
  for (Halfspace& h : hs) {
    bool dup = false;
    for (Halfspace& k : kept) {
      if (dot(h.normal, k.normal) > 1.0 - 1e-12 &&
          std::fabs(h.offset - k.offset) <= 1e-9 * std::max(1.0, std::fabs(k.offset))) {
        k.offset = std::min(k.offset, h.offset);
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(std::move(h));
  }

  Polytope p{std::move(kept), std::nullopt, false, d};

  if (d == 1) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const Halfspace& h : p.facets) {
      if (h.normal[0] > 0)
        hi = std::min(hi, h.offset / h.normal[0]);
      else
        lo = std::max(lo, h.offset / h.normal[0]);
    }
    if (std::isfinite(lo) && std::isfinite(hi) && lo <= hi) {
      p.vertices = std::vector<Vec>{{lo}, {hi}};
      p.bounded = true;
    }
  } else if (d == 2) {
    // Vertices from pairwise facet intersections that satisfy all facets.
    std::vector<Vec> vs;
    const auto& fs = p.facets;
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = i + 1; j < fs.size(); ++j) {
        double det = fs[i].normal[0] * fs[j].normal[1] - fs[i].normal[1] * fs[j].normal[0];
        if (std::fabs(det) < 1e-12) continue;
        Vec x{(fs[i].offset * fs[j].normal[1] - fs[j].offset * fs[i].normal[1]) / det,
              (fs[i].normal[0] * fs[j].offset - fs[j].normal[0] * fs[i].offset) / det};
        if (p.contains(x, 1e-9)) {
          bool dup = false;
          for (const Vec& v : vs)
            if (norm(sub(v, x)) < 1e-9 * std::max(1.0, norm(x))) {
              dup = true;
              break;
            }
          if (!dup) vs.push_back(std::move(x));
        }
      }
    // Bounded iff the facet normals leave no angular gap of pi or more.
    bool bounded = vs.size() >= 3;
    if (bounded) {
      std::vector<double> ang;
      for (const Halfspace& h : fs) ang.push_back(std::atan2(h.normal[1], h.normal[0]));
      std::sort(ang.begin(), ang.end());
      double gap = ang.front() + 2 * M_PI - ang.back();
      for (std::size_t i = 1; i < ang.size(); ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
      bounded = gap < M_PI - 1e-12;
    }
    if (bounded) {
      Vec c(2, 0.0);
      for (const Vec& v : vs)
        for (int k = 0; k < 2; ++k) c[k] += v[k] / static_cast<double>(vs.size());
      std::sort(vs.begin(), vs.end(), [&c](const Vec& a, const Vec& b) {
        return std::atan2(a[1] - c[1], a[0] - c[0]) < std::atan2(b[1] - c[1], b[0] - c[0]);
      });
      p.vertices = std::move(vs);
      p.bounded = true;
    }
  }
  return p;
}

Polytope Polytope::hull_of(const std::vector<Vec>& points) {
  if (points.empty()) throw ConfigError("hull of empty point set");
  const int d = static_cast<int>(points[0].size());
  for (const Vec& q : points) check_dim(q, d, "hull point");
  const double scale = coord_scale(points);

  if (d == 1) {
    double lo = points[0][0], hi = points[0][0];
    for (const Vec& q : points) lo = std::min(lo, q[0]), hi = std::max(hi, q[0]);
    if (hi - lo <= 1e-14 * scale) throw std::runtime_error("degenerate hull: zero-length interval");
    Polytope p;
    p.dimension = 1;
    p.facets = {Halfspace::make({1.0}, hi), Halfspace::make({-1.0}, -lo)};
    p.vertices = std::vector<Vec>{{lo}, {hi}};
    p.bounded = true;
    return p;
  }

  if (d == 2) {
    std::vector<Vec> cyc = hull2d(points, 1e-14 * scale * scale);
    if (cyc.size() < 3) throw std::runtime_error("degenerate hull: points collinear");
    Polytope p;
    p.dimension = 2;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const Vec& a = cyc[i];
      const Vec& b = cyc[(i + 1) % cyc.size()];
      Vec outward{b[1] - a[1], a[0] - b[0]};  // right of the CCW edge
      p.facets.push_back(Halfspace::make(outward, dot(outward, a)));
    }
    p.vertices = std::move(cyc);
    p.bounded = true;
    return p;
  }

  if (d == 3) {
    std::vector<Tri> tris = hull3d(points);
    Polytope p;
    p.dimension = 3;
    // Merge coplanar triangles into one facet per supporting plane.
    for (const Tri& t : tris) {
      bool dup = false;
      for (const Halfspace& h : p.facets)
        if (dot(h.normal, t.n) > 1.0 - 1e-9 &&
            std::fabs(h.offset - t.off) <= 1e-9 * std::max(1.0, std::fabs(t.off))) {
          dup = true;
          break;
        }
      if (!dup) p.facets.push_back(Halfspace{t.n, t.off});
    }
    std::set<int> used;
    for (const Tri& t : tris) used.insert(t.a), used.insert(t.b), used.insert(t.c);
    std::vector<Vec> vs;
    for (int i : used) vs.push_back(points[i]);
    p.vertices = std::move(vs);
    p.bounded = true;
    return p;
  }

  throw ConfigError("convex hull supported for d <= 3 only");
}

ConvexBody ConvexBody::ball(int d, Vec center, double radius) {
  if (radius <= 0) throw ConfigError("ball radius must be positive");
  check_dim(center, d, "ball center");
  ConvexBody K;
  K.dimension = d;
  K.interior_point = center;
  K.box.lo = center;
  K.box.hi = center;
  for (int k = 0; k < d; ++k) K.box.lo[k] -= radius, K.box.hi[k] += radius;
  K.exact_volume = unit_ball_volume(d) * std::pow(radius, d);
  Vec c = std::move(center);
  K.signed_slack = [c, radius](const Vec& x) { return radius - norm(sub(x, c)); };
  return K;
}

ConvexBody ConvexBody::ellipsoid(Vec center, const Mat& A, double r2) {
  const int d = A.n;
  check_dim(center, d, "ellipsoid center");
  if (r2 <= 0) throw ConfigError("ellipsoid radius^2 must be positive");
  Mat Ainv = spd_inverse(A);
  double detA = spd_det(A);
  ConvexBody K;
  K.dimension = d;
  K.interior_point = center;
  K.box.lo = center;
  K.box.hi = center;
  for (int k = 0; k < d; ++k) {
    double half = std::sqrt(r2 * Ainv.at(k, k));
    K.box.lo[k] -= half;
    K.box.hi[k] += half;
  }
  K.exact_volume = unit_ball_volume(d) * std::pow(r2, d / 2.0) / std::sqrt(detA);
  Vec c = std::move(center);
  Mat Acopy = A;
  K.signed_slack = [c, Acopy, r2](const Vec& x) { return r2 - quad_form(Acopy, sub(x, c)); };
  return K;
}

ConvexBody ConvexBody::make_box(Vec lo, Vec hi) {
  const int d = static_cast<int>(lo.size());
  check_dim(hi, d, "box corner");
  for (int k = 0; k < d; ++k)
    if (!(lo[k] < hi[k])) throw ConfigError("box must satisfy lo < hi");
  ConvexBody K;
  K.dimension = d;
  K.box = Box{lo, hi};
  K.exact_volume = K.box.volume();
  K.interior_point.resize(d);
  for (int k = 0; k < d; ++k) K.interior_point[k] = 0.5 * (lo[k] + hi[k]);
  std::vector<Halfspace> hs;
  for (int k = 0; k < d; ++k) {
    Vec up(d, 0.0), dn(d, 0.0);
    up[k] = 1.0;
    dn[k] = -1.0;
    hs.push_back(Halfspace{up, hi[k]});
    hs.push_back(Halfspace{dn, -lo[k]});
  }
  Polytope p{std::move(hs), std::nullopt, true, d};
  if (d == 2) {  // corner cache, counterclockwise cycle
    p.vertices = std::vector<Vec>{
        Vec{lo[0], lo[1]}, Vec{hi[0], lo[1]}, Vec{hi[0], hi[1]}, Vec{lo[0], hi[1]}};
  } else if (d <= 3) {  // corner cache
    std::vector<Vec> vs;
    for (int mask = 0; mask < (1 << d); ++mask) {
      Vec v(d);
      for (int k = 0; k < d; ++k) v[k] = (mask >> k & 1) ? hi[k] : lo[k];
      vs.push_back(std::move(v));
    }
    p.vertices = std::move(vs);
  }
  K.polytope_form = std::move(p);
  Box bx = K.box;
  K.signed_slack = [bx](const Vec& x) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < bx.lo.size(); ++k)
      m = std::min({m, x[k] - bx.lo[k], bx.hi[k] - x[k]});
    return m;
  };
  return K;
}

ConvexBody ConvexBody::from_polytope(Polytope p) {
  if (!p.vertices || p.vertices->empty())
    throw ConfigError("ConvexBody::from_polytope needs a polytope with cached vertices");
  ConvexBody K;
  K.dimension = p.dim();
  K.box = p.bounding_box();
  K.interior_point.assign(K.dimension, 0.0);
  for (const Vec& v : *p.vertices)
    for (int k = 0; k < K.dimension; ++k)
      K.interior_point[k] += v[k] / static_cast<double>(p.vertices->size());
  if (K.dimension == 1)
    K.exact_volume = (*p.vertices)[1][0] - (*p.vertices)[0][0];
  else if (K.dimension == 2)
    K.exact_volume = shoelace_area(*p.vertices);
  Polytope stored = std::move(p);
  K.signed_slack = [stored](const Vec& x) { return stored.slack(x); };
  K.polytope_form = std::move(stored);
  return K;
}

std::vector<Vec> sphere_directions(int d, int m, DirScheme scheme, std::uint64_t seed) {
  if (d < 1) throw ConfigError("sphere_directions: dimension must be >= 1");
  if (m < d + 1) throw ConfigError("sphere_directions: need m >= d+1 directions");
  if (scheme == DirScheme::Auto)
    scheme = d == 2 ? DirScheme::UniformAngle
                    : (d == 3 ? DirScheme::FibonacciSphere : DirScheme::QuasiRandom);

  std::vector<Vec> dirs;
  dirs.reserve(m);
  if (d == 1) {
    for (int j = 0; j < m; ++j) dirs.push_back({j % 2 == 0 ? 1.0 : -1.0});
    return dirs;
  }
  switch (scheme) {
    case DirScheme::UniformAngle: {
      if (d != 2) throw ConfigError("uniform-angle directions are 2-D only");
      for (int j = 0; j < m; ++j) {
        double th = 2.0 * M_PI * j / m;
        dirs.push_back({std::cos(th), std::sin(th)});
      }
      break;
    }
    case DirScheme::FibonacciSphere: {
      if (d != 3) throw ConfigError("fibonacci-sphere directions are 3-D only");
      const double golden = M_PI * (3.0 - std::sqrt(5.0));
      for (int j = 0; j < m; ++j) {
        double z = 1.0 - (2.0 * j + 1.0) / m;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double th = golden * j;
        dirs.push_back({r * std::cos(th), r * std::sin(th), z});
      }
      break;
    }
    case DirScheme::QuasiRandom: {
      Rng rng = make_rng(seed, 0x5d1f);
      std::normal_distribution<double> gauss(0.0, 1.0);
      while (static_cast<int>(dirs.size()) < m) {
        Vec v(d);
        for (double& c : v) c = gauss(rng);
        double nv = norm(v);
        if (nv < 1e-12) continue;
        for (double& c : v) c /= nv;
        dirs.push_back(std::move(v));
      }
      break;
    }
    case DirScheme::Auto:
      break;  // unreachable
  }
  return dirs;
}

Vec ray_boundary(const ConvexBody& K, const Vec& origin, const Vec& u, double tol) {
  check_dim(origin, K.dim(), "ray origin");
  check_dim(u, K.dim(), "ray direction");
  if (norm(u) < 1e-300) throw ConfigError("ray direction must be nonzero");
  if (K.signed_slack(origin) < 0.0)
    throw std::runtime_error("ray_boundary: origin is not inside the body");

  // Exit parameter of the ray from the bounding box.
  double t_exit = std::numeric_limits<double>::infinity();
  for (int k = 0; k < K.dim(); ++k) {
    if (u[k] > 0)
      t_exit = std::min(t_exit, (K.box.hi[k] - origin[k]) / u[k]);
    else if (u[k] < 0)
      t_exit = std::min(t_exit, (K.box.lo[k] - origin[k]) / u[k]);
  }
  if (!std::isfinite(t_exit))
    throw std::runtime_error("ray_boundary: body unbounded along direction");

  double t_lo = 0.0;
  double t_hi = t_exit * (1.0 + 1e-9) + 1e-12;
  for (int tries = 0; K.signed_slack(axpy(t_hi, u, origin)) >= 0.0; ++tries) {
    if (tries >= 4)
      throw std::runtime_error("ray_boundary: bounding box does not bound the body");
    t_hi *= 2.0;
  }

  const double tol_eff = tol * std::max(1.0, t_exit);
  while (t_hi - t_lo > tol_eff) {
    double mid = 0.5 * (t_lo + t_hi);
    if (K.signed_slack(axpy(mid, u, origin)) >= 0.0)
      t_lo = mid;
    else
      t_hi = mid;
  }
  return axpy(t_lo, u, origin);  // certified member; t_lo + tol is outside
}

Polytope inscribed_polytope(const ConvexBody& K, int m, std::uint64_t seed, double tol,
                            DirScheme scheme) {
  if (K.dim() > 3)
    throw ConfigError("inscribed_polytope: exact halfspace form is d <= 3 only");
  std::vector<Vec> dirs = sphere_directions(K.dim(), m, scheme, seed);
  std::vector<Vec> pts(dirs.size());
  for (std::size_t j = 0; j < dirs.size(); ++j)
    pts[j] = ray_boundary(K, K.interior_point, dirs[j], tol);
  return Polytope::hull_of(pts);
}

double shoelace_area(const std::vector<Vec>& cycle) {
  double s = 0.0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Vec& a = cycle[i];
    const Vec& b = cycle[(i + 1) % cycle.size()];
    s += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * std::fabs(s);
}

namespace {

VolumeEstimate mc_volume(const Box& box, const std::function<bool(const Vec&)>& member,
                         std::size_t n, std::uint64_t seed, Exec exec) {
  if (n == 0) throw ConfigError("monte-carlo volume: sample count must be positive");
  const int d = box.dim();
  const double bv = box.volume();
  McSums<1> s = mc_mean(n, seed, exec, [&](Rng& rng) {
    Vec x(d);
    for (int k = 0; k < d; ++k) x[k] = box.lo[k] + uniform01(rng) * (box.hi[k] - box.lo[k]);
    return member(x) ? 1.0 : 0.0;
  });
  return VolumeEstimate{bv * s.mean(), bv * s.std_err(), VolumeMethod::MonteCarlo, n};
}

}  // namespace

VolumeEstimate volume(const ConvexBody& K, VolumeMethod method, std::size_t mc_samples,
                      std::uint64_t seed, Exec exec) {
  if (method == VolumeMethod::Auto) {
    if (K.dim() == 1)
      method = VolumeMethod::Exact1D;
    else if (K.dim() == 2 && (K.exact_volume || (K.polytope_form && K.polytope_form->vertices)))
      method = VolumeMethod::Exact2D;
    else
      method = VolumeMethod::MonteCarlo;
  }
  switch (method) {
    case VolumeMethod::Exact1D: {
      if (K.dim() != 1) throw ConfigError("exact-1d volume requested for d != 1");
      Vec hi = ray_boundary(K, K.interior_point, {1.0});
      Vec lo = ray_boundary(K, K.interior_point, {-1.0});
      return VolumeEstimate{hi[0] - lo[0], 0.0, VolumeMethod::Exact1D, 0};
    }
    case VolumeMethod::Exact2D: {
      if (K.dim() != 2) throw ConfigError("exact-2d volume requested for d != 2");
      if (K.polytope_form && K.polytope_form->vertices)
        return VolumeEstimate{shoelace_area(*K.polytope_form->vertices), 0.0, VolumeMethod::Exact2D,
                              0};
      if (K.exact_volume)
        return VolumeEstimate{*K.exact_volume, 0.0, VolumeMethod::Exact2D, 0};
      throw ConfigError("exact-2d volume: no vertex cycle or closed form available");
    }
    case VolumeMethod::MonteCarlo:
      return mc_volume(K.box, [&K](const Vec& x) { return K.member(x); }, mc_samples, seed, exec);
    case VolumeMethod::Auto:
      break;
  }
  throw std::logic_error("unreachable volume method");
}

VolumeEstimate volume(const Polytope& P, VolumeMethod method, std::size_t mc_samples,
                      std::uint64_t seed, Exec exec) {
  if (method == VolumeMethod::Auto) {
    if (P.dim() == 1)
      method = VolumeMethod::Exact1D;
    else if (P.dim() == 2 && P.vertices)
      method = VolumeMethod::Exact2D;
    else
      method = VolumeMethod::MonteCarlo;
  }
  switch (method) {
    case VolumeMethod::Exact1D: {
      if (P.dim() != 1) throw ConfigError("exact-1d volume requested for d != 1");
      if (!P.vertices) throw ConfigError("exact-1d volume: unbounded or vertex-free interval");
      return VolumeEstimate{(*P.vertices)[1][0] - (*P.vertices)[0][0], 0.0, VolumeMethod::Exact1D,
                            0};
    }
    case VolumeMethod::Exact2D: {
      if (P.dim() != 2) throw ConfigError("exact-2d volume requested for d != 2");
      if (!P.vertices) throw ConfigError("exact-2d volume: polytope has no vertex cycle");
      return VolumeEstimate{shoelace_area(*P.vertices), 0.0, VolumeMethod::Exact2D, 0};
    }
    case VolumeMethod::MonteCarlo: {
      Box box = P.bounding_box();  // throws without a vertex cache
      return mc_volume(box, [&P](const Vec& x) { return P.slack(x) >= 0.0; }, mc_samples, seed,
                       exec);
    }
    case VolumeMethod::Auto:
      break;
  }
  throw std::logic_error("unreachable volume method");
}

DeficitEstimate mc_deficit(const ConvexBody& K, const Polytope& P, std::size_t mc_samples,
                           std::uint64_t seed, Exec exec) {
  if (mc_samples == 0) throw ConfigError("mc_deficit: sample count must be positive");
  const int d = K.dim();
  const double bv = K.box.volume();
  McSums<2> s = mc_run<2>(mc_samples, seed, exec, [&](Rng& rng, std::array<double, 2>& v) {
    Vec x(d);
    for (int k = 0; k < d; ++k)
      x[k] = K.box.lo[k] + uniform01(rng) * (K.box.hi[k] - K.box.lo[k]);
    bool in_body = K.member(x);
    v[0] = in_body ? 1.0 : 0.0;
    v[1] = (in_body && P.slack(x) < 0.0) ? 1.0 : 0.0;
  });
  return DeficitEstimate{bv * s.mean(0), bv * s.std_err(0), bv * s.mean(1), bv * s.std_err(1),
                         mc_samples};
}

}  // namespace logcave
