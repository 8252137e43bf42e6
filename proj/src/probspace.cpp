#include "precess/probspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace precess {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

bool Polytope::contains(const Point3& p, double tol) const {
  for (const Facet& f : facets)
    if (f.normal.dot(p) > f.offset + tol) return false;
  return true;
}

Polytope polytope_from_vertices(std::vector<Point3> vertices) {
  Polytope poly;
  poly.vertices = std::move(vertices);
  const auto& vs = poly.vertices;
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i + 2 < n; ++i) {
    for (std::size_t j = i + 1; j + 1 < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        Point3 normal = (vs[j] - vs[i]).cross(vs[k] - vs[i]);
        if (normal.norm() < 1e-12) continue;
        normal.normalize();
        double offset = normal.dot(vs[i]);
        bool all_below = true, all_above = true;
        for (const Point3& v : vs) {
          const double d = normal.dot(v);
          if (d > offset + 1e-10) all_below = false;
          if (d < offset - 1e-10) all_above = false;
        }
        if (!all_below && !all_above) continue;
        if (!all_below) {
          normal = -normal;
          offset = -offset;
        }
        bool dup = false;
        for (const Facet& f : poly.facets)
          if ((f.normal - normal).norm() < 1e-9 && std::abs(f.offset - offset) < 1e-9) dup = true;
        if (!dup) poly.facets.push_back({normal, offset});
      }
    }
  }
  return poly;
}

Polytope full_cube() {
  std::vector<Point3> vs;
  for (int b = 0; b < 8; ++b) vs.emplace_back(b & 1, (b >> 1) & 1, (b >> 2) & 1);
  return polytope_from_vertices(std::move(vs));
}

Polytope classical_polytope() {
  std::vector<Point3> vs;
  for (int b = 1; b < 7; ++b) vs.emplace_back(b & 1, (b >> 1) & 1, (b >> 2) & 1);
  return polytope_from_vertices(std::move(vs));
}

Polytope clock_hull(double general_bound) {
  if (!(general_bound > 0.5 && general_bound <= 1.0))
    throw std::invalid_argument("clock_hull: general bound must be in (1/2, 1]");
  std::vector<Point3> vs;
  for (int b = 1; b < 7; ++b) vs.emplace_back(b & 1, (b >> 1) & 1, (b >> 2) & 1);
  const double g = general_bound;
  vs.emplace_back(g, g, g);
  vs.emplace_back(1 - g, 1 - g, 1 - g);
  return polytope_from_vertices(std::move(vs));
}

double nontrivial_facet_distance(const Point3& p) {
  const double s = p.sum();
  return std::max((s - 2.0) / std::sqrt(3.0), (1.0 - s) / std::sqrt(3.0));
}

ThetaTriple theta_ops(const PrecessingPair& pair, double zero_tol) {
  ThetaTriple ops;
  ops.dim = pair.dim();
  for (int k = 0; k < 3; ++k) ops.theta[k] = heaviside(pair.x_at(k), zero_tol);
  return ops;
}

Point3 tuple_of(const ThetaTriple& ops, const Vector& psi) {
  Point3 p;
  for (int k = 0; k < 3; ++k) p[k] = std::real(Complex(psi.adjoint() * ops.theta[k] * psi));
  return p;
}

Point3 tuple_of(const ThetaTriple& ops, const Matrix& rho) {
  Point3 p;
  for (int k = 0; k < 3; ++k) p[k] = std::real((ops.theta[k] * rho).trace());
  return p;
}

namespace {

Matrix dual_operator(const ThetaTriple& ops, const Point3& u) {
  return u[0] * ops.theta[0] + u[1] * ops.theta[1] + u[2] * ops.theta[2];
}

double support_value(const ThetaTriple& ops, const Point3& u) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(dual_operator(ops, u), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

SupportResult support_function(const ThetaTriple& ops, const Point3& u) {
  if (u.norm() < 1e-15) throw std::invalid_argument("support_function: u must be nonzero");
  Eigen::SelfAdjointEigenSolver<Matrix> es(dual_operator(ops, u));
  const Eigen::Index top = es.eigenvalues().size() - 1;
  return {es.eigenvalues()[top], es.eigenvectors().col(top)};
}

SupportGrid make_support_grid(const ThetaTriple& ops, int n_theta, int n_phi) {
  SupportGrid grid;
  grid.directions.reserve(static_cast<std::size_t>(n_theta) * n_phi + 2);
  for (int i = 0; i < n_theta; ++i) {
    const double theta = M_PI * (i + 0.5) / n_theta;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * M_PI * j / n_phi;
      grid.directions.emplace_back(std::sin(theta) * std::cos(phi),
                                   std::sin(theta) * std::sin(phi), std::cos(theta));
    }
  }
  grid.directions.emplace_back(0, 0, 1);
  grid.directions.emplace_back(0, 0, -1);
  grid.values.reserve(grid.directions.size());
  for (const Point3& u : grid.directions) grid.values.push_back(support_value(ops, u));
  return grid;
}

namespace {

void tangent_basis(const Point3& u, Point3& t1, Point3& t2) {
  const Point3 helper = std::abs(u[0]) < 0.9 ? Point3(1, 0, 0) : Point3(0, 1, 0);
  t1 = u.cross(helper).normalized();
  t2 = u.cross(t1);
}

Point3 rotate_towards(const Point3& u, const Point3& t, double alpha) {
  return (std::cos(alpha) * u + std::sin(alpha) * t).normalized();
}

struct Candidate {
  Point3 tuple;
  Vector state;  // empty => maximally mixed
};

// Affine cutting plane f(x, y) >= gx*x + gy*y + c0 for the chart gauge.
struct Cut {
  double gx, gy, c0;
};

// Minimize max_i cut_i over the box [-R, R]^2. The optimum of a max of planes
// sits at a triple intersection, on a box edge where two planes tie, or at a
// corner, so enumerate those points.
std::pair<Eigen::Vector2d, double> minimize_cut_model(const std::vector<Cut>& cuts, double R) {
  const auto model = [&](double x, double y) {
    double v = -kInf;
    for (const Cut& c : cuts) v = std::max(v, c.gx * x + c.gy * y + c.c0);
    return v;
  };
  Eigen::Vector2d best_arg = Eigen::Vector2d::Zero();
  double best_val = model(0, 0);
  const auto try_point = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    x = std::clamp(x, -R, R);
    y = std::clamp(y, -R, R);
    const double v = model(x, y);
    if (v < best_val) {
      best_val = v;
      best_arg << x, y;
    }
  };
  try_point(R, R);
  try_point(R, -R);
  try_point(-R, R);
  try_point(-R, -R);
  const int k = static_cast<int>(cuts.size());
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      // cut_i == cut_j on the line ax*x + ay*y = b
      const double ax = cuts[i].gx - cuts[j].gx;
      const double ay = cuts[i].gy - cuts[j].gy;
      const double b = cuts[j].c0 - cuts[i].c0;
      if (std::abs(ax) > 1e-14) {
        try_point((b - ay * R) / ax, R);
        try_point((b + ay * R) / ax, -R);
      }
      if (std::abs(ay) > 1e-14) {
        try_point(R, (b - ax * R) / ay);
        try_point(-R, (b + ax * R) / ay);
      }
      for (int l = j + 1; l < k; ++l) {
        const double cx = cuts[i].gx - cuts[l].gx;
        const double cy = cuts[i].gy - cuts[l].gy;
        const double d = cuts[l].c0 - cuts[i].c0;
        const double det = ax * cy - ay * cx;
        if (std::abs(det) < 1e-14) continue;
        try_point((b * cy - ay * d) / det, (ax * d - b * cx) / det);
      }
    }
  }
  return {best_arg, best_val};
}

// Extreme points of the contact face: within the top eigencluster of the dual
// operator, maximize a spread of probe directions over the compressed triple.
void face_candidates(const ThetaTriple& ops, const Point3& u, std::vector<Candidate>& out) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(dual_operator(ops, u));
  const Eigen::Index dim = es.eigenvalues().size();
  const double top = es.eigenvalues()[dim - 1];
  const double scale = std::max(1.0, std::abs(top));
  Eigen::Index first = dim - 1;
  while (first > 0 && top - es.eigenvalues()[first - 1] <= 1e-8 * scale) --first;
  const Eigen::Index cluster = std::min<Eigen::Index>(dim - first, 48);
  const Matrix basis = es.eigenvectors().rightCols(cluster);
  if (cluster == 1) {
    out.push_back({tuple_of(ops, Vector(basis.col(0))), basis.col(0)});
    return;
  }
  std::array<Matrix, 3> compressed;
  for (int k = 0; k < 3; ++k) compressed[k] = basis.adjoint() * ops.theta[k] * basis;
  static const std::vector<Point3> probes = [] {
    std::vector<Point3> ps;
    for (int s : {-1, 1}) {
      ps.emplace_back(s, 0, 0);
      ps.emplace_back(0, s, 0);
      ps.emplace_back(0, 0, s);
    }
    for (int a : {-1, 1})
      for (int b : {-1, 1})
        for (int c : {-1, 1}) ps.push_back(Point3(a, b, c).normalized());
    return ps;
  }();
  for (const Point3& w : probes) {
    Matrix probe_op = w[0] * compressed[0] + w[1] * compressed[1] + w[2] * compressed[2];
    Eigen::SelfAdjointEigenSolver<Matrix> pes(probe_op);
    const Vector state = basis * pes.eigenvectors().col(pes.eigenvalues().size() - 1);
    out.push_back({tuple_of(ops, state), state});
  }
}

struct OnRayMix {
  double r = 0.0;
  std::vector<std::pair<int, double>> weights;  // candidate index -> weight
};

// max r with center + r*nhat a convex combination of candidate tuples;
// the optimum is basic, so enumerate support sets of size <= 3.
OnRayMix best_on_ray_mix(const std::vector<Candidate>& cands, const Point3& center,
                         const Point3& nhat) {
  Point3 e1, e2;
  tangent_basis(nhat, e1, e2);
  const int m = static_cast<int>(cands.size());
  std::vector<double> a(m), b(m), r_of(m);
  for (int i = 0; i < m; ++i) {
    const Point3 d = cands[i].tuple - center;
    a[i] = e1.dot(d);
    b[i] = e2.dot(d);
    r_of[i] = nhat.dot(d);
  }
  OnRayMix best;
  best.r = -kInf;
  const auto consider = [&](double r, double off, std::vector<std::pair<int, double>> weights) {
    // `off` is the residual off-ray distance of the mixture; candidate tuples
    // carry eigensolver noise, so accept small residuals instead of exact zeros.
    if (off > 1e-7) return;
    if (r > best.r) {
      best.r = r;
      best.weights = std::move(weights);
    }
  };
  for (int i = 0; i < m; ++i)
    consider(r_of[i], std::hypot(a[i], b[i]), {{i, 1.0}});
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      // lambda*p_i + (1-lambda)*p_j closest to the ray
      const double da = a[i] - a[j], db = b[i] - b[j];
      const double denom = da * da + db * db;
      if (denom < 1e-24) continue;
      const double lambda = std::clamp((-a[j] * da - b[j] * db) / denom, 0.0, 1.0);
      const double off = std::hypot(lambda * a[i] + (1 - lambda) * a[j],
                                    lambda * b[i] + (1 - lambda) * b[j]);
      consider(lambda * r_of[i] + (1 - lambda) * r_of[j], off,
               {{i, lambda}, {j, 1 - lambda}});
      for (int k = j + 1; k < m; ++k) {
        Eigen::Matrix3d sys;
        sys << a[i], a[j], a[k], b[i], b[j], b[k], 1, 1, 1;
        Eigen::FullPivLU<Eigen::Matrix3d> lu(sys);
        if (!lu.isInvertible()) continue;
        Eigen::Vector3d lam = lu.solve(Eigen::Vector3d(0, 0, 1));
        if (lam.minCoeff() < -1e-10) continue;
        lam = lam.cwiseMax(0.0);
        lam /= lam.sum();
        const double off = std::hypot(lam[0] * a[i] + lam[1] * a[j] + lam[2] * a[k],
                                      lam[0] * b[i] + lam[1] * b[j] + lam[2] * b[k]);
        consider(lam[0] * r_of[i] + lam[1] * r_of[j] + lam[2] * r_of[k], off,
                 {{i, lam[0]}, {j, lam[1]}, {k, lam[2]}});
      }
    }
  }
  if (best.r < 0 && best.weights.empty()) best.r = 0;
  return best;
}

}  // namespace

RayResult ray_max(const ThetaTriple& ops, const SupportGrid& grid, const Point3& nhat,
                  double tol) {
  if (std::abs(nhat.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("ray_max: direction must be a unit vector");
  const Matrix mixed = Matrix::Identity(ops.dim, ops.dim) / static_cast<double>(ops.dim);
  Point3 center(0.5, 0.5, 0.5);
  const Point3 mixed_tuple = tuple_of(ops, mixed);
  // Re-anchor when the mixed state does not sit at the cube center.
  if ((mixed_tuple - center).norm() > 1e-9) center = mixed_tuple;

  const auto gauge_of = [&](const Point3& u, double h) {
    const double denom = u.dot(nhat);
    if (denom <= 1e-9) return kInf;
    return (h - u.dot(center)) / denom;
  };

  double r_upper = kInf;
  Point3 best_u = nhat;
  double best_g = gauge_of(nhat, support_value(ops, nhat));
  r_upper = std::min(r_upper, best_g);
  for (std::size_t i = 0; i < grid.directions.size(); ++i) {
    const double g = gauge_of(grid.directions[i], grid.values[i]);
    if (g < best_g) {
      best_g = g;
      best_u = grid.directions[i];
    }
  }
  r_upper = std::min(r_upper, best_g);

  // Dual refinement. In the affine chart u(x, y) = nhat + x*t1 + y*t2 every
  // direction satisfies u.nhat = 1, so the gauge equals f(x, y) = h(u) -
  // u.center, a convex function of (x, y). The maximizing state of each
  // support evaluation turns into the global cutting plane f(x', y') >=
  // u(x', y').(p - center), tight at the evaluation point, so a cutting-plane
  // descent reaches the global minimum even across the kinks that facet
  // normals produce.
  Point3 t1, t2;
  tangent_basis(nhat, t1, t2);
  std::vector<Cut> cuts;
  std::vector<Candidate> extremes;
  double best_f = kInf;
  Eigen::Vector2d best_xy = Eigen::Vector2d::Zero();
  const auto eval_chart = [&](double x, double y) {
    const Point3 u = nhat + x * t1 + y * t2;
    const SupportResult sr = support_function(ops, u);
    const Point3 p = tuple_of(ops, sr.maximizer);
    cuts.push_back({t1.dot(p - center), t2.dot(p - center), nhat.dot(p - center)});
    extremes.push_back({p, sr.maximizer});
    const double f = sr.h - u.dot(center);
    if (f < best_f) {
      best_f = f;
      best_xy << x, y;
    }
    return f;
  };
  eval_chart(0.0, 0.0);
  for (double s : {0.5, -0.5}) {
    eval_chart(s, 0.0);
    eval_chart(0.0, s);
  }
  if (best_u.dot(nhat) > 0.02)  // seed with the best grid direction
    eval_chart(t1.dot(best_u) / best_u.dot(nhat), t2.dot(best_u) / best_u.dot(nhat));
  const double kBox = 64.0;
  for (int iter = 0; iter < 48; ++iter) {
    const auto [xy, model_min] = minimize_cut_model(cuts, kBox);
    if (best_f - model_min <= 1e-10 * std::max(1.0, std::abs(best_f))) break;
    eval_chart(xy[0], xy[1]);
  }
  r_upper = std::min(r_upper, best_f);
  best_u = (nhat + best_xy[0] * t1 + best_xy[1] * t2).normalized();

  // Primal side: extreme tuples on and near the contact face plus every
  // maximizer collected during the dual descent, then the best on-ray convex
  // mixture.
  std::vector<Candidate> cands;
  cands.push_back({center, Vector()});
  face_candidates(ops, best_u, cands);
  const std::size_t n_exact = cands.size();
  for (Candidate& e : extremes) cands.push_back(std::move(e));
  tangent_basis(best_u, t1, t2);
  for (double delta : {1e-3, 3e-2}) {
    for (int axis = 0; axis < 2; ++axis) {
      for (int sign : {-1, 1}) {
        const Point3 u = rotate_towards(best_u, axis == 0 ? t1 : t2, sign * delta);
        const SupportResult sr = support_function(ops, u);
        cands.push_back({tuple_of(ops, sr.maximizer), sr.maximizer});
      }
    }
  }
  // dedup nearly identical tuples
  std::vector<Candidate> unique;
  for (auto& cand : cands) {
    bool dup = false;
    for (const auto& u : unique)
      if ((u.tuple - cand.tuple).norm() < 1e-12) dup = true;
    if (!dup) unique.push_back(std::move(cand));
  }

  const OnRayMix mix = best_on_ray_mix(unique, center, nhat);

  RayResult result;
  result.direction = nhat;
  result.r_upper = r_upper;
  result.r_lower = std::clamp(mix.r, 0.0, r_upper);
  result.witness = Matrix::Zero(ops.dim, ops.dim);
  double total = 0.0;
  for (const auto& [idx, w] : mix.weights) {
    if (w <= 0) continue;
    total += w;
    if (unique[idx].state.size() == 0)
      result.witness += w * mixed;
    else
      result.witness += w * (unique[idx].state * unique[idx].state.adjoint());
  }
  if (total <= 0) {
    result.witness = mixed;
    total = 1.0;
  }
  result.witness /= total;
  result.witness_tuple = center + result.r_lower * nhat;
  for (std::size_t i = 1; i < n_exact; ++i) result.boundary_points.push_back(cands[i].tuple);
  result.converged = (result.r_upper - result.r_lower) <= tol;
  return result;
}

RayResult ray_max(const PrecessingPair& pair, const Point3& nhat, double tol) {
  const ThetaTriple ops = theta_ops(pair);
  const SupportGrid grid = make_support_grid(ops);
  return ray_max(ops, grid, nhat, tol);
}

std::vector<Point3> fibonacci_directions(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("fibonacci_directions: need n >= 1");
  const Point3 axis = Point3(1, 1, 1).normalized();
  Point3 b1, b2;
  tangent_basis(axis, b1, b2);
  const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
  const double tie_break = static_cast<double>(seed % 4096) * 1e-12;
  std::vector<Point3> dirs;
  dirs.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double z = n == 1 ? 1.0 : 1.0 - 2.0 * i / (n - 1.0);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = i * golden_angle + tie_break;
    dirs.push_back((z * axis + rho * (std::cos(phi) * b1 + std::sin(phi) * b2)).normalized());
  }
  return dirs;
}

std::vector<RayResult> sample_surface(const PrecessingPair& pair, int n_directions,
                                      std::uint64_t seed, double tol, int threads) {
  if (n_directions < 1) throw std::invalid_argument("sample_surface: need n_directions >= 1");
  const ThetaTriple ops = theta_ops(pair);
  const SupportGrid grid = make_support_grid(ops);
  const std::vector<Point3> dirs = fibonacci_directions(n_directions, seed);
  std::vector<RayResult> results(dirs.size());

  int n_threads = threads;
  if (n_threads <= 0) {
    if (const char* env = std::getenv("PRECESS_THREADS")) n_threads = std::atoi(env);
    if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads <= 0) n_threads = 1;
  }
  n_threads = std::min<int>(n_threads, n_directions);

  auto worker = [&](int t) {
    for (std::size_t i = t; i < dirs.size(); i += n_threads)
      results[i] = ray_max(ops, grid, dirs[i], tol);
  };
  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  return results;
}

void write_point_cloud_csv(std::ostream& os, const std::vector<RayResult>& results) {
  os << "idx,nx,ny,nz,r_lower,r_upper,p0,p1,p2,facet_dist\n";
  char buf[64];
  const auto emit = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
  };
  for (std::size_t i = 0; i < results.size(); ++i) {
    const RayResult& r = results[i];
    os << i << ',';
    emit(r.direction[0]);
    os << ',';
    emit(r.direction[1]);
    os << ',';
    emit(r.direction[2]);
    os << ',';
    emit(r.r_lower);
    os << ',';
    emit(r.r_upper);
    os << ',';
    emit(r.witness_tuple[0]);
    os << ',';
    emit(r.witness_tuple[1]);
    os << ',';
    emit(r.witness_tuple[2]);
    os << ',';
    emit(nontrivial_facet_distance(r.witness_tuple));
    os << '\n';
  }
}

}  // namespace precess
