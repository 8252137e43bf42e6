#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "precess/protocol.hpp"

namespace precess {

using Point3 = Eigen::Vector3d;

struct Facet {
  Point3 normal;  // outward
  double offset;  // n . p <= offset for members
};

struct Polytope {
  std::vector<Point3> vertices;
  std::vector<Facet> facets;

  bool contains(const Point3& p, double tol = 1e-12) const;
};

// Facets by enumeration over vertex triples; vertex counts here are <= 8.
Polytope polytope_from_vertices(std::vector<Point3> vertices);

Polytope full_cube();
Polytope classical_polytope();
// Conv[C u {(g,g,g)} u {(1-g,1-g,1-g)}], 1/2 < g <= 1
Polytope clock_hull(double general_bound);

// Signed distance to the nearest of the two nontrivial facets of C
// (positive outside the classical polytope).
double nontrivial_facet_distance(const Point3& p);

struct ThetaTriple {
  std::array<Matrix, 3> theta;  // Theta(X_k)
  Eigen::Index dim;
};
ThetaTriple theta_ops(const PrecessingPair& pair, double zero_tol = kDefaultZeroTol);

Point3 tuple_of(const ThetaTriple& ops, const Vector& psi);
Point3 tuple_of(const ThetaTriple& ops, const Matrix& rho);

struct SupportResult {
  double h;          // lambda_max(sum_k u_k Theta(X_k))
  Vector maximizer;  // top eigenvector
};
SupportResult support_function(const ThetaTriple& ops, const Point3& u);

// Precomputed support values on the global dual seeding grid.
struct SupportGrid {
  std::vector<Point3> directions;
  std::vector<double> values;
};
SupportGrid make_support_grid(const ThetaTriple& ops, int n_theta = 32, int n_phi = 64);

struct RayResult {
  Point3 direction;
  double r_lower = 0.0;
  double r_upper = 0.0;
  Matrix witness;                      // density matrix achieving r_lower
  Point3 witness_tuple;                // center + r_lower * direction
  std::vector<Point3> boundary_points; // extreme tuples found on the dual contact face
  bool converged = false;              // r_upper - r_lower <= tol
};

RayResult ray_max(const ThetaTriple& ops, const SupportGrid& grid, const Point3& nhat,
                  double tol = 1e-4);
RayResult ray_max(const PrecessingPair& pair, const Point3& nhat, double tol = 1e-4);

// Deterministic pole-inclusive Fibonacci lattice, aligned so that the first
// direction is exactly (1,1,1)/sqrt(3) and the last its antipode. The seed
// only perturbs the azimuthal tie-breaking offset.
std::vector<Point3> fibonacci_directions(int n, std::uint64_t seed);

std::vector<RayResult> sample_surface(const PrecessingPair& pair, int n_directions,
                                      std::uint64_t seed, double tol = 1e-4, int threads = 0);

// CSV: idx,nx,ny,nz,r_lower,r_upper,p0,p1,p2,facet_dist with 17 significant digits
void write_point_cloud_csv(std::ostream& os, const std::vector<RayResult>& results);

}  // namespace precess
