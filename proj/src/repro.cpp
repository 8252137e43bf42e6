#include "precess/repro.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "precess/probspace.hpp"
#include "precess/protocol.hpp"

namespace precess::repro {

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << "FAILED: " << what;
    }
  }
};

// Random pair with a three-level ladder Hamiltonian: H has levels {0,1,2}
// with random degeneracies, L couples adjacent levels, X = L + L^dag,
// Y = i(L - L^dag). Such pairs precess uniformly by construction.
PrecessingPair random_three_level_pair(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> deg(1, 2);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d0 = deg(rng), d1 = deg(rng), d2 = deg(rng);
  const int dim = d0 + d1 + d2;
  Matrix h = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) h(i, i) = i < d0 ? 0.0 : (i < d0 + d1 ? 1.0 : 2.0);
  Matrix lower = Matrix::Zero(dim, dim);
  for (int r = d0; r < d0 + d1; ++r)
    for (int c = 0; c < d0; ++c) lower(r, c) = Complex(gauss(rng), gauss(rng));
  for (int r = d0 + d1; r < dim; ++r)
    for (int c = d0; c < d0 + d1; ++c) lower(r, c) = Complex(gauss(rng), gauss(rng));
  const Matrix x = lower + lower.adjoint();
  const Matrix y = Complex(0, 1) * (lower - Matrix(lower.adjoint()));
  return make_precessing_pair(RawSpec{x, y, ContinuousEvolver{h, 1.0}});
}

}  // namespace

std::vector<CriterionResult> run_all(int threads) {
  std::vector<CriterionResult> results;
  const auto run = [&](int id, const std::string& name, double budget_s, auto&& body) {
    Check check;
    const auto t0 = Clock::now();
    try {
      body(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    check.require(secs < budget_s, "runtime " + std::to_string(secs) + "s over budget");
    std::string detail = check.detail.str();
    if (detail.empty()) detail = "ok";
    results.push_back({id, name, check.pass, detail, secs});
  };

  run(1, "spin-3/2 maximum score 3/4", 0.1, [](Check& c) {
    const auto [p3, state] = max_p3(make_spin(1.5));
    c.require(std::abs(p3 - 0.75) <= 1e-9, "max_p3(Spin(3/2)) = " + std::to_string(p3));
  });

  run(2, "four-level family saturates the general bound", 5.0, [](Check& c) {
    std::mt19937_64 rng(20260823);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double xp = 0.05 + 2.0 * unif(rng);
      const double xm = xp * (1.02 + 6.0 * unif(rng));
      const auto [p3, state] = max_p3(make_four_level(xp, xm));
      worst = std::max(worst, std::abs(p3 - 1.0 / (1.0 + xp / xm)));
    }
    c.require(worst <= 1e-9, "worst |max_p3 - closed form| = " + std::to_string(worst));
  });

  run(3, "clock bound (1+cos(7pi/15))^-1 and optimal score", 1.0, [](Check& c) {
    const double closed_form = 1.0 / (1.0 + std::cos(7.0 * M_PI / 15.0));
    const PrecessingPair pair = make_clock(60, 1.0);
    const double bound = general_bound(spectrum(pair));
    c.require(std::abs(bound - closed_form) <= 1e-12,
              "general_bound off by " + std::to_string(bound - closed_form));
    const double score = p3_score(pair, optimal_state(pair)).p3;
    c.require(std::abs(score - closed_form) <= 1e-9,
              "optimal score off by " + std::to_string(score - closed_form));
  });

  run(4, "four-level pair outperforms the oscillator bound", 0.1, [](Check& c) {
    const PrecessingPair pair = make_four_level(1.0, 2.72);
    const double p3 = p3_score(pair, optimal_state(pair)).p3;
    c.require(p3 >= 0.731, "score " + std::to_string(p3) + " < 0.731");
    c.require(p3 > 0.730822, "score does not beat the oscillator bound");
  });

  run(5, "classical clock baseline 2/3", 0.1, [](Check& c) {
    for (int n : {6, 12, 60})
      c.require(classical_clock_max_p3(n) == 2.0 / 3.0,
                "classical max for N=" + std::to_string(n) + " is not exactly 2/3");
  });

  run(6, "three-level systems score trivially", 10.0, [](Check& c) {
    const auto check_trivial = [&](const PrecessingPair& pair, const std::string& what) {
      const WitnessReport w = dimension_witness(pair);
      c.require(std::abs(w.p3_min - 0.5) <= 1e-9 && std::abs(w.p3_max - 0.5) <= 1e-9,
                what + " score range (" + std::to_string(w.p3_min) + "," +
                    std::to_string(w.p3_max) + ") not trivial");
    };
    check_trivial(make_spin(0.5), "spin-1/2");
    check_trivial(make_spin(1.0), "spin-1");
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i)
      check_trivial(random_three_level_pair(rng), "ladder pair " + std::to_string(i));
  });

  run(7, "bound soundness over random pure states", 30.0, [](Check& c) {
    const std::vector<PrecessingPair> pairs = {make_four_level(1.0, 3.0), make_spin(1.5),
                                               make_clock(12, 1.0)};
    for (const PrecessingPair& pair : pairs) {
      const double bound = general_bound(spectrum(pair));
      const ThetaTriple ops = theta_ops(pair);
      double worst = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const Vector psi = random_state(pair.dim(), 1000 * pair.dim() + i);
        worst = std::max(worst, tuple_of(ops, psi).sum() / 3.0);
      }
      c.require(worst <= bound + 1e-9,
                pair.label + ": best sampled p3 " + std::to_string(worst) + " exceeds bound");
    }
  });

  run(8, "precession and vanishing mean sum", 5.0, [](Check& c) {
    const std::vector<PrecessingPair> pairs = {make_four_level(1.0, 3.0),
                                               make_four_level(1.0, 2.72), make_spin(0.5),
                                               make_spin(1.5), make_clock(6, 1.0),
                                               make_clock(60, 1.0)};
    for (const PrecessingPair& pair : pairs) {
      const PrecessionReport rep = verify_precession(pair, 1e-9);
      c.require(rep.pass, pair.label + ": precession residual " + std::to_string(rep.max_residual));
      std::vector<Vector> states;
      for (int i = 0; i < 100; ++i) states.push_back(random_state(pair.dim(), 31 * i + 1));
      const double worst = check_mean_sum_zero(pair, states);
      c.require(worst <= 1e-9 * std::max(1.0, pair.x.norm()),
                pair.label + ": mean sum " + std::to_string(worst));
    }
  });

  run(9, "probability-space geometry", 180.0, [threads](Check& c) {
    const auto spin_cloud = sample_surface(make_spin(1.5), 500, 1, 1e-4, threads);
    const Polytope cube = full_cube();
    double max_gap = 0.0, max_p3_val = 0.0;
    bool all_inside = true, some_outside_c = false;
    for (const RayResult& r : spin_cloud) {
      max_gap = std::max(max_gap, r.r_upper - r.r_lower);
      max_p3_val = std::max(max_p3_val, r.witness_tuple.sum() / 3.0);
      if (!cube.contains(r.witness_tuple, 1e-9)) all_inside = false;
      if (nontrivial_facet_distance(r.witness_tuple) > 1e-3) some_outside_c = true;
    }
    c.require(max_gap <= 1e-4, "spin-3/2 max bracket gap " + std::to_string(max_gap));
    c.require(std::abs(max_p3_val - 0.75) <= 1e-4,
              "spin-3/2 cloud max p3 " + std::to_string(max_p3_val));
    c.require(all_inside, "spin-3/2 point left the full cube");
    c.require(some_outside_c, "no spin-3/2 point beyond the nontrivial facet");

    const PrecessingPair clock = make_clock(60, 1.0);
    const auto clock_cloud = sample_surface(clock, 200, 1, 1e-4, threads);
    const Polytope hull = clock_hull(general_bound(spectrum(clock)));
    std::vector<Point3> points;
    for (const RayResult& r : clock_cloud) {
      points.push_back(r.witness_tuple);
      points.insert(points.end(), r.boundary_points.begin(), r.boundary_points.end());
    }
    for (const Point3& v : hull.vertices) {
      double nearest = 1e300;
      for (const Point3& p : points) nearest = std::min(nearest, (p - v).norm());
      c.require(nearest <= 1e-3, "clock hull vertex not reproduced (distance " +
                                     std::to_string(nearest) + ")");
    }
  });

  run(10, "real and Grassmann embeddings preserve the score", 1.0, [](Check& c) {
    const PrecessingPair pair = make_four_level(1.0, 3.0);
    const Vector psi = optimal_state(pair);
    const double base = p3_score(pair, psi).p3;
    const double real_score = p3_score(embed_real(pair), embed_real_state(psi)).p3;
    c.require(std::abs(real_score - base) <= 1e-9,
              "real embedding score off by " + std::to_string(real_score - base));
    const double grass_score =
        p3_score(embed_grassmann(pair, 2), embed_grassmann_state(psi, 2)).p3;
    c.require(std::abs(grass_score - base) <= 1e-9,
              "Grassmann embedding score off by " + std::to_string(grass_score - base));
  });

  run(11, "score operator spectrum reflects about 1/2", 1.0, [](Check& c) {
    const std::vector<PrecessingPair> pairs = {make_four_level(1.0, 3.0),
                                               make_four_level(1.0, 2.72), make_clock(6, 1.0),
                                               make_clock(60, 1.0)};
    for (const PrecessingPair& pair : pairs) {
      const EigenSystem es = eig_hermitian(score_operator(pair));
      const double sum = es.values[0] + es.values[es.values.size() - 1];
      c.require(std::abs(sum - 1.0) <= 1e-9,
                pair.label + ": lambda_min + lambda_max = " + std::to_string(sum));
    }
  });

  return results;
}

std::string format_table(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    os << (r.pass ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << "  ("
       << std::to_string(r.seconds) << "s)";
    if (!r.pass) os << "  -- " << r.detail;
    os << "\n";
  }
  return os.str();
}

}  // namespace precess::repro
