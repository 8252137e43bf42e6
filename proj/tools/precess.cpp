#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "precess/io_json.hpp"
#include "precess/probspace.hpp"
#include "precess/protocol.hpp"
#include "precess/repro.hpp"

namespace {

using namespace precess;

struct FamilyFlags {
  std::string family;
  std::optional<double> x_plus, x_minus, j, l;
  std::optional<int> divisions;
  std::string file;

  void attach(CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--family", family, "four_level | spin | clock | raw");
    if (required) opt->required();
    cmd->add_option("--x-plus", x_plus, "smallest positive outcome");
    cmd->add_option("--x-minus", x_minus, "magnitude of the most negative outcome");
    cmd->add_option("--j", j, "spin quantum number (half-integer)");
    cmd->add_option("--N", divisions, "clock divisions (positive multiple of 6)");
    cmd->add_option("--l", l, "clock hand length");
    cmd->add_option("--file", file, "JSON file with a family spec or raw matrices");
  }

  FamilySpec to_spec() const {
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw std::invalid_argument("cannot open " + file);
      return family_from_json(json::parse(in));
    }
    if (family == "four_level") {
      if (!x_plus || !x_minus)
        throw CLI::ValidationError("four_level requires --x-plus and --x-minus");
      return FourLevelSpec{*x_plus, *x_minus};
    }
    if (family == "spin") {
      if (!j) throw CLI::ValidationError("spin requires --j");
      return SpinSpec{*j};
    }
    if (family == "clock") {
      if (!divisions) throw CLI::ValidationError("clock requires --N");
      return ClockSpec{*divisions, l.value_or(1.0), x_plus, x_minus};
    }
    if (family == "raw") throw CLI::ValidationError("raw requires --file");
    throw CLI::ValidationError("unknown family: " + family);
  }
};

Vector load_state(const PrecessingPair& pair, const std::string& selector, std::uint64_t seed) {
  if (selector == "optimal") return optimal_state(pair);
  if (selector == "random") return random_state(pair.dim(), seed);
  std::ifstream in(selector);
  if (!in) throw std::invalid_argument("cannot open state file " + selector);
  return vector_from_json(json::parse(in));
}

int cmd_bound(const FamilyFlags& flags, bool has_zero) {
  SpectrumInfo info;
  if (flags.family.empty() && flags.file.empty()) {
    if (!flags.x_plus && !flags.x_minus)
      throw CLI::ValidationError("bound needs either --family or --x-plus/--x-minus");
    info.x_plus = flags.x_plus;
    info.x_minus = flags.x_minus;
    info.has_zero = has_zero;
    if (flags.x_minus) info.outcomes.push_back(-*flags.x_minus);
    if (has_zero) info.outcomes.push_back(0.0);
    if (flags.x_plus) info.outcomes.push_back(*flags.x_plus);
  } else {
    info = spectrum(make_precessing_pair(flags.to_spec()));
  }
  json out{{"has_zero", info.has_zero},
           {"general_bound", general_bound(info)},
           {"classical_bound", kClassicalBound}};
  out["x_plus"] = info.x_plus ? json(*info.x_plus) : json(nullptr);
  out["x_minus"] = info.x_minus ? json(*info.x_minus) : json(nullptr);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_score(const FamilyFlags& flags, const std::string& state_sel, std::uint64_t seed) {
  const PrecessingPair pair = make_precessing_pair(flags.to_spec());
  ScoreReport report;
  if (state_sel == "mixed") {
    const Matrix mixed = Matrix::Identity(pair.dim(), pair.dim()) / static_cast<double>(pair.dim());
    report = p3_score(pair, mixed);
  } else {
    report = p3_score(pair, load_state(pair, state_sel, seed));
  }
  std::cout << score_report_to_json(report).dump(2) << "\n";
  return 0;
}

int cmd_probspace(const FamilyFlags& flags, int directions, const std::string& out_path,
                  std::uint64_t seed, double ray_tol, int threads) {
  const PrecessingPair pair = make_precessing_pair(flags.to_spec());
  const auto cloud = sample_surface(pair, directions, seed, ray_tol, threads);
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open output file " + out_path);
  write_point_cloud_csv(out, cloud);

  double max_p3 = -1.0, max_gap = 0.0, gap_sum = 0.0;
  int failures = 0;
  for (const RayResult& r : cloud) {
    max_p3 = std::max(max_p3, r.witness_tuple.sum() / 3.0);
    const double gap = r.r_upper - r.r_lower;
    max_gap = std::max(max_gap, gap);
    gap_sum += gap;
    if (!r.converged) ++failures;
  }
  json summary{{"directions", directions},       {"out", out_path},
               {"max_p3", max_p3},               {"max_bracket_gap", max_gap},
               {"mean_bracket_gap", gap_sum / cloud.size()}, {"failures", failures}};
  std::cout << summary.dump(2) << "\n";
  return failures == 0 ? 0 : 3;
}

int cmd_verify(const FamilyFlags& flags, const std::string& embed, int grassmann_n,
               std::uint64_t seed) {
  const PrecessingPair pair = make_precessing_pair(flags.to_spec());
  json report;
  bool all_pass = true;

  const PrecessionReport prec = verify_precession(pair, 1e-9);
  report["precession"] = {{"max_residual", prec.max_residual}, {"pass", prec.pass}};
  all_pass &= prec.pass;

  std::vector<Vector> states;
  for (int i = 0; i < 100; ++i) states.push_back(random_state(pair.dim(), seed + i));
  const double mean_sum = check_mean_sum_zero(pair, states);
  const bool mean_ok = mean_sum <= 1e-9 * std::max(1.0, pair.x.norm());
  report["mean_sum_zero"] = {{"max_abs_sum", mean_sum}, {"pass", mean_ok}};
  all_pass &= mean_ok;

  bool spectrum_ok = true;
  try {
    spectrum(pair);
  } catch (const std::exception&) {
    spectrum_ok = false;
  }
  report["spectrum_time_independent"] = {{"pass", spectrum_ok}};
  all_pass &= spectrum_ok;

  if (!embed.empty()) {
    const Vector psi = random_state(pair.dim(), seed + 1000);
    const double base = p3_score(pair, psi).p3;
    double encoded;
    if (embed == "real") {
      encoded = p3_score(embed_real(pair), embed_real_state(psi)).p3;
    } else if (embed == "grassmann") {
      encoded = p3_score(embed_grassmann(pair, grassmann_n),
                         embed_grassmann_state(psi, grassmann_n)).p3;
    } else {
      throw CLI::ValidationError("--embed must be real or grassmann");
    }
    const bool embed_ok = std::abs(encoded - base) <= 1e-9;
    report["embedding"] = {{"kind", embed}, {"p3", base}, {"p3_encoded", encoded},
                           {"pass", embed_ok}};
    all_pass &= embed_ok;
  }

  report["pass"] = all_pass;
  std::cout << report.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

int cmd_witness(const FamilyFlags& flags) {
  const PrecessingPair pair = make_precessing_pair(flags.to_spec());
  const WitnessReport w = dimension_witness(pair);
  json out{{"distinct_levels", w.distinct_levels},
           {"p3_range", {w.p3_min, w.p3_max}},
           {"trivial", w.trivial}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_repro(int threads) {
  const auto results = repro::run_all(threads);
  std::cout << repro::format_table(results);
  for (const auto& r : results)
    if (!r.pass) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Precession-protocol toolkit: uniformly precessing observables, "
               "Tsirelson scores, spectrum bounds, and probability-space geometry"};
  app.require_subcommand(1);

  FamilyFlags bound_family, score_family, prob_family, verify_family, witness_family;
  bool bound_has_zero = false;
  auto* bound = app.add_subcommand("bound", "theory-independent score bound from a spectrum");
  bound_family.attach(bound, false);
  bound->add_flag("--has-zero", bound_has_zero, "spectrum contains 0");

  std::string state_sel = "optimal";
  std::uint64_t seed = 42;
  auto* score = app.add_subcommand("score", "score a state against the protocol");
  score_family.attach(score);
  score->add_option("--state", state_sel, "optimal | mixed | random | <state.json>");
  score->add_option("--seed", seed, "seed for random states");

  int directions = 500, threads = 0;
  double ray_tol = 1e-4;
  std::string out_path;
  auto* prob = app.add_subcommand("probspace", "sample the quantum probability space surface");
  prob_family.attach(prob);
  prob->add_option("--directions", directions, "number of ray directions")->required();
  prob->add_option("--out", out_path, "output CSV path")->required();
  prob->add_option("--seed", seed, "lattice tie-breaking seed");
  prob->add_option("--ray-tol", ray_tol, "required bracket gap per ray");
  prob->add_option("--threads", threads, "worker threads (0 = machine parallelism)");

  std::string embed;
  int grassmann_n = 2;
  auto* verify = app.add_subcommand("verify", "check precession, mean-sum, and embeddings");
  verify_family.attach(verify);
  verify->add_option("--embed", embed, "also check an embedding: real | grassmann");
  verify->add_option("--grassmann-n", grassmann_n, "Grassmann block size");
  verify->add_option("--seed", seed, "seed for random probe states");

  auto* witness = app.add_subcommand("witness", "distinct-level count and score range");
  witness_family.attach(witness);

  auto* repro_cmd = app.add_subcommand("repro", "run the full reproduction suite");
  repro_cmd->add_option("--threads", threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bound->parsed()) return cmd_bound(bound_family, bound_has_zero);
    if (score->parsed()) return cmd_score(score_family, state_sel, seed);
    if (prob->parsed())
      return cmd_probspace(prob_family, directions, out_path, seed, ray_tol, threads);
    if (verify->parsed()) return cmd_verify(verify_family, embed, grassmann_n, seed);
    if (witness->parsed()) return cmd_witness(witness_family);
    if (repro_cmd->parsed()) return cmd_repro(threads);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
