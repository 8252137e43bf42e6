#include "precess/io_json.hpp"

#include <stdexcept>

namespace precess {

json matrix_to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row_re = json::array(), row_im = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row_re.push_back(m(i, j).real());
      row_im.push_back(m(i, j).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const json& j) {
  const auto dim = j.at("dim").get<Eigen::Index>();
  if (dim < 1) throw std::invalid_argument("matrix JSON: dim must be >= 1");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<Eigen::Index>(re.size()) != dim || static_cast<Eigen::Index>(im.size()) != dim)
    throw std::invalid_argument("matrix JSON: row count does not match dim");
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (static_cast<Eigen::Index>(re[i].size()) != dim ||
        static_cast<Eigen::Index>(im[i].size()) != dim)
      throw std::invalid_argument("matrix JSON: column count does not match dim");
    for (Eigen::Index jcol = 0; jcol < dim; ++jcol)
      m(i, jcol) = Complex(re[i][jcol].get<double>(), im[i][jcol].get<double>());
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v[i].real());
    im.push_back(v[i].imag());
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Vector vector_from_json(const json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != im.size()) throw std::invalid_argument("vector JSON: re/im size mismatch");
  Vector v(re.size());
  for (std::size_t i = 0; i < re.size(); ++i)
    v[i] = Complex(re[i].get<double>(), im[i].get<double>());
  return v;
}

json family_to_json(const FamilySpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FourLevelSpec>) {
          return json{{"family", "four_level"}, {"x_plus", s.x_plus}, {"x_minus", s.x_minus}};
        } else if constexpr (std::is_same_v<T, SpinSpec>) {
          return json{{"family", "spin"}, {"j", s.j}};
        } else if constexpr (std::is_same_v<T, ClockSpec>) {
          json j{{"family", "clock"}, {"N", s.divisions}, {"l", s.l}};
          if (s.x_plus) j["x_plus"] = *s.x_plus;
          if (s.x_minus) j["x_minus"] = *s.x_minus;
          return j;
        } else {
          json j{{"family", "raw"}, {"X", matrix_to_json(s.x)}, {"Y", matrix_to_json(s.y)}};
          if (const auto* cont = std::get_if<ContinuousEvolver>(&s.evolver)) {
            j["H"] = matrix_to_json(cont->hamiltonian);
            j["omega"] = cont->omega;
          } else {
            j["U"] = matrix_to_json(std::get<DiscreteEvolver>(s.evolver).step);
          }
          return j;
        }
      },
      spec);
}

FamilySpec family_from_json(const json& j) {
  const auto family = j.at("family").get<std::string>();
  if (family == "four_level") {
    return FourLevelSpec{j.at("x_plus").get<double>(), j.at("x_minus").get<double>()};
  }
  if (family == "spin") {
    return SpinSpec{j.at("j").get<double>()};
  }
  if (family == "clock") {
    ClockSpec spec{j.at("N").get<int>(), j.value("l", 1.0)};
    if (j.contains("x_plus")) spec.x_plus = j["x_plus"].get<double>();
    if (j.contains("x_minus")) spec.x_minus = j["x_minus"].get<double>();
    return spec;
  }
  if (family == "raw") {
    RawSpec spec{matrix_from_json(j.at("X")), matrix_from_json(j.at("Y")), Evolver{}};
    if (j.contains("U")) {
      spec.evolver = DiscreteEvolver{matrix_from_json(j["U"])};
    } else {
      spec.evolver = ContinuousEvolver{matrix_from_json(j.at("H")), j.value("omega", 1.0)};
    }
    return spec;
  }
  throw std::invalid_argument("unknown family: " + family);
}

json score_report_to_json(const ScoreReport& r) {
  return json{{"p3", r.p3},
              {"per_time", {r.per_time[0], r.per_time[1], r.per_time[2]}},
              {"classical_bound", r.classical_bound},
              {"general_bound", r.general_bound},
              {"violates_classical", r.violates_classical},
              {"saturates_general", r.saturates_general}};
}

}  // namespace precess
