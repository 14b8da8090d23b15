#include "bridgehack/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace bridgehack::io {

namespace {

json real_matrix_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix real_matrix_from(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument(std::string(what) + ": expected a 2D array");
  const Eigen::Index r = Eigen::Index(rows.size());
  const Eigen::Index c = Eigen::Index(rows.at(0).size());
  RealMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = rows.at(i);
    if (Eigen::Index(row.size()) != c)
      throw std::invalid_argument(std::string(what) + ": ragged rows");
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = row.at(j).get<double>();
  }
  return m;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json doc;
  in >> doc;
  return doc;
}

void save_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << doc.dump(2) << "\n";
}

json to_json(const StochasticMatrix& e, const std::string& name) {
  json doc{{"kind", "stochastic"},
           {"in_dim", e.in_dim()},
           {"out_dim", e.out_dim()},
           {"data", real_matrix_json(e.entries())}};
  if (!name.empty()) doc["name"] = name;
  return doc;
}

json to_json(const ComplexMatrix& m) {
  return json{{"re", real_matrix_json(m.real())},
              {"im", real_matrix_json(m.imag())}};
}

json to_json(const KrausChannel& e, const std::string& name) {
  json ops = json::array();
  for (const auto& k : e.kraus_ops()) ops.push_back(to_json(k));
  json doc{{"kind", "kraus"},
           {"in_dim", e.in_dim()},
           {"out_dim", e.out_dim()},
           {"data", std::move(ops)}};
  if (!name.empty()) doc["name"] = name;
  return doc;
}

json to_json(const ProbabilityVector& p) {
  json data = json::array();
  for (Eigen::Index i = 0; i < p.dim(); ++i) data.push_back(p[i]);
  return json{{"kind", "probability"}, {"dim", p.dim()}, {"data", std::move(data)}};
}

json to_json(const DensityMatrix& rho) {
  return json{{"kind", "density"},
              {"dim", rho.dim()},
              {"data", to_json(rho.matrix())}};
}

ComplexMatrix complex_matrix_from_json(const json& doc) {
  const RealMatrix re = real_matrix_from(doc.at("re"), "complex matrix re");
  const RealMatrix im = real_matrix_from(doc.at("im"), "complex matrix im");
  if (re.rows() != im.rows() || re.cols() != im.cols())
    throw std::invalid_argument("complex matrix: re/im shape mismatch");
  ComplexMatrix m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

StochasticMatrix stochastic_from_json(const json& doc) {
  RealMatrix m = real_matrix_from(doc.at("data"), "stochastic channel");
  if (doc.contains("out_dim") && doc.at("out_dim").get<Eigen::Index>() != m.rows())
    throw std::invalid_argument("stochastic channel: out_dim mismatch");
  if (doc.contains("in_dim") && doc.at("in_dim").get<Eigen::Index>() != m.cols())
    throw std::invalid_argument("stochastic channel: in_dim mismatch");
  for (Eigen::Index x = 0; x < m.cols(); ++x) {
    const double sum = m.col(x).sum();
    if (std::abs(sum - 1.0) > kLoadTol)
      throw std::invalid_argument("stochastic channel: column " +
                                  std::to_string(x) + " sums to " +
                                  format_double(sum));
    // Renormalize only hand-written short decimals; files we emitted are
    // already inside the strict tolerance and round-trip bit for bit.
    if (std::abs(sum - 1.0) > kProbSumTol) m.col(x) /= sum;
  }
  return StochasticMatrix(std::move(m));
}

KrausChannel kraus_from_json(const json& doc) {
  const json& data = doc.at("data");
  if (!data.is_array() || data.empty())
    throw std::invalid_argument("kraus channel: expected operator list");
  std::vector<ComplexMatrix> ops;
  ops.reserve(data.size());
  for (const json& op : data) ops.push_back(complex_matrix_from_json(op));
  return KrausChannel(std::move(ops), kLoadTol);
}

ChannelVariant channel_from_json(const json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "stochastic") return stochastic_from_json(doc);
  if (kind == "kraus") return kraus_from_json(doc);
  throw std::invalid_argument("channel document: unknown kind '" + kind + "'");
}

ProbabilityVector probability_from_json(const json& doc) {
  const json& data = doc.at("data");
  RealVector w(data.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = data.at(i).get<double>();
  const double sum = w.sum();
  if (std::abs(sum - 1.0) > kLoadTol)
    throw std::invalid_argument("probability document: sums to " +
                                format_double(sum));
  if (std::abs(sum - 1.0) > kProbSumTol) w /= sum;
  return ProbabilityVector(std::move(w));
}

DensityMatrix density_from_json(const json& doc) {
  ComplexMatrix m = complex_matrix_from_json(doc.at("data"));
  if (!is_hermitian(m, kLoadTol))
    throw std::invalid_argument("density document: not Hermitian");
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kLoadTol)
    throw std::invalid_argument("density document: trace " + format_double(tr));
  if (std::abs(tr - 1.0) > kTraceTol || !is_hermitian(m)) m = hermitize(m) / tr;
  return DensityMatrix(std::move(m));
}

StateVariant state_from_json(const json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "probability") return probability_from_json(doc);
  if (kind == "density") return density_from_json(doc);
  throw std::invalid_argument("state document: unknown kind '" + kind + "'");
}

json hack_solution_doc(const HackSolution& s) {
  json potential = json::array();
  for (Eigen::Index i = 0; i < s.potential.dim(); ++i)
    potential.push_back(s.potential[i]);
  return json{{"type", "classical-hack-solution"},
              {"status", to_string(s.status)},
              {"residual", s.residual},
              {"iterations", s.iterations},
              {"gamma", to_json(s.gamma)},
              {"potential", std::move(potential)}};
}

namespace {

json subset_pair_json(const SubsetPair& pair) {
  return json{{"inputs", pair.inputs},   {"outputs", pair.outputs},
              {"p_mass", pair.p_mass},   {"q_mass", pair.q_mass},
              {"decoupled", pair.decoupled}};
}

}  // namespace

json feasibility_doc(const FeasibilityVerdict& v) {
  json constraints = json::array();
  for (const auto& pair : v.equality_constraints)
    constraints.push_back(subset_pair_json(pair));
  json doc{{"type", "feasibility-verdict"},
           {"feasible", v.feasible},
           {"equality_constraints", std::move(constraints)}};
  doc["witness"] = v.witness ? subset_pair_json(*v.witness) : json(nullptr);
  return doc;
}

json classical_bridge_doc(const HackSolution& s, const StochasticMatrix& bridge,
                          double forward_residual, double duality_residual) {
  return json{{"type", "classical-bridge"},
              {"status", to_string(s.status)},
              {"bridge", to_json(bridge)},
              {"forward_residual", forward_residual},
              {"duality_residual", duality_residual},
              {"hack", hack_solution_doc(s)}};
}

json quantum_hack_doc(const QuantumHackSolution& s) {
  return json{{"type", "quantum-hack-solution"},
              {"status", to_string(s.status)},
              {"residual", s.residual},
              {"iterations", s.iterations},
              {"gamma", to_json(s.prior)}};
}

json quantum_bridge_doc(const BridgeResult& r,
                        std::optional<double> duality_residual) {
  json doc{{"type", "quantum-bridge"},
           {"mode", r.mode == BridgeMode::Hermitian ? "hermitian" : "ic"},
           {"status", to_string(r.status)},
           {"iterations", r.iterations},
           {"forward_residual", r.forward_residual},
           {"tp_residual", r.tp_residual}};
  if (r.bridge) doc["bridge"] = to_json(*r.bridge);
  json pots = json::array();
  for (const auto& p : r.potentials) pots.push_back(to_json(p));
  doc["potentials"] = std::move(pots);
  if (duality_residual) doc["duality_residual"] = *duality_residual;
  return doc;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_classical_image_csv(std::ostream& os,
                               const std::vector<ClassicalImageSample>& rows) {
  const bool planar = !rows.empty() && rows.front().input.dim() == 3;
  if (planar) {
    os << "sample_index,in_x,in_y,out_x,out_y,entropy,flag\n";
  } else {
    os << "sample_index,";
    const Eigen::Index d = rows.empty() ? 0 : rows.front().input.dim();
    for (Eigen::Index i = 0; i < d; ++i) os << "in_" << i << ",";
    for (Eigen::Index i = 0; i < d; ++i) os << "out_" << i << ",";
    os << "entropy,flag\n";
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    os << i << ",";
    if (planar) {
      const auto [ix, iy] = simplex_coords(row.input);
      os << format_double(ix) << "," << format_double(iy) << ",";
      if (row.output) {
        const auto [ox, oy] = simplex_coords(*row.output);
        os << format_double(ox) << "," << format_double(oy) << ",";
      } else {
        os << "nan,nan,";
      }
    } else {
      for (Eigen::Index j = 0; j < row.input.dim(); ++j)
        os << format_double(row.input[j]) << ",";
      for (Eigen::Index j = 0; j < row.input.dim(); ++j)
        os << (row.output ? format_double((*row.output)[j]) : "nan") << ",";
    }
    os << format_double(row.entropy) << "," << to_string(row.flag) << "\n";
  }
}

void write_quantum_image_csv(std::ostream& os,
                             const std::vector<QuantumImageSample>& rows) {
  os << "sample_index,in_x,in_y,in_z,out_x,out_y,out_z,purity,flag\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    os << i << "," << format_double(row.input.x) << ","
       << format_double(row.input.y) << "," << format_double(row.input.z)
       << ",";
    if (row.output) {
      os << format_double(row.output->x) << "," << format_double(row.output->y)
         << "," << format_double(row.output->z) << ",";
    } else {
      os << "nan,nan,nan,";
    }
    os << format_double(row.purity) << "," << to_string(row.flag) << "\n";
  }
}

}  // namespace bridgehack::io
