#include "channellab/serialize.hpp"

#include <cmath>
#include <string>

namespace channellab::io {

namespace {

int require_positive_int(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + ": missing \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw SchemaError(where + ": \"" + key + "\" must be a positive integer");
  }
  return v.get<int>();
}

const json& require_key(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

}  // namespace

json real_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw SchemaError("complex entry must be [re, im] or a number, got " + j.dump());
}

ComplexMatrix matrix_from_json(const json& j, int rows, int cols, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw SchemaError(where + ": expected " + std::to_string(rows) + " rows");
  }
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw SchemaError(where + ": row " + std::to_string(i) + " must have " +
                        std::to_string(cols) + " entries");
    }
    for (int c = 0; c < cols; ++c) {
      try {
        m(i, c) = complex_from_json(row[c]);
      } catch (const SchemaError& e) {
        throw SchemaError(where + ": entry (" + std::to_string(i) + "," + std::to_string(c) +
                          "): " + e.what());
      }
    }
  }
  return m;
}

ComplexVector vector_from_json(const json& j, int size, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != size) {
    throw SchemaError(where + ": expected " + std::to_string(size) + " entries");
  }
  ComplexVector v(size);
  for (int i = 0; i < size; ++i) v(i) = complex_from_json(j[i]);
  return v;
}

ChannelDocument channel_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("channel document must be a JSON object");
  const bool has_kraus = j.contains("kraus");
  const bool has_stinespring = j.contains("stinespring");
  if (has_kraus == has_stinespring) {
    throw SchemaError("channel document needs exactly one of \"kraus\" or \"stinespring\"");
  }
  std::string label;
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw SchemaError("\"label\" must be a string");
    label = j["label"].get<std::string>();
  }
  if (has_kraus) {
    const int dim = require_positive_int(j, "dim", "channel");
    const json& ops = j["kraus"];
    if (!ops.is_array() || ops.empty()) throw SchemaError("\"kraus\" must be a non-empty array");
    std::vector<ComplexMatrix> kraus;
    for (std::size_t k = 0; k < ops.size(); ++k) {
      kraus.push_back(matrix_from_json(ops[k], dim, dim, "kraus[" + std::to_string(k) + "]"));
    }
    return {KrausChannel(dim, std::move(kraus), label), std::nullopt};
  }
  const json& s = j["stinespring"];
  StinespringDilation d;
  d.dim_a = require_positive_int(s, "dimA", "stinespring");
  d.dim_b = require_positive_int(s, "dimB", "stinespring");
  const int total = d.dim_a * d.dim_b;
  d.unitary = matrix_from_json(require_key(s, "unitary", "stinespring"), total, total,
                               "stinespring.unitary");
  d.bath_state =
      vector_from_json(require_key(s, "bath_state", "stinespring"), d.dim_b, "stinespring.bath_state");
  if (j.contains("dim") && j["dim"] != d.dim_a) {
    throw SchemaError("\"dim\" disagrees with stinespring.dimA");
  }
  KrausChannel c = from_stinespring(d);
  c.label = label;
  return {std::move(c), d};
}

json channel_to_json(const KrausChannel& c) {
  json ops = json::array();
  for (const ComplexMatrix& k : c.kraus_ops) ops.push_back(to_json(k));
  json out = {{"dim", c.dim}, {"kraus", ops}};
  if (!c.label.empty()) out["label"] = c.label;
  return out;
}

json stinespring_to_json(const StinespringDilation& d, const std::string& label) {
  json out = {{"stinespring",
               {{"dimA", d.dim_a},
                {"dimB", d.dim_b},
                {"unitary", to_json(d.unitary)},
                {"bath_state", vector_to_json(d.bath_state)}}}};
  if (!label.empty()) out["label"] = label;
  return out;
}

ConservedDilation dilation_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("dilation document must be a JSON object");
  ConservedDilation cd;
  StinespringDilation& d = cd.dilation;
  d.dim_a = require_positive_int(j, "dimA", "dilation");
  d.dim_b = require_positive_int(j, "dimB", "dilation");
  const int total = d.dim_a * d.dim_b;
  d.unitary = matrix_from_json(require_key(j, "unitary", "dilation"), total, total, "unitary");
  d.bath_state = vector_from_json(require_key(j, "bath_state", "dilation"), d.dim_b, "bath_state");
  cd.m_a = matrix_from_json(require_key(j, "mA", "dilation"), d.dim_a, d.dim_a, "mA");
  cd.m_b = matrix_from_json(require_key(j, "mB", "dilation"), d.dim_b, d.dim_b, "mB");
  const json& ext = require_key(j, "extremal", "dilation");
  if (!ext.is_string()) throw SchemaError("\"extremal\" must be \"max\" or \"min\"");
  try {
    cd.extremal = extremal_from_string(ext.get<std::string>());
  } catch (const PreconditionError& e) {
    throw SchemaError(e.what());
  }
  return cd;
}

json dilation_to_json(const ConservedDilation& cd) {
  return {{"dimA", cd.dilation.dim_a},
          {"dimB", cd.dilation.dim_b},
          {"unitary", to_json(cd.dilation.unitary)},
          {"bath_state", vector_to_json(cd.dilation.bath_state)},
          {"mA", to_json(cd.m_a)},
          {"mB", to_json(cd.m_b)},
          {"extremal", to_string(cd.extremal)}};
}

json to_json(const ValidationReport& r) {
  return {{"passed", r.passed()},
          {"trace_preserving", r.trace_preserving},
          {"completely_positive", r.completely_positive},
          {"completeness_defect", r.completeness_defect},
          {"min_choi_eigenvalue", r.min_choi_eigenvalue}};
}

json to_json(const SpectralReport& r) {
  json spectrum = json::array();
  for (Complex z : r.spectrum) spectrum.push_back(to_json(z));
  json peripheral = json::array();
  for (Complex z : r.peripheral) peripheral.push_back(to_json(z));
  json fixed_points = json::array();
  if (r.fixed_point) fixed_points.push_back(to_json(r.fixed_point->matrix()));
  json out = {{"spectrum", spectrum},
              {"peripheral", peripheral},
              {"kappa", r.kappa},
              {"verdict", to_string(r.verdict)},
              {"fixed_points", fixed_points},
              {"purity", r.fixed_point_purity ? json(*r.fixed_point_purity) : json(nullptr)},
              {"eigenvalue_one_multiplicity", r.eigenvalue_one_multiplicity},
              {"near_tolerance_boundary", r.near_tolerance_boundary},
              {"eigensolver_residual", r.eigensolver_residual}};
  if (!r.fixed_point) {
    json candidates = json::array();
    for (const ComplexMatrix& m : r.fixed_point_candidates) candidates.push_back(to_json(m));
    out["fixed_point_candidates"] = candidates;
  }
  return out;
}

json to_json(const ConservedValidationReport& r) {
  return {{"passed", r.passed()},
          {"failed", r.failed},
          {"unitarity_defect", r.unitarity_defect},
          {"bath_norm_defect", r.bath_norm_defect},
          {"commutator_norm", r.commutator_norm},
          {"bath_eigen_residual", r.bath_eigen_residual},
          {"bath_expectation", r.bath_expectation},
          {"extremal_eigenvalue", r.extremal_eigenvalue},
          {"extremal_gap", real_to_json(r.extremal_gap)}};
}

json to_json(const FactorizingEigenstateReport& r) {
  json states = json::array();
  for (const ComplexVector& v : r.states) states.push_back(vector_to_json(v));
  json eigenvalues = json::array();
  for (Complex z : r.unitary_eigenvalues) eigenvalues.push_back(to_json(z));
  json degenerate = json::array();
  for (Complex z : r.degenerate_clusters) degenerate.push_back(to_json(z));
  return {{"count", r.count},
          {"states", states},
          {"unitary_eigenvalues", eigenvalues},
          {"degenerate_clusters", degenerate},
          {"verdict", to_string(r.verdict)}};
}

json to_json(const ConsistencyReport& r) {
  return {{"factorizing_verdict", to_string(r.factorizing_verdict)},
          {"spectral_verdict", to_string(r.spectral_verdict)},
          {"verdicts_agree", r.verdicts_agree},
          {"fixed_point_distance",
           r.fixed_point_distance ? json(*r.fixed_point_distance) : json(nullptr)},
          {"max_factorizing_fixed_residual", r.max_factorizing_fixed_residual},
          {"consistent", r.consistent}};
}

json to_json(const OracleResult& r) {
  return {{"verdict", to_string(r.verdict)},
          {"max_pairwise_distance", r.max_pairwise_distance},
          {"max_trailing_distance", r.max_trailing_distance},
          {"probe_count", r.probe_count}};
}

json orbit_step_to_json(const OrbitTrace& trace, int step) {
  json line = {{"n", step}};
  for (const auto& [name, values] : trace.functional_values) line[name] = real_to_json(values[step]);
  if (!trace.distance_to_fixed_point.empty()) {
    line["distance_to_fixed_point"] = trace.distance_to_fixed_point[step];
  }
  return line;
}

}  // namespace channellab::io
