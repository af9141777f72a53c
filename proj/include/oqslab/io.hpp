#ifndef OQSLAB_IO_HPP
#define OQSLAB_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "oqslab/experiments.hpp"

namespace oqslab {

using json = nlohmann::json;

// --------------------------------------------------------------------------
// Emission. nlohmann objects already iterate in sorted key order; this
// writer only pins the real-number format to 17 significant digits so a
// given invocation always produces byte-identical output.

inline void dump_json_to(std::ostream& os, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        os << json(it.key()).dump() << ':';
        dump_json_to(os, it.value());
      }
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      bool first = true;
      for (const auto& el : j) {
        if (!first) os << ',';
        first = false;
        dump_json_to(os, el);
      }
      os << ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
      } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << buf;
      }
      break;
    }
    default:
      os << j.dump();
  }
}

inline std::string dump_json(const json& j) {
  std::ostringstream os;
  dump_json_to(os, j);
  return os.str();
}

// --------------------------------------------------------------------------
// Matrix files: {"dims":[rows,cols],"re":[...],"im":[...]}, row-major.

inline json matrix_to_json(const Mat& m) {
  json j;
  j["dims"] = {m.rows(), m.cols()};
  std::vector<double> re, im;
  re.reserve(m.size());
  im.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  j["re"] = re;
  j["im"] = im;
  return j;
}

inline Mat matrix_from_json(const json& j) {
  if (!j.contains("dims") || !j.contains("re") || !j.contains("im"))
    throw ParseError("matrix file needs dims, re, im");
  const auto dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2)
    throw ParseError("dims must be [rows, cols]");
  const Eigen::Index rows = dims[0].get<Eigen::Index>();
  const Eigen::Index cols = dims[1].get<Eigen::Index>();
  if (rows <= 0 || cols <= 0) throw ParseError("dims must be positive");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<Eigen::Index>(re.size()) != rows * cols ||
      static_cast<Eigen::Index>(im.size()) != rows * cols)
    throw ParseError("re/im length does not match dims");
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r * cols + c);
      m(r, c) = cdouble(re[idx].get<double>(), im[idx].get<double>());
    }
  return m;
}

inline json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return j;
}

inline void write_matrix_file(const std::string& path, const Mat& m,
                              const std::string& kind = "") {
  json j = matrix_to_json(m);
  if (!kind.empty()) j["kind"] = kind;
  std::ofstream out(path);
  dump_json_to(out, j);
  out << '\n';
}

inline DensityMatrix load_density(const std::string& path) {
  const json j = parse_file(path);
  if (j.value("kind", "") != "density")
    throw ParseError("expected kind \"density\"");
  const Mat m = matrix_from_json(j);
  const auto bad = density_violations(m);
  if (!bad.empty()) {
    std::string msg = "density invariants violated:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw ParseError(msg);
  }
  return DensityMatrix(m);
}

inline void write_bipartite_file(const std::string& path,
                                 const BipartiteState& s) {
  json j = matrix_to_json(s.mat());
  j["kind"] = "bipartite";
  j["dimS"] = s.dim_s();
  j["dimB"] = s.dim_b();
  std::ofstream out(path);
  dump_json_to(out, j);
  out << '\n';
}

inline BipartiteState load_bipartite(const std::string& path) {
  const json j = parse_file(path);
  if (j.value("kind", "") != "bipartite")
    throw ParseError("expected kind \"bipartite\"");
  if (!j.contains("dimS") || !j.contains("dimB"))
    throw ParseError("bipartite file needs dimS and dimB");
  const int ds = j.at("dimS").get<int>();
  const int db = j.at("dimB").get<int>();
  const Mat m = matrix_from_json(j);
  if (m.rows() != static_cast<Eigen::Index>(ds) * db)
    throw ParseError("matrix size does not equal dimS*dimB");
  try {
    return BipartiteState(ds, db, m);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

// Superoperator / Choi files carry the vec convention explicitly; entries
// are row-major like plain matrix files.
inline void write_superop_file(const std::string& path,
                               const Superoperator& l,
                               const std::string& kind = "superop") {
  json j = matrix_to_json(l.mat);
  j.erase("dims");
  j["kind"] = kind;
  j["dim"] = l.dim;
  j["convention"] = "column-stacking";
  std::ofstream out(path);
  dump_json_to(out, j);
  out << '\n';
}

inline Superoperator load_superop(const std::string& path,
                                  const std::string& kind = "superop") {
  const json j = parse_file(path);
  if (j.value("kind", "") != kind)
    throw ParseError("expected kind \"" + kind + "\"");
  if (j.value("convention", "") != "column-stacking")
    throw ParseError("unsupported vec convention");
  if (!j.contains("dim")) throw ParseError("missing dim");
  const int d = j.at("dim").get<int>();
  if (d < 1) throw ParseError("dim must be positive");
  json with_dims = j;
  with_dims["dims"] = {d * d, d * d};
  Superoperator l;
  l.dim = d;
  l.mat = matrix_from_json(with_dims);
  return l;
}

// --------------------------------------------------------------------------
// Verdict / report serialization; field names match the wire contract.

inline json cp_verdict_to_json(const CPVerdict& v) {
  json j;
  j["isCP"] = v.is_cp;
  j["minChoiEigenvalue"] = v.min_choi_eigenvalue;
  j["isTP"] = v.is_tp;
  j["tpResidual"] = v.tp_residual;
  j["isHermPreserving"] = v.is_herm_preserving;
  return j;
}

inline json discord_verdict_to_json(const DiscordVerdict& v) {
  json j;
  j["isZero"] = v.is_zero;
  j["residual"] = v.residual;
  j["witnessBasis"] = matrix_to_json(v.witness_basis);
  j["usedFallback"] = v.used_fallback;
  return j;
}

inline json audit_report_to_json(const AuditReport& r) {
  json j;
  j["injective"] = r.injective;
  j["collidingPairs"] = json::array();
  for (const auto& [a, b] : r.colliding_pairs)
    j["collidingPairs"].push_back({a, b});
  j["spanDim"] = r.span_dim;
  j["affineDim"] = r.affine_dim;
  j["fullSpan"] = r.full_span;
  return j;
}

inline json report_to_json(const ExperimentReport& rep) {
  json j;
  j["experiment"] = rep.experiment;
  json params;
  params["dimS"] = rep.params.dim_s;
  params["dimB"] = rep.params.dim_b;
  params["trials"] = rep.params.trials;
  params["seed"] = rep.params.seed;
  params["eps"] = rep.params.eps;
  params["budget"] = rep.params.budget;
  params["cpTol"] = rep.params.cp_tol;
  params["discordTol"] = rep.params.discord_tol;
  params["gapTol"] = rep.params.gap_tol;
  j["params"] = params;
  j["verdict"] = rep.verdict ? "pass" : "fail";
  j["metrics"] = json::object();
  for (const auto& [k, v] : rep.metrics) j["metrics"][k] = v;
  j["stages"] = json::array();
  for (const auto& st : rep.stages) {
    json s;
    s["name"] = st.name;
    s["pass"] = st.pass;
    s["residual"] = st.residual;
    j["stages"].push_back(s);
  }
  j["trials"] = json::array();
  for (const auto& tr : rep.trials) {
    json t;
    t["index"] = tr.index;
    t["pass"] = tr.pass;
    for (const auto& [k, v] : tr.values) t[k] = v;
    j["trials"].push_back(t);
  }
  return j;
}

}  // namespace oqslab

#endif  // OQSLAB_IO_HPP
