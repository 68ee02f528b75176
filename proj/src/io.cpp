#include "auerbach/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace auerbach {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<double> row_major(const Matrix& m) {
  std::vector<double> data;
  data.reserve(m.size());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return data;
}

Matrix from_row_major(int rows, int cols, const std::vector<double>& data) {
  if (static_cast<int>(data.size()) != rows * cols) {
    throw std::invalid_argument("matrix data length does not match its shape");
  }
  Matrix m(rows, cols);
  int k = 0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = data[k++];
  }
  return m;
}

std::vector<int> parse_exponent_key(const std::string& key, int dim) {
  std::vector<int> exps;
  std::stringstream stream(key);
  std::string part;
  while (std::getline(stream, part, ',')) {
    try {
      exps.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad monomial key '" + key + "'");
    }
  }
  if (static_cast<int>(exps.size()) != dim) {
    throw std::invalid_argument("monomial key '" + key + "' has wrong length");
  }
  return exps;
}

std::string exponent_key(const std::vector<int>& exps) {
  std::string key;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (i > 0) key += ',';
    key += std::to_string(exps[i]);
  }
  return key;
}

Json eigenvalues_to_json(const Vector& eigs) {
  Json arr = Json::array();
  for (int i = 0; i < eigs.size(); ++i) arr.push_back(eigs[i]);
  return arr;
}

Json starts_to_json(const std::vector<StartOutcome>& starts) {
  Json arr = Json::array();
  for (const StartOutcome& s : starts) {
    Json j{{"index", s.index},
           {"converged", s.converged},
           {"iterations", s.iterations},
           {"class_id", s.class_id}};
    if (!s.failure.empty()) j["failure"] = s.failure;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", row_major(m)}};
}

Matrix matrix_from_json(const Json& j) {
  return from_row_major(j.at("rows").get<int>(), j.at("cols").get<int>(),
                        j.at("data").get<std::vector<double>>());
}

Json frame_to_json(const Frame& frame) {
  return Json{{"dim", frame.dim()}, {"data", row_major(frame.cols())}};
}

Frame frame_from_json(const Json& j) {
  const int dim = j.at("dim").get<int>();
  return Frame(from_row_major(dim, dim, j.at("data").get<std::vector<double>>()));
}

Json gs_to_json(const GSCoordinates& coords) {
  return Json{{"dim", coords.dim},
              {"rotation", row_major(coords.rotation)},
              {"a", std::vector<double>(coords.a.data(),
                                        coords.a.data() + coords.a.size())}};
}

GSCoordinates gs_from_json(const Json& j) {
  GSCoordinates coords;
  coords.dim = j.at("dim").get<int>();
  coords.rotation = from_row_major(coords.dim, coords.dim,
                                   j.at("rotation").get<std::vector<double>>());
  const auto a = j.at("a").get<std::vector<double>>();
  coords.a = Eigen::Map<const Vector>(a.data(), static_cast<int>(a.size()));
  return coords;
}

Body body_from_json(const Json& j) {
  const int dim = j.at("dim").get<int>();
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "pnorm") {
    return Body::p_norm(dim, j.at("p").get<double>());
  }
  if (variant == "poly_level") {
    const int m = j.at("m").get<int>();
    std::map<std::vector<int>, double> coeffs;
    for (const auto& [key, value] : j.at("coeffs").items()) {
      coeffs[parse_exponent_key(key, dim)] = value.get<double>();
    }
    return Body::poly_level(dim, m, coeffs);
  }
  if (variant == "ellipsoid") {
    const auto rows = j.at("Q").get<std::vector<std::vector<double>>>();
    Matrix q(dim, dim);
    if (static_cast<int>(rows.size()) != dim) {
      throw std::invalid_argument("ellipsoid matrix has wrong row count");
    }
    for (int i = 0; i < dim; ++i) {
      if (static_cast<int>(rows[i].size()) != dim) {
        throw std::invalid_argument("ellipsoid matrix has wrong column count");
      }
      for (int k = 0; k < dim; ++k) q(i, k) = rows[i][k];
    }
    return Body::ellipsoid(q);
  }
  throw std::invalid_argument("unknown body variant '" + variant +
                              "' (expected pnorm, poly_level, or ellipsoid)");
}

Json body_to_json(const Body& body) {
  switch (body.variant()) {
    case BodyVariant::PNorm:
      return Json{{"dim", body.dim()},
                  {"variant", "pnorm"},
                  {"p", body.pnorm_exponent()}};
    case BodyVariant::PolyLevel: {
      Json coeffs = Json::object();
      for (const Monomial& mono : body.monomials()) {
        coeffs[exponent_key(mono.exponents)] = mono.coeff;
      }
      return Json{{"dim", body.dim()},
                  {"variant", "poly_level"},
                  {"m", body.poly_degree_half()},
                  {"coeffs", std::move(coeffs)}};
    }
    case BodyVariant::Ellipsoid: {
      Json rows = Json::array();
      for (int i = 0; i < body.dim(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < body.dim(); ++k) row.push_back(body.ellipsoid_q()(i, k));
        rows.push_back(std::move(row));
      }
      return Json{{"dim", body.dim()}, {"variant", "ellipsoid"}, {"Q", rows}};
    }
    case BodyVariant::Radial:
      throw std::invalid_argument(
          "radial-function bodies are constructed programmatically and do "
          "not serialize");
  }
  throw std::logic_error("unreachable body variant");
}

BodyFile parse_body_file(const Json& j) {
  BodyFile file{body_from_json(j), std::nullopt};
  if (j.contains("frame")) {
    file.frame = frame_from_json(j.at("frame"));
    if (file.frame->dim() != file.body.dim()) {
      throw std::invalid_argument("frame dimension does not match the body");
    }
  }
  return file;
}

BodyFile load_body_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open body file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("body file '" + path + "' is not valid JSON: " +
                                e.what());
  }
  try {
    return parse_body_file(j);
  } catch (const Json::exception& e) {
    throw std::invalid_argument("body file '" + path + "': " + e.what());
  }
}

Json search_config_to_json(const SearchConfig& config) {
  return Json{{"starts", config.starts},   {"seed", config.seed},
              {"crit_tol", config.crit_tol}, {"dedup_tol", config.dedup_tol},
              {"max_iters", config.max_iters}, {"det_floor", config.det_floor}};
}

Json auerbach_report_to_json(const AuerbachReport& report) {
  return Json{
      {"residual", report.residual},
      {"passed", report.passed},
      {"dual_norms", std::vector<double>(report.dual_norms.data(),
                                         report.dual_norms.data() +
                                             report.dual_norms.size())},
      {"biorthogonality_defect", report.biorthogonality_defect},
      {"gauge_defect", report.gauge_defect}};
}

Json morse_check_to_json(const MorseCheckReport& report) {
  Json constraints = Json::array();
  for (const auto& c : report.constraints) {
    constraints.push_back(Json{{"name", c.name},
                               {"required", c.required},
                               {"observed", c.observed},
                               {"passed", c.passed}});
  }
  Json histogram = Json::object();
  for (const auto& [index, count] : report.index_histogram) {
    histogram[std::to_string(index)] = count;
  }
  Json j{{"conclusive", report.conclusive},
         {"passed", report.passed},
         {"constraints", std::move(constraints)},
         {"index_histogram", std::move(histogram)}};
  if (!report.note.empty()) j["note"] = report.note;
  return j;
}

std::string morse_soft_explanation(const BasisSearchReport& report,
                                   long long required, long long observed) {
  if (observed >= required) return "";
  int degenerate = 0;
  for (const auto& cls : report.classes) {
    if (cls.degenerate) ++degenerate;
  }
  std::ostringstream out;
  out << "found " << observed << " nondegenerate classes, target " << required;
  if (degenerate > 0) out << "; " << degenerate << " class(es) degenerate";
  if (report.diverged > 0) out << "; " << report.diverged << " start(s) diverged";
  if (degenerate == 0 && report.diverged == 0) {
    out << "; no degeneracy or divergence observed, more starts may be needed";
  }
  return out.str();
}

Json basis_report_to_json(const Body& body, const BasisSearchReport& report,
                          const MorseCheckReport& morse) {
  const int n = body.dim();
  Json classes = Json::array();
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    const BasisClass& cls = report.classes[i];
    classes.push_back(Json{{"id", i},
                           {"f_value", cls.f_value},
                           {"grad_norm", cls.grad_norm},
                           {"index", cls.index},
                           {"nullity", cls.nullity},
                           {"degenerate", cls.degenerate},
                           {"members_found", cls.members_found},
                           {"first_start", cls.first_start},
                           {"hessian_eigenvalues", eigenvalues_to_json(cls.hessian_eigs)},
                           {"auerbach", auerbach_report_to_json(cls.verification)},
                           {"frame", frame_to_json(cls.canonical)}});
  }
  long long nondegenerate = 0;
  for (const auto& cls : report.classes) {
    if (!cls.degenerate) ++nondegenerate;
  }
  const long long soft_required = morse_lower_bound_real(n);
  Json j{{"tool", Json{{"name", kToolName}, {"version", kToolVersion}}},
         {"command", "bases"},
         {"config", search_config_to_json(report.config)},
         {"body", body_to_json(body)},
         {"n", n},
         {"bounds",
          Json{{"ls_lower_bound", ls_lower_bound(n)},
               {"morse_lower_bound_real", soft_required}}},
         {"classes", std::move(classes)},
         {"starts", starts_to_json(report.starts)},
         {"diverged", report.diverged},
         {"found_at_least", report.classes.size()},
         {"meets_ls_lower_bound",
          static_cast<long long>(report.classes.size()) >= ls_lower_bound(n)},
         {"morse_check", morse_check_to_json(morse)},
         {"morse_soft_target",
          Json{{"required", soft_required},
               {"observed", nondegenerate},
               {"met", nondegenerate >= soft_required},
               {"explanation",
                morse_soft_explanation(report, soft_required, nondegenerate)}}}};
  return j;
}

std::string basis_classes_csv(const BasisSearchReport& report) {
  std::ostringstream out;
  out << "class_id,f_value,index,nullity,residual,grad_norm,degenerate,"
         "verified,members_found";
  if (!report.classes.empty()) {
    const int n = report.classes.front().canonical.dim();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out << ",frame_" << i << j;
    }
  }
  out << "\n";
  for (std::size_t id = 0; id < report.classes.size(); ++id) {
    const BasisClass& cls = report.classes[id];
    out << id << ',' << fmt_double(cls.f_value) << ',' << cls.index << ','
        << cls.nullity << ',' << fmt_double(cls.verification.residual) << ','
        << fmt_double(cls.grad_norm) << ',' << (cls.degenerate ? 1 : 0) << ','
        << (cls.verification.passed ? 1 : 0) << ',' << cls.members_found;
    const Matrix& m = cls.canonical.cols();
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) out << ',' << fmt_double(m(i, j));
    }
    out << "\n";
  }
  return out.str();
}

std::string basis_report_text(const Body& body, const BasisSearchReport& report,
                              const MorseCheckReport& morse) {
  std::ostringstream out;
  const int n = body.dim();
  out << "basis search on " << body.describe() << "\n";
  out << "starts " << report.config.starts << ", seed " << report.config.seed
      << ", crit_tol " << report.config.crit_tol << ", dedup_tol "
      << report.config.dedup_tol << ", max_iters " << report.config.max_iters
      << ", det_floor " << report.config.det_floor << "\n";
  out << "classes found (at least): " << report.classes.size()
      << ", diverged starts: " << report.diverged << "\n";
  out << "ls lower bound " << ls_lower_bound(n) << " ("
      << (static_cast<long long>(report.classes.size()) >= ls_lower_bound(n)
              ? "met"
              : "NOT met")
      << ")\n\n";
  out << std::left << std::setw(4) << "id" << std::setw(14) << "f" << std::setw(6)
      << "idx" << std::setw(6) << "null" << std::setw(7) << "degen"
      << std::setw(12) << "residual" << std::setw(9) << "members" << "verified\n";
  for (std::size_t id = 0; id < report.classes.size(); ++id) {
    const BasisClass& cls = report.classes[id];
    out << std::left << std::setw(4) << id << std::setw(14) << std::setprecision(6)
        << cls.f_value << std::setw(6) << cls.index << std::setw(6) << cls.nullity
        << std::setw(7) << (cls.degenerate ? "yes" : "no") << std::setw(12)
        << std::scientific << std::setprecision(2) << cls.verification.residual
        << std::defaultfloat << std::setw(9) << cls.members_found
        << (cls.verification.passed ? "yes" : "NO") << "\n";
  }
  out << "\nmorse check: " << (morse.conclusive ? "conclusive" : "inconclusive");
  if (!morse.note.empty()) out << " (" << morse.note << ")";
  out << "\n";
  for (const auto& c : morse.constraints) {
    out << "  " << c.name << ": observed " << c.observed << ", required "
        << c.required << " -> " << (c.passed ? "pass" : "fail") << "\n";
  }
  return out.str();
}

Json simplex_report_to_json(const Body& body, const SimplexSearchReport& report) {
  Json classes = Json::array();
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    const SimplexClass& cls = report.classes[i];
    Json per_vertex = Json::array();
    for (const auto& v : cls.verification.vertices) {
      per_vertex.push_back(Json{{"slack", v.slack}, {"passed", v.passed}});
    }
    classes.push_back(
        Json{{"id", i},
             {"volume", cls.candidate.volume},
             {"grad_norm", cls.candidate.grad_norm},
             {"morse_computed", cls.candidate.morse_computed},
             {"index", cls.candidate.index},
             {"nullity", cls.candidate.nullity},
             {"degenerate", cls.candidate.degenerate},
             {"hessian_eigenvalues", eigenvalues_to_json(cls.candidate.hessian_eigs)},
             {"members_found", cls.members_found},
             {"first_start", cls.first_start},
             {"verification", Json{{"max_slack", cls.verification.max_slack},
                                   {"passed", cls.verification.passed},
                                   {"per_vertex", std::move(per_vertex)}}},
             {"directions", matrix_to_json(cls.candidate.directions)},
             {"vertices", matrix_to_json(cls.candidate.vertices)}});
  }
  return Json{{"tool", Json{{"name", kToolName}, {"version", kToolVersion}}},
              {"command", "simplices"},
              {"config", search_config_to_json(report.config)},
              {"body", body_to_json(body)},
              {"n", body.dim()},
              {"classes", std::move(classes)},
              {"starts", starts_to_json(report.starts)},
              {"diverged", report.diverged},
              {"found_at_least", report.classes.size()},
              {"stabilized", report.stabilized},
              {"bounds", Json{{"ls", report.bounds.ls},
                              {"morse", report.bounds.morse},
                              {"small_n_caveat", report.bounds.small_n_caveat}}},
              {"meets_ls_bound", report.meets_ls_bound}};
}

std::string simplex_classes_csv(const SimplexSearchReport& report) {
  std::ostringstream out;
  out << "class_id,volume,grad_norm,index,nullity,degenerate,max_slack,"
         "verified,members_found";
  if (!report.classes.empty()) {
    const Matrix& v = report.classes.front().candidate.vertices;
    for (int i = 0; i < v.rows(); ++i) {
      for (int j = 0; j < v.cols(); ++j) out << ",vertex_" << j << "_x" << i;
    }
  }
  out << "\n";
  for (std::size_t id = 0; id < report.classes.size(); ++id) {
    const SimplexClass& cls = report.classes[id];
    out << id << ',' << fmt_double(cls.candidate.volume) << ','
        << fmt_double(cls.candidate.grad_norm) << ',' << cls.candidate.index << ','
        << cls.candidate.nullity << ',' << (cls.candidate.degenerate ? 1 : 0)
        << ',' << fmt_double(cls.verification.max_slack) << ','
        << (cls.verification.passed ? 1 : 0) << ',' << cls.members_found;
    const Matrix& m = cls.candidate.vertices;
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) out << ',' << fmt_double(m(i, j));
    }
    out << "\n";
  }
  return out.str();
}

std::string simplex_report_text(const Body& body,
                                const SimplexSearchReport& report) {
  std::ostringstream out;
  out << "simplex search on " << body.describe() << "\n";
  out << "starts " << report.config.starts << ", seed " << report.config.seed
      << ", crit_tol " << report.config.crit_tol << ", dedup_tol "
      << report.config.dedup_tol << ", max_iters " << report.config.max_iters
      << ", det_floor " << report.config.det_floor << "\n";
  out << "classes found (at least): " << report.classes.size()
      << ", diverged starts: " << report.diverged << "\n";
  out << "stabilized: " << (report.stabilized ? "yes" : "no")
      << "; ls bound " << report.bounds.ls << " ("
      << (report.meets_ls_bound ? "met" : "NOT met") << ", informational)\n\n";
  out << std::left << std::setw(4) << "id" << std::setw(14) << "volume"
      << std::setw(6) << "idx" << std::setw(6) << "null" << std::setw(7)
      << "degen" << std::setw(12) << "max_slack" << std::setw(9) << "members"
      << "verified\n";
  for (std::size_t id = 0; id < report.classes.size(); ++id) {
    const SimplexClass& cls = report.classes[id];
    out << std::left << std::setw(4) << id << std::setw(14)
        << std::setprecision(6) << cls.candidate.volume << std::setw(6)
        << cls.candidate.index << std::setw(6) << cls.candidate.nullity
        << std::setw(7) << (cls.candidate.degenerate ? "yes" : "no")
        << std::setw(12) << std::scientific << std::setprecision(2)
        << cls.verification.max_slack << std::defaultfloat << std::setw(9)
        << cls.members_found << (cls.verification.passed ? "yes" : "NO")
        << "\n";
  }
  return out.str();
}

Json bounds_to_json(const std::vector<BoundsReport>& rows) {
  Json arr = Json::array();
  for (const BoundsReport& r : rows) {
    arr.push_back(Json{{"n", r.n},
                       {"ls_bound_bases", r.ls_bound_bases},
                       {"morse_bound_real", r.morse_bound_real},
                       {"morse_bound_complex", r.morse_bound_complex},
                       {"flag_z2_dim", r.flag_z2_dim},
                       {"so_rational_dim", r.so_rational_dim},
                       {"theta", r.theta},
                       {"simplex_ls_bound", r.simplex_ls_bound},
                       {"simplex_morse_bound", r.simplex_morse_bound},
                       {"small_n_caveat", r.small_n_caveat}});
  }
  return Json{{"tool", Json{{"name", kToolName}, {"version", kToolVersion}}},
              {"command", "bounds"},
              {"rows", std::move(arr)},
              {"notes", bounds_notes()}};
}

std::string bounds_to_csv(const std::vector<BoundsReport>& rows) {
  std::ostringstream out;
  out << "n,ls_bound_bases,morse_bound_real,morse_bound_complex,flag_z2_dim,"
         "so_rational_dim,theta,simplex_ls_bound,simplex_morse_bound,"
         "small_n_caveat\n";
  for (const BoundsReport& r : rows) {
    out << r.n << ',' << r.ls_bound_bases << ',' << r.morse_bound_real << ','
        << r.morse_bound_complex << ',' << r.flag_z2_dim << ','
        << r.so_rational_dim << ',' << r.theta << ',' << r.simplex_ls_bound
        << ',' << r.simplex_morse_bound << ',' << (r.small_n_caveat ? 1 : 0)
        << "\n";
  }
  return out.str();
}

std::string bounds_to_text(const std::vector<BoundsReport>& rows) {
  std::ostringstream out;
  out << std::right << std::setw(3) << "n" << std::setw(10) << "ls_bases"
      << std::setw(12) << "morse_real" << std::setw(15) << "morse_complex"
      << std::setw(12) << "flag_z2" << std::setw(9) << "so_dim" << std::setw(8)
      << "theta" << std::setw(12) << "simplex_ls" << std::setw(15)
      << "simplex_morse" << "\n";
  for (const BoundsReport& r : rows) {
    out << std::right << std::setw(3) << r.n << std::setw(10) << r.ls_bound_bases
        << std::setw(12) << r.morse_bound_real << std::setw(15)
        << r.morse_bound_complex << std::setw(12) << r.flag_z2_dim
        << std::setw(9) << r.so_rational_dim << std::setw(8) << r.theta
        << std::setw(12) << r.simplex_ls_bound << std::setw(15)
        << r.simplex_morse_bound << (r.small_n_caveat ? "  *" : "") << "\n";
  }
  out << "\n";
  for (const std::string& note : bounds_notes()) out << "note: " << note << "\n";
  return out.str();
}

}  // namespace auerbach
