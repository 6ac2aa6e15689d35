#include "slinv/problem_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace slinv {

namespace {
using nlohmann::json;

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

void require_object(const json& j, const std::string& field) {
  if (!j.is_object()) throw InputError(field + ": expected an object");
}

void reject_unknown(const json& j, const std::string& field,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) {
      const std::string path = field.empty() ? key : field + "." + key;
      throw InputError(path + ": unknown key");
    }
  }
}

const json& member(const json& j, const std::string& field, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(field + "." + key + ": missing");
  return *it;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw InputError(field + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(field + ": must be finite");
  return v;
}

long long integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw InputError(field + ": expected an integer");
  return j.get<long long>();
}

std::string format_double(double v, int digits) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view cell, const std::string& where) {
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto r = std::from_chars(cell.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v))
    throw InputError(where + ": not a finite number: '" + std::string(cell) + "'");
  return v;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}
}  // namespace

ProblemFile parse_problem(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError("problem file: syntax error at " + location(text, e.byte) + ": " + e.what());
  }
  require_object(root, "<root>");
  reject_unknown(root, "", {"format_version", "potential", "boundary", "solver"});

  const auto version = integer(member(root, "<root>", "format_version"), "format_version");
  if (version != kProblemFormatVersion)
    throw InputError("format_version: unsupported version " + std::to_string(version));

  ProblemFile out;

  const json& pot = member(root, "<root>", "potential");
  require_object(pot, "potential");
  reject_unknown(pot, "potential", {"coefficients"});
  const json& coeffs = member(pot, "potential", "coefficients");
  if (!coeffs.is_array() || coeffs.empty())
    throw InputError("potential.coefficients: expected a non-empty array");
  Eigen::VectorXd c(static_cast<Eigen::Index>(coeffs.size()));
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    c[static_cast<Eigen::Index>(i)] =
        number(coeffs[i], "potential.coefficients[" + std::to_string(i) + "]");
  out.potential = Potential(c);

  const json& bnd = member(root, "<root>", "boundary");
  require_object(bnd, "boundary");
  reject_unknown(bnd, "boundary", {"a11", "a12", "a21", "a22"});
  out.boundary = BoundaryMatrix(number(member(bnd, "boundary", "a11"), "boundary.a11"),
                                number(member(bnd, "boundary", "a12"), "boundary.a12"),
                                number(member(bnd, "boundary", "a21"), "boundary.a21"),
                                number(member(bnd, "boundary", "a22"), "boundary.a22"));

  if (const auto it = root.find("solver"); it != root.end()) {
    const json& solver = *it;
    require_object(solver, "solver");
    reject_unknown(solver, "solver", {"steps", "scan_points_per_pi", "root_tolerance"});
    if (const auto s = solver.find("steps"); s != solver.end()) {
      const auto steps = integer(*s, "solver.steps");
      if (steps < kMinSteps || steps > 1'000'000)
        throw InputError("solver.steps: must lie in [" + std::to_string(kMinSteps) + ", 1000000]");
      out.solver.steps = static_cast<int>(steps);
    }
    if (const auto s = solver.find("scan_points_per_pi"); s != solver.end()) {
      const auto spp = integer(*s, "solver.scan_points_per_pi");
      if (spp < 8 || spp > 100'000)
        throw InputError("solver.scan_points_per_pi: must lie in [8, 100000]");
      out.solver.scan_points_per_pi = static_cast<int>(spp);
    }
    if (const auto s = solver.find("root_tolerance"); s != solver.end()) {
      const double tol = number(*s, "solver.root_tolerance");
      if (!(tol > 0.0)) throw InputError("solver.root_tolerance: must be positive");
      out.solver.root_tolerance = tol;
    }
  }
  return out;
}

ProblemFile read_problem(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  try {
    return parse_problem(text);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string format_problem(const ProblemFile& problem) {
  json coeffs = json::array();
  for (double c : problem.potential.coefficients()) coeffs.push_back(c);
  const auto& b = problem.boundary;
  // ordered_json keeps the keys in reading order.
  nlohmann::ordered_json root;
  root["format_version"] = kProblemFormatVersion;
  root["potential"]["coefficients"] = coeffs;
  root["boundary"]["a11"] = b.a11;
  root["boundary"]["a12"] = b.a12;
  root["boundary"]["a21"] = b.a21;
  root["boundary"]["a22"] = b.a22;
  root["solver"]["steps"] = problem.solver.steps;
  root["solver"]["scan_points_per_pi"] = problem.solver.scan_points_per_pi;
  root["solver"]["root_tolerance"] = problem.solver.root_tolerance;
  return root.dump(2) + "\n";
}

void write_spectrum_csv(std::ostream& out, const Spectrum& sp) {
  out << "index,lambda,sqrt_lambda\n";
  for (std::size_t k = 0; k < sp.count(); ++k) {
    const double lambda = sp.eigenvalues[k];
    out << k << ',' << format_double(lambda, 17) << ',';
    if (lambda >= 0.0) out << format_double(std::sqrt(lambda), 17);
    out << '\n';
  }
  out << "# kind: " << to_string(sp.kind) << '\n';
  out << "# audit: " << describe_audit(sp) << '\n';
}

std::string format_spectrum_csv(const Spectrum& sp) {
  std::ostringstream os;
  write_spectrum_csv(os, sp);
  return os.str();
}

Spectrum parse_spectrum_csv(std::string_view text, ProblemKind fallback) {
  Spectrum out;
  out.kind = fallback;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    const std::string where = "line " + std::to_string(line_no);
    if (line.empty()) continue;

    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      if (body.starts_with("kind:")) {
        const auto kind = parse_problem_kind(trim(body.substr(5)));
        if (!kind) throw InputError(where + ": unknown kind '" + std::string(body.substr(5)) + "'");
        out.kind = *kind;
      } else if (body.starts_with("audit:")) {
        out.audit = trim(body.substr(6)) == "Complete" ? AuditStatus::Complete
                                                       : AuditStatus::SuspectMissing;
      }
      continue;
    }

    if (!header_seen) {
      if (line != "index,lambda,sqrt_lambda")
        throw InputError(where + ": expected header 'index,lambda,sqrt_lambda'");
      header_seen = true;
      continue;
    }

    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos)
      throw InputError(where + ": expected three comma-separated fields");
    const auto index_cell = trim(line.substr(0, c1));
    std::size_t index = 0;
    const auto r = std::from_chars(index_cell.data(), index_cell.data() + index_cell.size(), index);
    if (r.ec != std::errc() || r.ptr != index_cell.data() + index_cell.size())
      throw InputError(where + ": index: not a non-negative integer");
    if (index != out.count())
      throw InputError(where + ": index: expected " + std::to_string(out.count()));
    out.eigenvalues.push_back(parse_double(trim(line.substr(c1 + 1, c2 - c1 - 1)), where + ": lambda"));
  }
  if (!header_seen) throw InputError("spectrum file: missing header");
  return out;
}

Spectrum read_spectrum_csv(const std::filesystem::path& path, ProblemKind fallback) {
  const std::string text = slurp(path);
  try {
    return parse_spectrum_csv(text, fallback);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace slinv
