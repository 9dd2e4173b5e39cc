#include "dncone/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dncone/errors.hpp"
#include "json.hpp"

namespace dncone {

using json = nlohmann::ordered_json;

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class... Ts>
std::string csv_row(const Ts&... fields) {
  std::string line;
  bool first = true;
  auto add = [&](const std::string& f) {
    if (!first) line += ',';
    line += f;
    first = false;
  };
  (add(fields), ...);
  return line + "\n";
}

std::string b(bool v) { return v ? "true" : "false"; }

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json matrix_json(const SymMatrix& a) {
  json rows = json::array();
  for (int i = 0; i < a.order(); ++i) {
    json row = json::array();
    for (int j = 0; j < a.order(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"n", a.order()}, {"rows", std::move(rows)}};
}

json to_json(const DnVerdict& v) {
  return json{{"is_dn", v.is_dn},
              {"min_eigenvalue", v.min_eigenvalue},
              {"min_entry", v.min_entry},
              {"psd_tol", v.psd_tol},
              {"entry_tol", v.entry_tol}};
}

json to_json(const SignScanResult& s) {
  json j{{"all_nonneg", s.all_nonneg}, {"max_order_checked", s.max_order_checked}};
  if (s.first_violation)
    j["first_violation"] =
        json{{"order", s.first_violation->order}, {"x", s.first_violation->x}, {"value", s.first_violation->value}};
  else
    j["first_violation"] = nullptr;
  j["grid"] = s.grid;
  return j;
}

json to_json(const ProbeReport& r) {
  json j{{"n", r.n},
         {"func", r.func},
         {"verdict", std::string(to_string(r.verdict))},
         {"trials", r.trials},
         {"seed", r.seed},
         {"strategy", r.strategy}};
  if (r.witness)
    j["witness"] = json{{"i", r.witness->i},
                        {"j", r.witness->j},
                        {"value", r.witness->value},
                        {"matrix", matrix_json(r.witness->matrix)}};
  else
    j["witness"] = nullptr;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string serialize_matrix(const SymMatrix& a) {
  std::string out = "{\"n\":" + std::to_string(a.order()) + ",\"rows\":[";
  for (int i = 0; i < a.order(); ++i) {
    out += i ? ",[" : "[";
    for (int j = 0; j < a.order(); ++j) {
      if (j) out += ',';
      out += num(a(i, j));
    }
    out += ']';
  }
  return out + "]}\n";
}

SymMatrix parse_matrix(std::string_view text, std::vector<std::string>* warnings) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, col] = line_column(text, byte);
    throw ParseError("malformed matrix JSON", line, col);
  }
  auto schema = [](const std::string& what) { return ParseError("matrix document: " + what, 0, 0); };
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("rows")) throw schema("expected {\"n\": N, \"rows\": [...]}");
  if (!doc["n"].is_number_integer()) throw schema("\"n\" must be an integer");
  const long n = doc["n"].get<long>();
  if (n < kMinOrder || n > kMaxOrder) throw InputError("matrix order must lie in [2, 64]");
  const json& rows = doc["rows"];
  if (!rows.is_array() || static_cast<long>(rows.size()) != n) throw schema("\"rows\" must hold n rows");
  Matrix m(static_cast<int>(n));
  for (long i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<long>(row.size()) != n)
      throw schema("row " + std::to_string(i) + " must hold n numbers");
    for (long j = 0; j < n; ++j) {
      const json& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number()) throw schema("entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not a number");
      m(static_cast<int>(i), static_cast<int>(j)) = x.get<double>();
    }
  }
  const double scale = max_abs(m);
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
  if (asym > 1e-12 * scale) throw SymmetryError("matrix is not symmetric: max |a_ij - a_ji| = " + num(asym));
  if (asym > 0.0 && warnings) warnings->push_back("asymmetry " + num(asym) + " within tolerance; symmetrized");
  return SymMatrix(m);
}

SymMatrix read_matrix_file(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open matrix file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str(), warnings);
}

std::string render(const DnVerdict& v, Format f) {
  if (f == Format::json) return dump(to_json(v));
  return std::string(csv_header::dn_verdict) + "\n" +
         csv_row(b(v.is_dn), num(v.min_eigenvalue), num(v.min_entry), num(v.psd_tol), num(v.entry_tol));
}

std::string render(const SignScanResult& s, Format f) {
  if (f == Format::json) return dump(to_json(s));
  const auto& v = s.first_violation;
  return std::string(csv_header::sign_scan) + "\n" +
         csv_row(b(s.all_nonneg), std::to_string(s.max_order_checked), v ? std::to_string(v->order) : "",
                 v ? num(v->x) : "", v ? num(v->value) : "", csv_field(s.grid));
}

std::string render(const ExponentScan& s, Format f) {
  if (f == Format::json) {
    json verdicts = json::array();
    for (const AlphaVerdict& v : s.verdicts)
      verdicts.push_back(json{{"alpha", v.alpha},
                              {"preserving", v.preserving},
                              {"below_threshold", v.below_threshold},
                              {"in_exceptional_set", v.in_exceptional_set},
                              {"scan", to_json(v.scan)}});
    return dump(json{{"n", s.n},
                     {"threshold", s.threshold},
                     {"exceptional_set", s.exceptional_set},
                     {"above_threshold_all_preserve", s.above_threshold_all_preserve},
                     {"below_threshold_in_set", s.below_threshold_in_set},
                     {"consistent", s.consistent()},
                     {"verdicts", std::move(verdicts)}});
  }
  std::string out = std::string(csv_header::exponent_scan) + "\n";
  for (const AlphaVerdict& v : s.verdicts) {
    const auto& fv = v.scan.first_violation;
    out += csv_row(std::to_string(s.n), num(s.threshold), num(v.alpha), b(v.preserving), b(v.below_threshold),
                   b(v.in_exceptional_set), fv ? std::to_string(fv->order) : "", fv ? num(fv->x) : "");
  }
  return out;
}

std::string render(const DividedDiffTable& t, Format f) {
  if (f == Format::json) {
    json newton = json::array();
    for (std::size_t j = 0; j <= t.max_order(); ++j) newton.push_back(t.newton_coefficient(j));
    return dump(json{{"nodes", t.nodes}, {"table", t.table}, {"newton_coefficients", std::move(newton)}});
  }
  std::string out = std::string(csv_header::divided_differences) + "\n";
  for (std::size_t j = 0; j <= t.max_order(); ++j)
    for (std::size_t i = 0; i + j < t.nodes.size(); ++i)
      out += csv_row(std::to_string(i), std::to_string(j), num(t.nodes[i]), num(t.nodes[i + j]), num(t.at(i, j)));
  return out;
}

std::string render(const ProbeReport& r, Format f) {
  if (f == Format::json) return dump(to_json(r));
  const auto& w = r.witness;
  std::string m = w ? serialize_matrix(w->matrix) : "";
  if (!m.empty()) m.pop_back();
  return std::string(csv_header::probe_report) + "\n" +
         csv_row(std::to_string(r.n), csv_field(r.func), std::string(to_string(r.verdict)), std::to_string(r.trials),
                 std::to_string(r.seed), csv_field(r.strategy), w ? std::to_string(w->i) : "",
                 w ? std::to_string(w->j) : "", w ? num(w->value) : "", csv_field(m));
}

std::string render(const ExponentEstimate& e, Format f) {
  if (f == Format::json) {
    json probes = json::array();
    for (const AlphaProbe& p : e.probes)
      probes.push_back(json{{"alpha", p.alpha},
                            {"outcome", std::string(to_string(p.outcome))},
                            {"report", to_json(p.report)},
                            {"scan", to_json(p.scan)}});
    return dump(json{{"n", e.n},
                     {"family", e.family},
                     {"alpha_lo", e.alpha_lo},
                     {"alpha_hi", e.alpha_hi},
                     {"lo_confirmed", e.lo_confirmed},
                     {"resolution", e.resolution},
                     {"probes", std::move(probes)}});
  }
  std::string out = std::string(csv_header::exponent_estimate) + "\n";
  for (const AlphaProbe& p : e.probes)
    out += csv_row(std::to_string(e.n), csv_field(e.family), num(e.alpha_lo), num(e.alpha_hi), b(e.lo_confirmed),
                   num(e.resolution), num(p.alpha), std::string(to_string(p.outcome)),
                   std::to_string(p.report.trials), b(p.scan.all_nonneg));
  return out;
}

std::string render(const SuiteReport& r, Format f) {
  if (f == Format::json) {
    json checks = json::array();
    for (const CheckResult& c : r.checks)
      checks.push_back(json{{"n", c.n},
                            {"check", c.name},
                            {"passed", c.passed},
                            {"worst_margin", std::isfinite(c.worst_margin) ? json(c.worst_margin) : json(nullptr)},
                            {"detail", c.detail}});
    return dump(json{{"n_max", r.n_max}, {"seed", r.seed}, {"all_passed", r.all_passed()}, {"checks", std::move(checks)}});
  }
  std::string out = std::string(csv_header::suite_report) + "\n";
  for (const CheckResult& c : r.checks)
    out += csv_row(std::to_string(c.n), c.name, b(c.passed), num(c.worst_margin), csv_field(c.detail));
  return out;
}

std::string render(const MatrixResult& r, Format f) {
  if (f == Format::json)
    return dump(json{{"operation", r.operation},
                     {"func", r.func},
                     {"matrix", matrix_json(r.value)},
                     {"dn_verdict", to_json(r.verdict)}});
  std::string out = std::string(csv_header::matrix_result) + "\n";
  for (int i = 0; i < r.value.order(); ++i)
    for (int j = 0; j < r.value.order(); ++j)
      out += csv_row(r.operation, csv_field(r.func), std::to_string(i), std::to_string(j), num(r.value(i, j)));
  return out;
}

}  // namespace dncone
