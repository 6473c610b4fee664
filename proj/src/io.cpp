#include "hwgrowth/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "hwgrowth/errors.hpp"

namespace hwgrowth::io {

using nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view field, std::size_t line, const char* column) {
  double value = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ParseError(std::string("invalid number in column '") + column + "': '" +
                         std::string(field) + "'",
                     line);
  }
  return value;
}

DiscreteMeasure build(std::vector<Atom> atoms, std::vector<std::size_t> lines) {
  // Validate atom by atom so the error carries the offending line.
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    try {
      DiscreteMeasure({atoms[i]});
    } catch (const DomainError& e) {
      throw ParseError(e.what(), lines[i]);
    }
  }
  return DiscreteMeasure(std::move(atoms));
}

}  // namespace

DiscreteMeasure parse_measure_csv(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  bool has_mass = false;
  std::vector<Atom> atoms;
  std::vector<std::size_t> lines;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = trim(line);
    if (number == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split_commas(view);
    if (!have_header) {
      if (fields.size() == 3 && fields[0] == "re" && fields[1] == "im" && fields[2] == "mass") {
        has_mass = true;
      } else if (!(fields.size() == 2 && fields[0] == "re" && fields[1] == "im")) {
        throw ParseError("expected header 're,im,mass' or 're,im'", number);
      }
      have_header = true;
      continue;
    }
    const std::size_t expected = has_mass ? 3 : 2;
    // A trailing empty mass field falls back to the default.
    if (fields.size() != expected && !(has_mass && fields.size() == 2)) {
      throw ParseError("expected " + std::to_string(expected) + " fields, got " +
                           std::to_string(fields.size()),
                       number);
    }
    Atom atom;
    atom.point = {parse_double(fields[0], number, "re"), parse_double(fields[1], number, "im")};
    if (has_mass && fields.size() == 3 && !fields[2].empty()) {
      atom.mass = parse_double(fields[2], number, "mass");
    }
    atoms.push_back(atom);
    lines.push_back(number);
  }
  if (!have_header) throw ParseError("empty input: missing header 're,im,mass'", 0);
  return build(std::move(atoms), std::move(lines));
}

DiscreteMeasure parse_measure_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 0);
  }
  if (!doc.is_array()) throw ParseError("expected a JSON array of atoms", 0);
  std::vector<Atom> atoms;
  std::vector<std::size_t> lines;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& item = doc[i];
    const std::string where = "atom " + std::to_string(i) + ": ";
    if (!item.is_object() || !item.contains("re") || !item.contains("im") ||
        !item["re"].is_number() || !item["im"].is_number()) {
      throw ParseError(where + "needs numeric 're' and 'im'", 0);
    }
    Atom atom;
    atom.point = {item["re"].get<double>(), item["im"].get<double>()};
    if (item.contains("mass")) {
      if (!item["mass"].is_number()) throw ParseError(where + "'mass' must be numeric", 0);
      atom.mass = item["mass"].get<double>();
    }
    atoms.push_back(atom);
    lines.push_back(0);
  }
  try {
    return DiscreteMeasure(std::move(atoms));
  } catch (const DomainError& e) {
    throw ParseError(e.what(), 0);
  }
}

DiscreteMeasure read_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return is_json ? parse_measure_json(in) : parse_measure_csv(in);
}

void write_measure_csv(std::ostream& out, const DiscreteMeasure& m) {
  out << "re,im,mass\n";
  for (const Atom& a : m.atoms()) {
    out << format_number(a.point.real()) << ',' << format_number(a.point.imag()) << ','
        << format_number(a.mass) << '\n';
  }
}

namespace {

json number_or_string(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

json bound_report_json(const BoundReport& report) {
  json rows = json::array();
  for (const BoundRow& row : report.rows) {
    json j{{"r", row.r},
           {"lhs", number_or_string(row.lhs)},
           {"rhs_p1_a", row.rhs_p1_a},
           {"rhs_p1_b", row.rhs_p1_b},
           {"rhs_p2_a", row.rhs_p2_a},
           {"rhs_p2_b", row.rhs_p2_b},
           {"violation", number_or_string(row.violation)},
           {"identity_gap", row.identity_gap},
           {"ok", row.ok}};
    if (!row.ok) j["error"] = row.error;
    rows.push_back(std::move(j));
  }
  json doc{{"kind", "bound_report"},
           {"q", report.q},
           {"rho", report.rho ? json(*report.rho) : json(nullptr)},
           {"measure", report.measure},
           {"worst_violation", number_or_string(report.worst_violation)},
           {"identity_gap", report.identity_gap},
           {"tolerances",
            {{"violation_rel", report.tolerances.violation_rel},
             {"identity_gap", report.tolerances.identity_gap}}},
           {"passed", report.passed},
           {"rows", std::move(rows)}};
  return doc;
}

void write_rows_csv(std::ostream& out, const BoundReport& report, const std::string& prefix) {
  for (const BoundRow& row : report.rows) {
    out << prefix << format_number(row.r) << ',' << format_number(row.lhs) << ','
        << format_number(row.rhs_p1_a) << ',' << format_number(row.rhs_p1_b) << ','
        << format_number(row.rhs_p2_a) << ',' << format_number(row.rhs_p2_b) << ','
        << format_number(row.violation) << ',' << format_number(row.identity_gap) << ','
        << (row.ok ? 1 : 0) << '\n';
  }
}

constexpr const char* kRowHeader =
    "r,lhs,rhs_p1_a,rhs_p1_b,rhs_p2_a,rhs_p2_b,violation,identity_gap,ok\n";

}  // namespace

void write_bound_report_json(std::ostream& out, const BoundReport& report) {
  out << bound_report_json(report).dump(2) << '\n';
}

void write_bound_report_csv(std::ostream& out, const BoundReport& report) {
  out << kRowHeader;
  write_rows_csv(out, report, "");
}

void write_bound_sweep_json(std::ostream& out, std::span<const BoundReport> reports) {
  json doc{{"kind", "bound_sweep"}, {"trials", reports.size()}};
  bool passed = true;
  json items = json::array();
  for (const BoundReport& r : reports) {
    passed = passed && r.passed;
    items.push_back(bound_report_json(r));
  }
  doc["passed"] = passed;
  doc["reports"] = std::move(items);
  out << doc.dump(2) << '\n';
}

void write_bound_sweep_csv(std::ostream& out, std::span<const BoundReport> reports) {
  out << "trial,q," << kRowHeader;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    write_rows_csv(out, reports[i], std::to_string(i) + "," + std::to_string(reports[i].q) + ",");
  }
}

void write_type_report_json(std::ostream& out, const TypeBoundReport& report) {
  json doc{{"kind", "type_bound_report"},
           {"rho", report.rho},
           {"q", report.q},
           {"measure", report.measure},
           {"type_u", report.type_u},
           {"type_mu", report.type_mu},
           {"type_N", report.type_N},
           {"s_rho", report.s_rho},
           {"slack_1", report.slack_1},
           {"slack_2", report.slack_2},
           {"slack_tolerance", report.slack_tolerance},
           {"grid",
            {{"r0", report.grid.r0}, {"ratio", report.grid.ratio}, {"count", report.grid.count}}},
           {"passed", report.passed}};
  out << doc.dump(2) << '\n';
}

void write_type_report_csv(std::ostream& out, const TypeBoundReport& report) {
  out << "rho,q,type_u,type_mu,type_N,s_rho,slack_1,slack_2,passed\n";
  out << format_number(report.rho) << ',' << report.q << ',' << format_number(report.type_u)
      << ',' << format_number(report.type_mu) << ',' << format_number(report.type_N) << ','
      << format_number(report.s_rho) << ',' << format_number(report.slack_1) << ','
      << format_number(report.slack_2) << ',' << (report.passed ? 1 : 0) << '\n';
}

}  // namespace hwgrowth::io
