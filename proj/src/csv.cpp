#include "banditlab/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "banditlab/errors.hpp"

namespace banditlab {
namespace {

constexpr const char* kBaseHeader = "t,mean_regret,ci_lo,ci_hi,mean_empirical_regret";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("", "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string curve_csv_header(bool with_diagnostics) {
  std::string h = kBaseHeader;
  if (with_diagnostics) {
    for (const auto name : DiagnosticSeries::kColumnNames) {
      h += ',';
      h += name;
    }
  }
  return h;
}

void write_curve_csv(std::ostream& out, const AgentAggregate& agent) {
  const bool diag = agent.diagnostics.has_value();
  out << curve_csv_header(diag) << '\n';
  std::string line;
  for (std::size_t t = 0; t < agent.mean_regret.size(); ++t) {
    const double m = agent.mean_regret[t];
    const double hw = agent.ci_half_width[t];
    line = std::to_string(t);
    line += ',';
    line += format_double(m);
    line += ',';
    line += format_double(m - hw);
    line += ',';
    line += format_double(m + hw);
    line += ',';
    line += format_double(agent.mean_empirical_regret[t]);
    if (diag) {
      for (std::size_t c = 0; c < DiagnosticSeries::kColumns; ++c) {
        line += ',';
        line += format_double(agent.diagnostics->column(c)[t]);
      }
    }
    line += '\n';
    out << line;
  }
}

void write_curve_csv(const std::filesystem::path& path, const AgentAggregate& agent) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("", "cannot write '" + path.string() + "'");
  write_curve_csv(out, agent);
  if (!out) throw ConfigError("", "write failed for '" + path.string() + "'");
}

void CurveBundle::validate() const {
  if (curves.empty()) throw ConfigError("", "no curves");
  for (const auto& c : curves) {
    if (c.t.empty()) throw ConfigError("", "curve '" + c.name + "' is empty");
    for (std::size_t i = 1; i < c.t.size(); ++i) {
      if (!(c.t[i] > c.t[i - 1])) {
        throw ConfigError("", "curve '" + c.name + "': t is not strictly increasing");
      }
    }
    if (c.t != curves.front().t) {
      throw ConfigError("", "curve '" + c.name + "' does not share the t axis of '" +
                                curves.front().name + "'");
    }
  }
}

Curve read_curve_csv(std::istream& in, std::string name) {
  Curve c;
  c.name = std::move(name);
  std::string line;
  if (!std::getline(in, line) || line.rfind(kBaseHeader, 0) != 0) {
    throw ConfigError("", "'" + c.name + "': missing or unexpected CSV header");
  }
  const std::size_t width = split(line).size();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != width) {
      throw ConfigError("", "'" + c.name + "' line " + std::to_string(line_no) +
                                ": expected " + std::to_string(width) + " columns");
    }
    c.t.push_back(parse_cell(cells[0], line_no));
    c.mean.push_back(parse_cell(cells[1], line_no));
    c.ci_lo.push_back(parse_cell(cells[2], line_no));
    c.ci_hi.push_back(parse_cell(cells[3], line_no));
  }
  if (c.t.empty()) throw ConfigError("", "'" + c.name + "' has no data rows");
  return c;
}

Curve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read '" + path.string() + "'");
  return read_curve_csv(in, path.stem().string());
}

}  // namespace banditlab
