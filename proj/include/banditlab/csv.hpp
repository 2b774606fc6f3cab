#pragma once

// Curve CSV emission and parsing. Numbers are written with 17 significant
// digits and '\n' line endings so identical runs give identical bytes.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "banditlab/experiments.hpp"

namespace banditlab {

// "%.17g" without locale dependence.
std::string format_double(double v);

// t,mean_regret,ci_lo,ci_hi,mean_empirical_regret[,diagnostic columns]
std::string curve_csv_header(bool with_diagnostics);
void write_curve_csv(std::ostream& out, const AgentAggregate& agent);
void write_curve_csv(const std::filesystem::path& path, const AgentAggregate& agent);

struct Curve {
  std::string name;
  std::vector<double> t;
  std::vector<double> mean;
  std::vector<double> ci_lo;
  std::vector<double> ci_hi;
};

// Named (t, mean, ci_lo, ci_hi) series sharing one t axis.
struct CurveBundle {
  std::vector<Curve> curves;

  // Throws ConfigError on empty curves, non-increasing t or mismatched axes.
  void validate() const;
};

// Reads the first four columns of a file produced by write_curve_csv. Throws
// ConfigError when the header or a row is malformed or the file is empty.
Curve read_curve_csv(std::istream& in, std::string name);
Curve read_curve_csv(const std::filesystem::path& path);

}  // namespace banditlab
