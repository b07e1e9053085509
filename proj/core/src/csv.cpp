#include "tsmc/csv.hpp"

#include <cstdio>
#include <ostream>

#include "tsmc/spec_strings.hpp"

namespace tsmc {

namespace {

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string{field};
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string_view csv_header() {
  return "experiment_id,kernel,mu,params,n,seed,estimator,sigma2_hat,std_error,oracle_value,wall_time_seconds";
}

std::string csv_line(const ResultRow& row) {
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", row.wall_time_seconds);
  std::string line;
  line += quote(row.experiment_id) + ',';
  line += quote(row.kernel) + ',';
  line += quote(row.mu) + ',';
  line += quote(row.params) + ',';
  line += std::to_string(row.n) + ',';
  line += std::to_string(row.seed) + ',';
  line += quote(row.estimator) + ',';
  line += format_real(row.sigma2_hat) + ',';
  line += format_real(row.std_error) + ',';
  if (row.oracle_value) line += format_real(*row.oracle_value);
  line += ',';
  line += wall;
  return line;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << csv_header() << '\n';
  for (const auto& row : rows) out << csv_line(row) << '\n';
}

}  // namespace tsmc
