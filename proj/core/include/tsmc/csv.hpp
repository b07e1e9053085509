#ifndef TSMC_CSV_HPP
#define TSMC_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tsmc/runner.hpp"

namespace tsmc {

/// experiment_id,kernel,mu,params,n,seed,estimator,sigma2_hat,std_error,oracle_value,wall_time_seconds
std::string_view csv_header();

/// Reals use the shortest round-trip form; an infinite oracle is written
/// "inf" and a missing one as an empty field. Fields containing ',' or '"'
/// are quoted.
std::string csv_line(const ResultRow& row);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace tsmc

#endif  // TSMC_CSV_HPP
