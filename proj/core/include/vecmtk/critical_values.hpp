#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

// Embedded critical-value tables. The same numbers ship as CSV resources in
// core/data/ (mackinnon_2010.csv, johansen_trace.csv); a unit test keeps the
// two copies identical.

namespace vecmtk {

enum class Deterministic { none, constant, constant_trend };

std::string_view to_string(Deterministic d);
Deterministic parse_deterministic(std::string_view text);

// Left-tail critical values of a unit-root t statistic.
struct CriticalValues {
  double pct1 = 0.0;
  double pct5 = 0.0;
  double pct10 = 0.0;
};

// MacKinnon (2010) response surface evaluated at sample size `nobs`.
// n_vars = 1 gives Dickey-Fuller values; n_vars = m gives Engle-Granger values
// for a cointegrating regression on m variables. Supported: n_vars 1..6
// (only 1 for Deterministic::none).
CriticalValues mackinnon_critical_values(Deterministic d, int n_vars, std::size_t nobs);

enum class TraceTable {
  standard,  // asymptotic, unrestricted constant
  paper,     // fixed 4-variable sequence 28.1, 22.0, 15.7, 9.2
};

std::string_view to_string(TraceTable t);
TraceTable parse_trace_table(std::string_view text);

// 5% trace critical values for H0: rank <= r, r = 0..p-1.
std::vector<double> trace_critical_values_5pct(TraceTable table, int p);

// 90/95/99% trace quantiles for n = p - r common trends, n = 1..12.
std::array<double, 3> trace_quantiles(int n);

}  // namespace vecmtk
