#include "vecmtk/critical_values.hpp"

#include <string>

#include "vecmtk/errors.hpp"

namespace vecmtk {

namespace {

struct SurfaceRow {
  Deterministic det;
  int n;
  int level;  // 0: 1%, 1: 5%, 2: 10%
  std::array<double, 4> b;
};

// MacKinnon (2010), Table 2. Mirrors core/data/mackinnon_2010.csv.
constexpr SurfaceRow kSurface[] = {
    {Deterministic::none, 1, 0, {-2.56574, -2.2358, -3.627, 0.0}},
    {Deterministic::none, 1, 1, {-1.941, -0.2686, -3.365, 31.223}},
    {Deterministic::none, 1, 2, {-1.61682, 0.2656, -2.714, 25.364}},
    {Deterministic::constant, 1, 0, {-3.43035, -6.5393, -16.786, -79.433}},
    {Deterministic::constant, 1, 1, {-2.86154, -2.8903, -4.234, -40.04}},
    {Deterministic::constant, 1, 2, {-2.56677, -1.5384, -2.809, 0.0}},
    {Deterministic::constant, 2, 0, {-3.89644, -10.9519, -33.527, 0.0}},
    {Deterministic::constant, 2, 1, {-3.33613, -6.1101, -6.823, 0.0}},
    {Deterministic::constant, 2, 2, {-3.04445, -4.2412, -2.72, 0.0}},
    {Deterministic::constant, 3, 0, {-4.29374, -14.4354, -33.195, 47.433}},
    {Deterministic::constant, 3, 1, {-3.74066, -8.5632, -10.852, 27.982}},
    {Deterministic::constant, 3, 2, {-3.45218, -6.2143, -3.718, 0.0}},
    {Deterministic::constant, 4, 0, {-4.64332, -18.1031, -37.972, 0.0}},
    {Deterministic::constant, 4, 1, {-4.096, -11.2349, -11.175, 0.0}},
    {Deterministic::constant, 4, 2, {-3.8102, -8.3931, -4.137, 0.0}},
    {Deterministic::constant, 5, 0, {-4.95756, -21.8883, -45.142, 0.0}},
    {Deterministic::constant, 5, 1, {-4.41519, -14.0405, -12.575, 0.0}},
    {Deterministic::constant, 5, 2, {-4.13157, -10.7417, -3.784, 0.0}},
    {Deterministic::constant, 6, 0, {-5.24568, -25.6688, -57.737, 88.639}},
    {Deterministic::constant, 6, 1, {-4.70693, -16.9178, -17.492, 60.007}},
    {Deterministic::constant, 6, 2, {-4.42501, -13.1875, -5.104, 27.877}},
    {Deterministic::constant_trend, 1, 0, {-3.95877, -9.0531, -28.428, -134.155}},
    {Deterministic::constant_trend, 1, 1, {-3.41049, -4.3904, -9.036, -45.374}},
    {Deterministic::constant_trend, 1, 2, {-3.12705, -2.5856, -3.925, -22.38}},
    {Deterministic::constant_trend, 2, 0, {-4.32762, -15.4387, -35.679, 0.0}},
    {Deterministic::constant_trend, 2, 1, {-3.78057, -9.5106, -12.074, 0.0}},
    {Deterministic::constant_trend, 2, 2, {-3.49631, -7.0815, -7.538, 21.892}},
    {Deterministic::constant_trend, 3, 0, {-4.66305, -18.7688, -49.793, 104.244}},
    {Deterministic::constant_trend, 3, 1, {-4.1189, -11.8922, -19.031, 77.332}},
    {Deterministic::constant_trend, 3, 2, {-3.83511, -9.0723, -8.504, 35.403}},
    {Deterministic::constant_trend, 4, 0, {-4.9694, -22.4694, -52.599, 51.314}},
    {Deterministic::constant_trend, 4, 1, {-4.42871, -14.5876, -18.228, 39.647}},
    {Deterministic::constant_trend, 4, 2, {-4.14633, -11.25, -9.873, 54.109}},
    {Deterministic::constant_trend, 5, 0, {-5.25276, -26.2183, -59.631, 50.646}},
    {Deterministic::constant_trend, 5, 1, {-4.71537, -17.3569, -22.66, 91.359}},
    {Deterministic::constant_trend, 5, 2, {-4.43422, -13.6078, -10.238, 76.781}},
    {Deterministic::constant_trend, 6, 0, {-5.51727, -29.976, -75.222, 202.253}},
    {Deterministic::constant_trend, 6, 1, {-4.98228, -20.305, -25.224, 132.03}},
    {Deterministic::constant_trend, 6, 2, {-4.70233, -16.1253, -9.836, 94.272}},
};

// Trace quantiles (90, 95, 99%) by n = p - r. Mirrors core/data/johansen_trace.csv.
constexpr std::array<double, 3> kTrace[] = {
    {2.7055, 3.8415, 6.6349},        // n = 1
    {13.4294, 15.4943, 19.9349},     // n = 2
    {27.0669, 29.7961, 35.4628},     // n = 3
    {44.4929, 47.8545, 54.6815},     // n = 4
    {65.8202, 69.8189, 77.8202},     // n = 5
    {91.109, 95.7542, 104.9637},     // n = 6
    {120.3673, 125.6185, 135.9825},  // n = 7
    {153.6341, 159.529, 171.0905},   // n = 8
    {190.8714, 197.3772, 210.0366},  // n = 9
    {232.103, 239.2468, 253.2526},   // n = 10
    {277.374, 285.1402, 300.2821},   // n = 11
    {326.5354, 334.9795, 351.215},   // n = 12
};

// Fixed 5% sequence for p = 4, indexed by n = p - r.
constexpr double kPaperTrace5[] = {9.2, 15.7, 22.0, 28.1};

}  // namespace

std::string_view to_string(Deterministic d) {
  switch (d) {
    case Deterministic::none:
      return "none";
    case Deterministic::constant:
      return "constant";
    case Deterministic::constant_trend:
      return "constant+trend";
  }
  return "none";
}

Deterministic parse_deterministic(std::string_view text) {
  if (text == "none" || text == "n" || text == "nc") return Deterministic::none;
  if (text == "constant" || text == "c") return Deterministic::constant;
  if (text == "constant+trend" || text == "constant_trend" || text == "ct") {
    return Deterministic::constant_trend;
  }
  throw ConfigError("unknown deterministic specification '" + std::string(text) +
                    "' (expected none, constant or constant+trend)");
}

CriticalValues mackinnon_critical_values(Deterministic d, int n_vars, std::size_t nobs) {
  if (nobs == 0) throw NumericalError("critical values need a positive sample size");
  std::array<double, 3> cv{};
  int found = 0;
  const double T = static_cast<double>(nobs);
  for (const auto& row : kSurface) {
    if (row.det != d || row.n != n_vars) continue;
    cv[static_cast<std::size_t>(row.level)] =
        row.b[0] + row.b[1] / T + row.b[2] / (T * T) + row.b[3] / (T * T * T);
    ++found;
  }
  if (found != 3) {
    throw ConfigError("no critical values for deterministic=" + std::string(to_string(d)) +
                      " with " + std::to_string(n_vars) + " variable(s)");
  }
  return {cv[0], cv[1], cv[2]};
}

std::string_view to_string(TraceTable t) {
  return t == TraceTable::paper ? "paper" : "standard";
}

TraceTable parse_trace_table(std::string_view text) {
  if (text == "standard") return TraceTable::standard;
  if (text == "paper") return TraceTable::paper;
  throw ConfigError("unknown critical-value table '" + std::string(text) +
                    "' (expected standard or paper)");
}

std::array<double, 3> trace_quantiles(int n) {
  if (n < 1 || n > 12) {
    throw ConfigError("trace critical values cover 1..12 common trends, got " +
                      std::to_string(n));
  }
  return kTrace[n - 1];
}

std::vector<double> trace_critical_values_5pct(TraceTable table, int p) {
  std::vector<double> out;
  if (table == TraceTable::paper) {
    if (p != 4) {
      throw ConfigError("the 'paper' trace table is defined for exactly 4 variables, got " +
                        std::to_string(p));
    }
    for (int r = 0; r < p; ++r) out.push_back(kPaperTrace5[p - r - 1]);
    return out;
  }
  for (int r = 0; r < p; ++r) out.push_back(trace_quantiles(p - r)[1]);
  return out;
}

}  // namespace vecmtk
