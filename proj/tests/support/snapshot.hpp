#pragma once

#include <vector>

#include "vecmtk/panel.hpp"

namespace vecmtk::testing {

// The bundled four-variable quarterly snapshot, in model order.
inline Panel snapshot_panel() {
  const std::vector<SeriesSpec> specs = {
      {"gdp", "GDPC1.csv", "GDPC1", "DATE", SeriesTransform::chained_dollars_note},
      {"disc_rate", "INTDSRUSM193N.csv", "INTDSRUSM193N", "DATE", SeriesTransform::none},
      {"cpi", "CPIAUCSL.csv", "CPIAUCSL", "DATE", SeriesTransform::none},
      {"us_pop", "POP.csv", "POP", "DATE", SeriesTransform::none}};
  return load_panel(VECMTK_SNAPSHOT_DIR, specs);
}

}  // namespace vecmtk::testing
