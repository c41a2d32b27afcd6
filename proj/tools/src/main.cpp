#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "vecmtk/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

int exit_code(vecmtk::ErrorKind k) {
  switch (k) {
    case vecmtk::ErrorKind::config:
      return kExitConfig;
    case vecmtk::ErrorKind::data:
      return kExitData;
    case vecmtk::ErrorKind::numerical:
      return kExitNumerical;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vecmtk: unit roots, cointegration, VECM forecasting, IRF and FEVD on quarterly panels"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  vecmtk::cli::Overrides ov;
  app.add_option("--config", config_path, "Run configuration (JSON)")->required();
  app.add_option("--lags", ov.lags, "Differenced lags k, or 'auto' for MSBIC");
  app.add_option("--rank", ov.rank, "Cointegrating rank r, or 'auto' for the trace test");
  app.add_option("--holdout", ov.holdout, "Quarters withheld for forecast evaluation");
  app.add_option("--ordering", ov.ordering, "Cholesky ordering, comma separated");
  app.add_option("--cv-table", ov.cv_table, "Trace critical values: standard, or paper for the fixed 4-variable 5% sequence");
  app.add_option("--out", ov.out, "Output directory");
  app.add_option("--format", ov.format, "Comma-separated subset of text,csv,json,svg");
  app.add_option("--seed", ov.seed, "Seed recorded with the outputs");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"summary", "Summary statistics for levels and differences"},
      {"unitroot", "ADF tests and integration order per variable"},
      {"eg", "Engle-Granger two-step cointegration test"},
      {"johansen", "Johansen trace test and rank selection"},
      {"fit", "Estimate the VECM and write the model document"},
      {"forecast", "Holdout forecast with RMSE and MAPE"},
      {"irf", "Orthogonalized impulse responses"},
      {"fevd", "Forecast-error variance decomposition"},
      {"report", "Run every step and write all artifacts"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    auto cfg = vecmtk::cli::load_config(config_path, ov);
    vecmtk::cli::Session session(std::move(cfg), std::cout);
    session.run(app.get_subcommands().front()->get_name());
  } catch (const vecmtk::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
