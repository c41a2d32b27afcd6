#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "run_config.hpp"
#include "vecmtk/dynamics.hpp"
#include "vecmtk/johansen.hpp"

namespace vecmtk::cli {

// One CLI invocation. Loads data and fits models lazily and at most once, so
// `report` can run every command without repeating work.
class Session {
 public:
  Session(RunConfig cfg, std::ostream& out);

  const RunConfig& config() const { return cfg_; }
  const Panel& panel();
  VecmDeterministics deterministics() const;
  int lags();  // configured k, or the MSBIC choice
  const JohansenResult& johansen();
  int rank();  // configured r, or the trace-test choice
  const VecmModel& model();  // full-sample VECM
  const LevelVarModel& level_var();

  void cmd_summary();
  void cmd_unitroot();
  void cmd_eg();
  void cmd_johansen();
  void cmd_fit();
  void cmd_forecast();
  void cmd_irf();
  void cmd_fevd();
  void cmd_report();

  // Dispatches by subcommand name; throws ConfigError for unknown names.
  void run(const std::string& command);

 private:
  void emit_text(const std::string& name, const std::string& text);
  void emit_json(const std::string& name, const nlohmann::json& doc);
  template <class Fn>
  void emit_csv(const std::string& name, Fn&& write);
  template <class Fn>
  void emit_svg(const std::string& name, Fn&& build);
  std::filesystem::path file(const std::string& name);

  RunConfig cfg_;
  std::ostream& out_;
  std::string report_;  // accumulated text when collecting a report
  bool collecting_ = false;

  std::optional<Panel> panel_;
  std::optional<LagSelection> lag_selection_;
  std::optional<int> lags_;
  std::optional<JohansenResult> johansen_;
  std::optional<VecmModel> model_;
  std::optional<LevelVarModel> level_var_;
};

const std::vector<std::string>& command_names();

}  // namespace vecmtk::cli
