#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "svg_plot.hpp"
#include "vecmtk/errors.hpp"
#include "vecmtk/unitroot.hpp"

namespace vecmtk::cli {

namespace {

double year_fraction(const Quarter& q) { return q.year + 0.25 * (q.quarter - 1); }

std::vector<double> to_vec(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"summary", "unitroot", "eg",   "johansen", "fit",
                                                 "forecast", "irf",     "fevd", "report"};
  return names;
}

Session::Session(RunConfig cfg, std::ostream& out) : cfg_(std::move(cfg)), out_(out) {}

std::filesystem::path Session::file(const std::string& name) {
  std::filesystem::create_directories(cfg_.output_dir);
  return cfg_.output_dir / name;
}

void Session::emit_text(const std::string& name, const std::string& text) {
  if (collecting_) {
    report_ += text;
    report_ += '\n';
  }
  if (!cfg_.wants(OutputFormat::text)) return;
  out_ << text << '\n';
  if (!cfg_.output_dir.empty()) std::ofstream(file(name + ".txt")) << text;
}

void Session::emit_json(const std::string& name, const nlohmann::json& doc) {
  if (!cfg_.wants(OutputFormat::json)) return;
  if (cfg_.output_dir.empty()) {
    if (!cfg_.wants(OutputFormat::text)) out_ << doc.dump(2) << '\n';
    return;
  }
  std::ofstream(file(name + ".json")) << doc.dump(2) << '\n';
}

template <class Fn>
void Session::emit_csv(const std::string& name, Fn&& write) {
  if (!cfg_.wants(OutputFormat::csv) || cfg_.output_dir.empty()) return;
  std::ofstream os(file(name + ".csv"));
  write(os);
}

template <class Fn>
void Session::emit_svg(const std::string& name, Fn&& build) {
  if (!cfg_.wants(OutputFormat::svg) || cfg_.output_dir.empty()) return;
  LinePlot plot = build();
  std::ofstream os(file(name + ".svg"));
  plot.write(os);
}

const Panel& Session::panel() {
  if (!panel_) {
    Panel p = load_panel(cfg_.data_dir, cfg_.series);
    if (!cfg_.order.empty()) p = p.reordered(cfg_.order);
    if (cfg_.sample_first || cfg_.sample_last) {
      p = p.slice(cfg_.sample_first.value_or(p.index().front()),
                  cfg_.sample_last.value_or(p.index().back()));
    }
    validate_against_panel(cfg_, p);
    panel_ = std::move(p);
  }
  return *panel_;
}

VecmDeterministics Session::deterministics() const {
  return {cfg_.seasonal_dummies, cfg_.dummy_coding};
}

int Session::lags() {
  if (!lags_) {
    if (cfg_.lags) {
      lags_ = *cfg_.lags;
    } else {
      lag_selection_ = select_lag(panel(), cfg_.max_lags, deterministics());
      lags_ = lag_selection_->selected_k;
    }
  }
  return *lags_;
}

const JohansenResult& Session::johansen() {
  if (!johansen_) johansen_ = johansen_trace(panel(), lags(), deterministics(), cfg_.cv_table);
  return *johansen_;
}

int Session::rank() { return cfg_.rank ? *cfg_.rank : johansen().selected_rank; }

const VecmModel& Session::model() {
  if (!model_) model_ = estimate_vecm(panel(), rank(), lags(), deterministics());
  return *model_;
}

const LevelVarModel& Session::level_var() {
  if (!level_var_) level_var_ = vecm_to_var(model());
  return *level_var_;
}

void Session::cmd_summary() {
  const auto rows = summarize(panel());
  emit_text("summary", render_summary(rows, panel().nobs()));
  emit_csv("summary", [&](std::ostream& os) { write_summary_csv(rows, os); });
  emit_json("summary", summary_to_json(rows));
  emit_csv("panel", [&](std::ostream& os) { write_panel_csv(panel(), os); });
}

void Session::cmd_unitroot() {
  const Panel& P = panel();
  AdfOptions opts;
  opts.deterministic = cfg_.adf_deterministic;
  opts.max_lags = cfg_.adf_max_lags;
  opts.lag_rule = cfg_.adf_lag_rule;

  std::ostringstream os;
  char buf[200];
  os << "Unit-root tests: ADF, deterministic = " << to_string(opts.deterministic)
     << ", lags = " << (opts.lag_rule == LagRule::bic ? "BIC up to " : "") << opts.max_lags << '\n';
  std::snprintf(buf, sizeof buf, "%-14s %6s %12s %10s %-16s %s\n", "Variable", "Lags", "Statistic",
                "5% cv", "Decision", "Order");
  os << buf;
  nlohmann::json doc = nlohmann::json::array();
  std::ostringstream csv;
  csv << "variable,series,lags,statistic,cv1,cv5,cv10,reject_5pct,order\n";

  for (const auto& name : P.names()) {
    const Eigen::VectorXd x = P.column(name);
    const auto order = classify_integration(as_span(x), cfg_.max_integration_order, opts);
    const std::string order_s = order ? "I(" + std::to_string(*order) + ")" : "inconclusive";
    const std::vector<double> dx = difference(as_span(x), 1);
    const std::pair<std::string, AdfResult> tests[] = {
        {name, adf_test(as_span(x), opts)}, {"d." + name, adf_test(dx, opts)}};
    for (const auto& [label, r] : tests) {
      std::snprintf(buf, sizeof buf, "%-14s %6d %12.4f %10.4f %-16s %s\n", label.c_str(),
                    r.lags_used, r.statistic, r.critical_values.pct5,
                    r.rejects_at_5pct() ? "reject" : "fail to reject",
                    label == name ? order_s.c_str() : "");
      os << buf;
      auto j = to_json(r);
      j["series"] = label;
      if (label == name) j["order"] = order ? nlohmann::json(*order) : nlohmann::json("inconclusive");
      doc.push_back(std::move(j));
      csv << name << ',' << label << ',' << r.lags_used << ',' << format_exact(r.statistic) << ','
          << format_exact(r.critical_values.pct1) << ',' << format_exact(r.critical_values.pct5)
          << ',' << format_exact(r.critical_values.pct10) << ',' << (r.rejects_at_5pct() ? 1 : 0)
          << ',' << (label == name ? order_s : "") << '\n';
    }
  }
  os << "Decision rule: reject the unit root when the statistic is below the 5% critical value.\n";
  emit_text("unitroot", os.str());
  emit_json("unitroot", doc);
  emit_csv("unitroot", [&](std::ostream& o) { o << csv.str(); });

  // Levels and first differences over time.
  for (const auto& name : P.names()) {
    const Eigen::VectorXd x = P.column(name);
    std::vector<double> t, dt;
    for (std::size_t i = 0; i < P.nobs(); ++i) t.push_back(year_fraction(P.index()[i]));
    dt.assign(t.begin() + 1, t.end());
    emit_svg("level_" + name, [&] {
      return LinePlot{name, "year", name, 640, 400, false, {{name, t, to_vec(x), false}}};
    });
    emit_svg("diff_" + name, [&] {
      return LinePlot{"d." + name, "year", "d." + name, 640, 400, true,
                      {{"d." + name, dt, difference(as_span(x), 1), false}}};
    });
  }
}

void Session::cmd_eg() {
  const Panel& P = panel();
  const std::string dep = cfg_.eg_dependent.empty() ? P.names().front() : cfg_.eg_dependent;
  const EgResult eg = engle_granger(P, dep, cfg_.adf_max_lags, cfg_.adf_lag_rule);

  std::ostringstream os;
  os << render_regression(eg.step1, "Engle-Granger step 1: " + dep + " on levels") << '\n';
  const auto& r = eg.residual_test;
  os << "Step 2: ADF on step-1 residuals (no deterministic terms, " << r.lags_used << " lags)\n";
  os << "  statistic " << fmt("%.4f", r.statistic) << "   critical values (Engle-Granger, "
     << P.nvars() << " variables): 1% " << fmt("%.4f", r.critical_values.pct1) << ", 5% "
     << fmt("%.4f", r.critical_values.pct5) << ", 10% " << fmt("%.4f", r.critical_values.pct10)
     << '\n';
  os << "  residuals " << (eg.cointegrated ? "stationary: cointegrated" : "not shown stationary: no cointegration")
     << " at 5%\n";
  emit_text("eg", os.str());
  emit_json("eg", to_json(eg));
  emit_csv("eg_residuals", [&](std::ostream& o) {
    o << "DATE,residual\n";
    for (std::size_t i = 0; i < P.nobs(); ++i) {
      o << P.index()[i].iso_date() << ',' << format_exact(eg.step1.residuals(static_cast<Eigen::Index>(i))) << '\n';
    }
  });
  emit_svg("eg_residuals", [&] {
    std::vector<double> t;
    for (const auto& q : P.index()) t.push_back(year_fraction(q));
    return LinePlot{"Engle-Granger step-1 residuals", "year", "residual", 640, 400, true,
                    {{"residual", t, to_vec(eg.step1.residuals), false}}};
  });
}

void Session::cmd_johansen() {
  std::ostringstream os;
  const int k = lags();
  if (lag_selection_) {
    os << "Lag selection (MSBIC, common sample T_eff = " << lag_selection_->t_eff << "):\n";
    for (std::size_t i = 0; i < lag_selection_->criteria.size(); ++i) {
      os << "  k = " << i + 1 << "  " << fmt("%.6f", lag_selection_->criteria[i])
         << (static_cast<int>(i) + 1 == k ? "  <- selected" : "") << '\n';
    }
    os << '\n';
  }
  const auto& j = johansen();
  os << render_johansen(j);
  emit_text("johansen", os.str());
  auto doc = to_json(j);
  if (lag_selection_) doc["msbic"] = lag_selection_->criteria;
  emit_json("johansen", doc);
  emit_csv("johansen", [&](std::ostream& o) {
    o << "h0_rank_le,eigenvalue,trace,cv_5pct,result\n";
    for (Eigen::Index r = 0; r < j.trace_stats.size(); ++r) {
      const auto u = static_cast<std::size_t>(r);
      o << r << ',' << format_exact(j.eigenvalues(r)) << ',' << format_exact(j.trace_stats(r)) << ','
        << format_exact(j.critical_values_5pct[u]) << ',' << (j.rejected[u] ? "Reject" : "Fail to reject")
        << '\n';
    }
  });
}

void Session::cmd_fit() {
  const auto& m = model();
  emit_text("vecm", render_vecm(m));
  emit_json("vecm_model", to_json(m));
  emit_csv("vecm_coefficients", [&](std::ostream& o) {
    o << "equation,regressor,estimate,std_error,t_stat,p_value\n";
    for (std::size_t e = 0; e < m.equations.size(); ++e) {
      const auto& eq = m.equations[e];
      for (std::size_t c = 0; c < eq.names.size(); ++c) {
        const auto i = static_cast<Eigen::Index>(c);
        o << "d." << m.names[e] << ',' << eq.names[c] << ',' << format_exact(eq.coefficients(i)) << ','
          << format_exact(eq.std_errors(i)) << ',' << format_exact(eq.t_stats(i)) << ','
          << format_exact(eq.p_values(i)) << '\n';
      }
    }
  });
}

void Session::cmd_forecast() {
  const Panel& P = panel();
  ForecastResult f;
  std::string header;
  if (cfg_.holdout > 0) {
    const Panel fit = P.head(P.nobs() - static_cast<std::size_t>(cfg_.holdout));
    const VecmModel m = estimate_vecm(fit, rank(), lags(), deterministics());
    f = forecast(vecm_to_var(m), fit, cfg_.holdout);
    evaluate(f, P);
    header = "Out-of-sample forecast: fit " + fit.index().front().str() + "-" + fit.index().back().str() +
             ", rank " + std::to_string(m.rank) + ", k = " + std::to_string(m.k) + "\n\n";
  } else {
    f = forecast(level_var(), P, cfg_.forecast_horizon);
    header = "Forecast beyond " + P.index().back().str() + "\n\n";
  }
  emit_text("forecast", header + render_forecast(f));
  emit_json("forecast", to_json(f));
  emit_csv("forecast", [&](std::ostream& o) { write_forecast_csv(f, o); });

  const std::size_t tail = std::min<std::size_t>(P.nobs(), 24 + static_cast<std::size_t>(cfg_.holdout));
  for (std::size_t j = 0; j < f.names.size(); ++j) {
    emit_svg("forecast_" + f.names[j], [&] {
      PlotSeries obs{"observed", {}, {}, false}, pred{"forecast", {}, {}, true};
      const Eigen::VectorXd x = P.column(f.names[j]);
      for (std::size_t i = P.nobs() - tail; i < P.nobs(); ++i) {
        obs.x.push_back(year_fraction(P.index()[i]));
        obs.y.push_back(x(static_cast<Eigen::Index>(i)));
      }
      for (std::size_t s = 0; s < f.index.size(); ++s) {
        pred.x.push_back(year_fraction(f.index[s]));
        pred.y.push_back(f.point(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)));
      }
      return LinePlot{"Forecast: " + f.names[j], "year", f.names[j], 640, 400, false, {obs, pred}};
    });
  }
}

void Session::cmd_irf() {
  const auto& v = level_var();
  std::ostringstream os;
  nlohmann::json doc = nlohmann::json::array();
  char buf[64];
  for (const auto& impulse : v.names) {
    const IrfResult r = irf(v, impulse, cfg_.irf_horizon, cfg_.ordering, cfg_.irf_cumulative);
    os << "Orthogonal impulse response from d." << impulse
       << (r.cumulative ? " (cumulative, levels)" : " (differences)") << '\n';
    std::snprintf(buf, sizeof buf, "%-4s", "h");
    os << buf;
    for (const auto& n : r.names) {
      std::snprintf(buf, sizeof buf, " %14s", ("d." + n).c_str());
      os << buf;
    }
    os << '\n';
    for (Eigen::Index s = 0; s < r.responses.rows(); ++s) {
      std::snprintf(buf, sizeof buf, "%-4ld", static_cast<long>(s));
      os << buf;
      for (Eigen::Index c = 0; c < r.responses.cols(); ++c) {
        std::snprintf(buf, sizeof buf, " %14.6g", r.responses(s, c));
        os << buf;
      }
      os << '\n';
    }
    os << '\n';
    doc.push_back(to_json(r));
    emit_csv("irf_" + impulse, [&](std::ostream& o) { write_irf_csv(r, o); });
    for (std::size_t c = 0; c < r.names.size(); ++c) {
      emit_svg("irf_" + impulse + "_" + r.names[c], [&] {
        PlotSeries s{"d." + r.names[c], {}, {}, false};
        for (Eigen::Index h = 0; h < r.responses.rows(); ++h) {
          s.x.push_back(static_cast<double>(h));
          s.y.push_back(r.responses(h, static_cast<Eigen::Index>(c)));
        }
        return LinePlot{"Orthogonal impulse response from d." + impulse, "horizon",
                        "response of d." + r.names[c], 640, 400, true, {s}};
      });
    }
  }
  emit_text("irf", os.str());
  emit_json("irf", doc);
}

void Session::cmd_fevd() {
  const FevdMatrix f = fevd(level_var(), cfg_.fevd_horizon, cfg_.ordering);
  emit_text("fevd", render_fevd(f));
  emit_json("fevd", to_json(f));
  emit_csv("fevd", [&](std::ostream& o) { write_fevd_csv(f, o); });
}

void Session::cmd_report() {
  collecting_ = true;
  report_.clear();
  cmd_summary();
  cmd_unitroot();
  cmd_eg();
  cmd_johansen();
  cmd_fit();
  cmd_forecast();
  cmd_irf();
  cmd_fevd();
  collecting_ = false;
  if (!cfg_.output_dir.empty() && cfg_.wants(OutputFormat::text)) {
    std::ofstream(file("report.txt")) << report_;
  }
  if (!cfg_.output_dir.empty() && cfg_.wants(OutputFormat::json)) {
    nlohmann::json meta = {{"variables", panel().names()},
                           {"first", panel().index().front().str()},
                           {"last", panel().index().back().str()},
                           {"nobs", panel().nobs()},
                           {"k", lags()},
                           {"rank", rank()},
                           {"holdout", cfg_.holdout},
                           {"cv_table", std::string(to_string(cfg_.cv_table))},
                           {"seasonal_dummies", cfg_.seasonal_dummies},
                           {"seed", cfg_.seed}};
    std::ofstream(file("report_meta.json")) << meta.dump(2) << '\n';
  }
}

void Session::run(const std::string& command) {
  if (command == "summary") return cmd_summary();
  if (command == "unitroot") return cmd_unitroot();
  if (command == "eg") return cmd_eg();
  if (command == "johansen") return cmd_johansen();
  if (command == "fit") return cmd_fit();
  if (command == "forecast") return cmd_forecast();
  if (command == "irf") return cmd_irf();
  if (command == "fevd") return cmd_fevd();
  if (command == "report") return cmd_report();
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace vecmtk::cli
