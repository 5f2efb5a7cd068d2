#pragma once

// Evaluation report JSON and method x ratio grids.
//
// Report object (schema "csiaug-eval-report/1"):
//   scenario, method      labels
//   ratio                 "num/den"; ratio_value is the same as a double
//   nmse_linear, nmse_db  mean per-sample NMSE; dB floored at db_floor
//   samples               number of test samples
//   codec                 {rows, cols, dim, components}
//   seeds                 {train, test, augmentations[]}; null when unknown
//
// A report file holds one object or an array of objects.

#include "csiaug/codec.hpp"
#include "csiaug/io_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace csiaug {

inline constexpr const char* kReportSchema = "csiaug-eval-report/1";

inline nlohmann::json to_json_value(const EvalReport& r) {
  auto optional_seed = [](const std::optional<std::uint64_t>& s) {
    return s ? nlohmann::json(*s) : nlohmann::json(nullptr);
  };
  return {
      {"schema", kReportSchema},
      {"scenario", r.scenario},
      {"method", r.method},
      {"ratio", r.ratio.to_string()},
      {"ratio_value", r.ratio.value()},
      {"nmse_linear", r.result.linear},
      {"nmse_db", r.result.db},
      {"db_floor", r.db_floor},
      {"samples", r.samples},
      {"codec", {{"rows", r.rows}, {"cols", r.cols}, {"dim", r.dim}, {"components", r.components}}},
      {"seeds",
       {{"train", optional_seed(r.train_seed)},
        {"test", optional_seed(r.test_seed)},
        {"augmentations", r.augment_seeds}}},
  };
}

inline EvalReport report_from_json(const nlohmann::json& j) {
  if (j.value("schema", std::string()) != kReportSchema) {
    throw InvalidInput("not an evaluation report (schema must be '" + std::string(kReportSchema) + "')");
  }
  auto optional_seed = [](const nlohmann::json& s) -> std::optional<std::uint64_t> {
    if (s.is_null()) {
      return std::nullopt;
    }
    return s.get<std::uint64_t>();
  };
  EvalReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.ratio = Ratio::parse(j.at("ratio").get<std::string>());
  r.result.linear = j.at("nmse_linear").get<double>();
  r.result.db = j.at("nmse_db").get<double>();
  r.db_floor = j.at("db_floor").get<double>();
  r.samples = j.at("samples").get<std::size_t>();
  const auto& codec = j.at("codec");
  r.rows = codec.at("rows").get<Eigen::Index>();
  r.cols = codec.at("cols").get<Eigen::Index>();
  r.dim = codec.at("dim").get<Eigen::Index>();
  r.components = codec.at("components").get<Eigen::Index>();
  const auto& seeds = j.at("seeds");
  r.train_seed = optional_seed(seeds.at("train"));
  r.test_seed = optional_seed(seeds.at("test"));
  r.augment_seeds = seeds.at("augmentations").get<std::vector<std::uint64_t>>();
  return r;
}

inline std::string reports_to_json(const std::vector<EvalReport>& reports) {
  nlohmann::json j;
  if (reports.size() == 1) {
    j = to_json_value(reports.front());
  } else {
    j = nlohmann::json::array();
    for (const auto& r : reports) {
      j.push_back(to_json_value(r));
    }
  }
  return j.dump(2) + "\n";
}

inline std::vector<EvalReport> read_reports(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  std::vector<EvalReport> out;
  try {
    if (j.is_array()) {
      for (const auto& item : j) {
        out.push_back(report_from_json(item));
      }
    } else {
      out.push_back(report_from_json(j));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  return out;
}

enum class GridFormat { Markdown, Csv };

/// Rows are methods in lexicographic order; columns are ratios from largest to
/// smallest (as in "1/4 ... 1/64"), split by scenario when several are present.
/// Cells hold NMSE in dB with two decimals; "-" marks a missing combination.
/// A repeated (scenario, method, ratio) keeps its highest dB value, so input
/// order never changes the output.
inline std::string render_grid(std::vector<EvalReport> reports, GridFormat format) {
  std::sort(reports.begin(), reports.end(), [](const EvalReport& a, const EvalReport& b) {
    return std::tie(a.scenario, a.method, a.result.db, a.samples) <
           std::tie(b.scenario, b.method, b.result.db, b.samples);
  });
  std::set<std::string> methods;
  std::set<std::string> scenarios;
  auto ratio_desc = [](const Ratio& a, const Ratio& b) { return b < a; };
  std::set<Ratio, decltype(ratio_desc)> ratios(ratio_desc);
  std::map<std::tuple<std::string, std::string, std::uint32_t, std::uint32_t>, double> cells;
  for (const auto& r : reports) {
    methods.insert(r.method);
    scenarios.insert(r.scenario);
    ratios.insert(r.ratio);
    cells[{r.scenario, r.method, r.ratio.num(), r.ratio.den()}] = r.result.db;
  }

  struct Column {
    std::string scenario;
    Ratio ratio;
  };
  std::vector<Column> columns;
  for (const auto& ratio : ratios) {
    for (const auto& scenario : scenarios) {
      columns.push_back({scenario, ratio});
    }
  }
  auto heading = [&](const Column& c) {
    return scenarios.size() > 1 ? c.ratio.to_string() + " " + c.scenario : c.ratio.to_string();
  };
  auto cell = [&](const std::string& method, const Column& c) {
    const auto it = cells.find({c.scenario, method, c.ratio.num(), c.ratio.den()});
    if (it == cells.end()) {
      return std::string("-");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", it->second);
    return std::string(buf);
  };

  std::ostringstream out;
  if (format == GridFormat::Csv) {
    out << "method";
    for (const auto& c : columns) {
      out << "," << heading(c);
    }
    out << "\n";
    for (const auto& m : methods) {
      out << m;
      for (const auto& c : columns) {
        out << "," << cell(m, c);
      }
      out << "\n";
    }
  } else {
    out << "| method |";
    for (const auto& c : columns) {
      out << " " << heading(c) << " |";
    }
    out << "\n|---|";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << "---:|";
    }
    out << "\n";
    for (const auto& m : methods) {
      out << "| " << m << " |";
      for (const auto& c : columns) {
        out << " " << cell(m, c) << " |";
      }
      out << "\n";
    }
  }
  return out.str();
}

} // namespace csiaug
