#pragma once

// csiaug command-line front end.
//
//   gen        scenario JSON -> spatial-frequency dataset
//   transform  spatial-frequency <-> truncated angular-delay
//   augment    bs-up | bs-down | rg | md, append or replace
//   fit        principal-subspace codec at one ratio
//   eval       codec + test set -> JSON report
//   report     JSON reports -> method x ratio grid (md or csv)
//   sweep      augment/fit/eval over a list of S or k values
//
// Exit status: 0 success, 2 usage error, 1 runtime error (message on stderr).

#include "csiaug/augment.hpp"
#include "csiaug/channel_sim.hpp"
#include "csiaug/codec.hpp"
#include "csiaug/dataset_io.hpp"
#include "csiaug/report.hpp"
#include "csiaug/transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace csiaug::cli {

class UsageError : public Error {
public:
  using Error::Error;
};

namespace fs = std::filesystem;

inline fs::path codec_sidecar_path(const fs::path& codec) { return codec.string() + ".meta.json"; }

inline Dataset read_input(const fs::path& path, std::ostream& err) {
  std::vector<std::string> warnings;
  Dataset ds = read_dataset(path, &warnings);
  for (const auto& w : warnings) {
    err << "warning: " << w << "\n";
  }
  return ds;
}

inline ScenarioSpec read_scenario(const fs::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

// ---------------------------------------------------------------------------

struct GenOptions {
  std::string scenario;
  std::uint64_t count = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
};

inline void run_gen(const GenOptions& o, std::ostream& out) {
  ScenarioSpec spec = read_scenario(o.scenario);
  if (o.seed) {
    spec.seed = *o.seed;
  }
  if (o.count > UINT32_MAX) {
    throw InvalidInput("count exceeds the container limit");
  }
  DatasetWriter writer(o.out, Domain::SpatialFrequency, spec.nc, spec.nt, static_cast<std::uint32_t>(o.count),
                       Provenance(spec, spec.seed));
  for (std::uint64_t i = 0; i < o.count; ++i) {
    writer.write(sample_channel_at(spec, i).values());
  }
  writer.commit();
  out << "wrote " << o.count << " samples (" << spec.nc << "x" << spec.nt << ") to " << o.out << "\n";
}

struct TransformOptions {
  std::string in;
  std::string out;
  std::uint32_t na = 32;
  bool inverse = false;
  std::optional<std::uint32_t> nc;
};

inline void run_transform(const TransformOptions& o, std::ostream& out, std::ostream& err) {
  DatasetReader reader(o.in);
  for (const auto& w : reader.warnings()) {
    err << "warning: " << w << "\n";
  }
  const DatasetHeader& h = reader.header();
  if (!o.inverse) {
    if (h.domain != Domain::SpatialFrequency) {
      throw InvalidInput(o.in + ": forward transform needs a spatial-frequency dataset");
    }
    const DftPlan plan(h.rows, h.cols, o.na);
    DatasetWriter writer(o.out, Domain::AngularDelay, plan.na(), plan.nt(), h.samples,
                         reader.provenance().with_transform({false, plan.nc(), plan.na()}));
    while (!reader.done()) {
      writer.write(plan.forward(reader.next()));
    }
    writer.commit();
  } else {
    if (h.domain != Domain::AngularDelay) {
      throw InvalidInput(o.in + ": inverse transform needs an angular-delay dataset");
    }
    if (!o.nc) {
      throw UsageError("--inverse requires --nc");
    }
    const DftPlan plan(*o.nc, h.cols, h.rows);
    DatasetWriter writer(o.out, Domain::SpatialFrequency, plan.nc(), plan.nt(), h.samples,
                         reader.provenance().with_transform({true, plan.nc(), plan.na()}));
    while (!reader.done()) {
      writer.write(plan.inverse(reader.next()));
    }
    writer.commit();
  }
  out << "transformed " << h.samples << " samples to " << o.out << "\n";
}

struct AugmentOptions {
  std::string in;
  std::string out;
  std::string method;
  std::optional<std::uint32_t> shift;
  std::optional<std::uint32_t> block;
  std::string direction = "up";
  std::uint64_t seed = 0;
  std::string mode = "append";
  std::optional<std::string> compose;
  bool compose_first = false;
};

inline AugmentParams step_params(const std::string& method_name, const AugmentOptions& o) {
  AugmentParams p;
  p.method = parse_method(method_name);
  p.seed = o.seed;
  p.direction = parse_direction(o.direction);
  if (p.method == AugmentMethod::Rg) {
    if (!o.block) {
      throw UsageError("method rg requires --block");
    }
    if (*o.block < 1) {
      throw UsageError("--block must be >= 1");
    }
    p.block = *o.block;
  } else {
    if (!o.shift) {
      throw UsageError("method " + method_name + " requires --shift");
    }
    p.shift = *o.shift;
  }
  return p;
}

inline std::vector<AugmentParams> augment_steps(const AugmentOptions& o) {
  std::vector<AugmentParams> steps{step_params(o.method, o)};
  if (o.compose) {
    AugmentParams second = step_params(*o.compose, o);
    // Distinct stream for the composed step.
    second.seed = mix64(o.seed ^ 0x636f6d706f7365ULL);
    steps.push_back(second);
    if (o.compose_first) {
      std::swap(steps[0], steps[1]);
    }
  }
  return steps;
}

inline void run_augment(const AugmentOptions& o, std::ostream& out, std::ostream& err) {
  const std::vector<AugmentParams> steps = augment_steps(o);
  const AugmentMode mode = parse_mode(o.mode);
  const Dataset ds = read_input(o.in, err);
  const Dataset result = augment_dataset(ds, steps, mode);
  write_dataset(result, o.out);
  out << "augmented " << ds.size() << " -> " << result.size() << " samples (" << result.provenance().method_label()
      << ") to " << o.out << "\n";
}

struct FitOptions {
  std::string train;
  std::string ratio;
  std::string out;
};

inline void run_fit(const FitOptions& o, std::ostream& out, std::ostream& err) {
  const Ratio eta = Ratio::parse(o.ratio);
  const Dataset train = read_input(o.train, err);
  const LinearCodec codec = fit_codec(train, eta);
  write_codec(codec, o.out);
  const nlohmann::json meta = {
      {"train", fs::path(o.train).filename().string()},
      {"train_samples", train.size()},
      {"provenance", to_json_value(train.provenance())},
  };
  io::write_file_atomic(codec_sidecar_path(o.out), meta.dump(2) + "\n");
  out << "fit codec m=" << codec.components() << " of dim " << codec.dim() << " on " << train.size()
      << " samples to " << o.out << "\n";
}

struct EvalOptions {
  std::string codec;
  std::string test;
  std::string out;
  std::optional<std::string> scenario;
  std::optional<std::string> method;
};

inline void run_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  const LinearCodec codec = read_codec(o.codec);
  const Dataset test = read_input(o.test, err);
  EvalLabels labels;
  const fs::path meta = codec_sidecar_path(o.codec);
  if (fs::exists(meta)) {
    const auto j = nlohmann::json::parse(io::read_text(meta));
    labels.train = provenance_from_json(j.value("provenance", nlohmann::json::object()));
  } else {
    err << "warning: " << meta.string() << " missing, training provenance unknown\n";
  }
  labels.method = o.method ? *o.method : labels.train.method_label();
  labels.scenario = o.scenario ? *o.scenario : fs::path(o.test).stem().string();
  const EvalReport report = evaluate(codec, test, labels);
  io::write_file_atomic(o.out, reports_to_json({report}));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", report.result.db);
  out << labels.scenario << " " << labels.method << " " << codec.ratio().to_string() << ": NMSE " << buf
      << " dB over " << report.samples << " samples\n";
}

struct ReportOptions {
  std::vector<std::string> inputs;
  std::string format = "md";
  std::optional<std::string> out;
};

inline GridFormat parse_format(const std::string& f) {
  if (f == "md") return GridFormat::Markdown;
  if (f == "csv") return GridFormat::Csv;
  throw UsageError("unknown format '" + f + "'");
}

inline void run_report(const ReportOptions& o, std::ostream& out) {
  std::vector<EvalReport> all;
  for (const auto& path : o.inputs) {
    auto reports = read_reports(path);
    all.insert(all.end(), reports.begin(), reports.end());
  }
  const std::string grid = render_grid(all, parse_format(o.format));
  if (o.out) {
    io::write_file_atomic(*o.out, grid);
  } else {
    out << grid;
  }
}

struct SweepOptions {
  std::string param;
  std::string values;
  std::string train;
  std::string test;
  std::optional<std::string> method;
  std::vector<std::string> ratios{"1/4"};
  std::uint64_t seed = 0;
  std::string mode = "append";
  std::string direction = "up";
  std::optional<std::string> scenario;
  std::string out;
  std::string format = "md";
};

inline std::vector<std::uint32_t> parse_values(const std::string& text) {
  std::vector<std::uint32_t> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size() || v > UINT32_MAX) {
        throw std::invalid_argument(item);
      }
      values.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      throw UsageError("bad --values entry '" + item + "'");
    }
  }
  if (values.empty()) {
    throw UsageError("--values is empty");
  }
  return values;
}

inline void run_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  if (o.param != "shift" && o.param != "block") {
    throw UsageError("--param must be shift or block");
  }
  const std::string method_name = o.method ? *o.method : (o.param == "shift" ? "bs-down" : "rg");
  const AugmentMethod method = parse_method(method_name);
  if ((o.param == "block") != (method == AugmentMethod::Rg)) {
    throw UsageError("--param " + o.param + " does not apply to method " + method_name);
  }
  const std::vector<std::uint32_t> values = parse_values(o.values);
  std::vector<Ratio> ratios;
  for (const auto& r : o.ratios) {
    ratios.push_back(Ratio::parse(r));
  }
  const AugmentMode mode = parse_mode(o.mode);
  const Dataset train = read_input(o.train, err);
  const Dataset test = read_input(o.test, err);
  const std::string scenario = o.scenario ? *o.scenario : fs::path(o.test).stem().string();

  std::vector<EvalReport> reports;
  for (const std::uint32_t v : values) {
    AugmentParams p;
    p.method = method;
    p.seed = o.seed;
    p.direction = parse_direction(o.direction);
    if (o.param == "shift") {
      p.shift = v;
    } else {
      p.block = v;
    }
    if (p.method == AugmentMethod::Rg && p.block < 1) {
      throw UsageError("block values must be >= 1");
    }
    const Dataset augmented = augment_dataset(train, p, mode);
    const std::string label = method_name + (o.param == "shift" ? " S=" : " k=") + std::to_string(v);
    for (const Ratio& eta : ratios) {
      const LinearCodec codec = fit_codec(augmented, eta);
      reports.push_back(evaluate(codec, test, {scenario, label, augmented.provenance()}));
      err << label << " " << eta.to_string() << ": " << reports.back().result.db << " dB\n";
    }
  }
  io::write_file_atomic(o.out, reports_to_json(reports));
  out << render_grid(reports, parse_format(o.format));
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"CSI angular-delay preprocessing, augmentation and codec evaluation toolkit", "csiaug"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic spatial-frequency dataset");
  gen_cmd->add_option("--scenario", gen.scenario, "Scenario JSON")->required();
  gen_cmd->add_option("--count", gen.count, "Number of samples")->required();
  gen_cmd->add_option("--seed", gen.seed, "Override the scenario seed");
  gen_cmd->add_option("--out", gen.out, "Output .csia")->required();

  TransformOptions tr;
  auto* tr_cmd = app.add_subcommand("transform", "Angular-delay transform with truncation, or its inverse");
  tr_cmd->add_option("--in", tr.in, "Input .csia")->required();
  tr_cmd->add_option("--out", tr.out, "Output .csia")->required();
  tr_cmd->add_option("--na", tr.na, "Delay rows kept")->capture_default_str();
  tr_cmd->add_flag("--inverse", tr.inverse, "Back to the spatial-frequency domain");
  tr_cmd->add_option("--nc", tr.nc, "Subcarrier count for --inverse");

  AugmentOptions aug;
  auto* aug_cmd = app.add_subcommand("augment", "Augment an angular-delay dataset");
  aug_cmd->add_option("--in", aug.in, "Input .csia (angular-delay)")->required();
  aug_cmd->add_option("--out", aug.out, "Output .csia")->required();
  aug_cmd->add_option("--method", aug.method, "bs-up | bs-down | rg | md")
      ->required()
      ->check(CLI::IsMember({"bs-up", "bs-down", "rg", "md"}));
  aug_cmd->add_option("--shift", aug.shift, "Shift steps S (bs-up, bs-down, md)");
  aug_cmd->add_option("--block", aug.block, "Block size k (rg)");
  aug_cmd->add_option("--direction", aug.direction, "md shift direction")
      ->check(CLI::IsMember({"up", "down"}))
      ->capture_default_str();
  aug_cmd->add_option("--seed", aug.seed, "Base seed")->capture_default_str();
  aug_cmd->add_option("--mode", aug.mode, "append | replace")
      ->check(CLI::IsMember({"append", "replace"}))
      ->capture_default_str();
  aug_cmd->add_option("--compose", aug.compose, "Second method applied to each augmented copy")
      ->check(CLI::IsMember({"bs-up", "bs-down", "rg", "md"}));
  aug_cmd->add_flag("--compose-first", aug.compose_first, "Apply the --compose method before --method");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a principal-subspace codec");
  fit_cmd->add_option("--train", fit.train, "Training .csia (angular-delay)")->required();
  fit_cmd->add_option("--ratio", fit.ratio, "Compression ratio, e.g. 1/4")->required();
  fit_cmd->add_option("--out", fit.out, "Output .csic")->required();

  EvalOptions ev;
  auto* ev_cmd = app.add_subcommand("eval", "Evaluate a codec on a test set");
  ev_cmd->add_option("--codec", ev.codec, "Codec .csic")->required();
  ev_cmd->add_option("--test", ev.test, "Test .csia (angular-delay)")->required();
  ev_cmd->add_option("--out", ev.out, "Output report .json")->required();
  ev_cmd->add_option("--scenario", ev.scenario, "Scenario label (default: test file stem)");
  ev_cmd->add_option("--method", ev.method, "Method label (default: from training provenance)");

  ReportOptions rep;
  auto* rep_cmd = app.add_subcommand("report", "Render reports as a method x ratio grid");
  rep_cmd->add_option("--in", rep.inputs, "Report .json files")->required()->expected(1, -1);
  rep_cmd->add_option("--format", rep.format, "md | csv")->check(CLI::IsMember({"md", "csv"}))->capture_default_str();
  rep_cmd->add_option("--out", rep.out, "Write the grid here instead of stdout");

  SweepOptions sw;
  auto* sw_cmd = app.add_subcommand("sweep", "Sweep S or k through augment, fit and eval");
  sw_cmd->add_option("--param", sw.param, "shift | block")->required()->check(CLI::IsMember({"shift", "block"}));
  sw_cmd->add_option("--values", sw.values, "Comma-separated values")->required();
  sw_cmd->add_option("--train", sw.train, "Training .csia (angular-delay)")->required();
  sw_cmd->add_option("--test", sw.test, "Test .csia (angular-delay)")->required();
  sw_cmd->add_option("--method", sw.method, "Augmentation method (default bs-down for shift, rg for block)")
      ->check(CLI::IsMember({"bs-up", "bs-down", "rg", "md"}));
  sw_cmd->add_option("--ratio", sw.ratios, "Compression ratios")->expected(1, -1)->capture_default_str();
  sw_cmd->add_option("--seed", sw.seed, "Augmentation seed")->capture_default_str();
  sw_cmd->add_option("--mode", sw.mode, "append | replace")
      ->check(CLI::IsMember({"append", "replace"}))
      ->capture_default_str();
  sw_cmd->add_option("--direction", sw.direction, "md shift direction")
      ->check(CLI::IsMember({"up", "down"}))
      ->capture_default_str();
  sw_cmd->add_option("--scenario", sw.scenario, "Scenario label (default: test file stem)");
  sw_cmd->add_option("--out", sw.out, "Output reports .json")->required();
  sw_cmd->add_option("--format", sw.format, "md | csv")->check(CLI::IsMember({"md", "csv"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gen_cmd->parsed()) {
      run_gen(gen, out);
    } else if (tr_cmd->parsed()) {
      run_transform(tr, out, err);
    } else if (aug_cmd->parsed()) {
      run_augment(aug, out, err);
    } else if (fit_cmd->parsed()) {
      run_fit(fit, out, err);
    } else if (ev_cmd->parsed()) {
      run_eval(ev, out, err);
    } else if (rep_cmd->parsed()) {
      run_report(rep, out);
    } else if (sw_cmd->parsed()) {
      run_sweep(sw, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

} // namespace csiaug::cli
