// Copyright 2026 The flatmetric Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "flatmetric/io.hpp"

namespace fm = flatmetric;

namespace {

std::string fmt3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt3_opt(const std::optional<double>& v) {
  return v ? fmt3(*v) : std::string("na");
}

// "RxC" -> (radius steps, recall steps).
bool parse_grid(const std::string& text, std::size_t& rows,
                std::size_t& cols) {
  const std::size_t x = text.find('x');
  if (x == std::string::npos || x == 0 || x + 1 >= text.size()) return false;
  try {
    rows = std::stoul(text.substr(0, x));
    cols = std::stoul(text.substr(x + 1));
  } catch (const std::exception&) {
    return false;
  }
  return rows > 0 && cols > 0;
}

// One point cloud from all frames of a localization file.
fm::PointList merge_frames(const fm::FrameTable& table) {
  fm::PointList all(table.dim);
  all.reserve(table.total_points());
  for (const auto& [id, pts] : table.frames) {
    for (const fm::Point& p : pts) all.push_back(p);
  }
  return all;
}

nlohmann::ordered_json decomposition_to_json(
    const fm::TransportDecomposition& dec) {
  nlohmann::ordered_json j;
  j["total_cost"] = dec.total_cost;
  j["moves"] = nlohmann::ordered_json::array();
  for (const auto& mv : dec.moves) {
    j["moves"].push_back({{"gt", mv.gt},
                          {"det", mv.det},
                          {"mass", mv.mass},
                          {"distance", mv.distance},
                          {"cost", mv.cost}});
  }
  j["creations"] = nlohmann::ordered_json::array();
  for (const auto& ev : dec.creations) {
    j["creations"].push_back(
        {{"atom", ev.atom}, {"mass", ev.mass}, {"cost", ev.cost}});
  }
  j["destructions"] = nlohmann::ordered_json::array();
  for (const auto& ev : dec.destructions) {
    j["destructions"].push_back(
        {{"atom", ev.atom}, {"mass", ev.mass}, {"cost", ev.cost}});
  }
  return j;
}

nlohmann::ordered_json result_to_json(const fm::FlatMetricResult& res) {
  nlohmann::ordered_json j;
  j["flat_metric"] = res.value;
  j["lambda"] = res.lambda;
  j["duality_gap"] = res.duality_gap;
  j["decomposition"] = decomposition_to_json(res.decomposition);
  j["potentials"] = {{"f", res.potentials.f}, {"g", res.potentials.g}};
  return j;
}

struct EventCounts {
  std::size_t count = 0;
  double mass = 0.0;
};

template <typename Events>
EventCounts tally(const Events& events) {
  EventCounts out;
  out.count = events.size();
  for (const auto& e : events) out.mass += e.mass;
  return out;
}

int run_evaluate(const std::string& gt_path, const std::string& det_path,
                 const fm::EvalConfig& config, const std::string& output,
                 const std::string& format, int workers) {
  const fm::FrameTable gt = fm::parse_localizations(gt_path);
  const fm::FrameTable det = fm::parse_localizations(det_path);
  const fm::EvaluationReport report =
      fm::evaluate_dataset(gt, det, config, workers);
  const auto& a = report.aggregate;
  std::cout << "flat=" << fmt3_opt(a.flat) << " eff=" << fmt3(a.efficiency)
            << " J=" << fmt3(a.jaccard) << " rmse=" << fmt3_opt(a.rmse)
            << " rmsmd=" << fmt3_opt(a.rmsmd) << "\n";
  if (!a.frames_without_ground_truth.empty()) {
    std::cerr << "note: " << a.frames_without_ground_truth.size()
              << " frame(s) have no ground-truth points and were skipped by "
                 "the flat metric\n";
  }
  if (a.rmse_defaulted_to_zero) {
    std::cerr << "note: no matched pairs anywhere; efficiency treats RMSE "
                 "as 0 by convention\n";
  }
  if (!output.empty()) {
    fm::write_report(report, output,
                     format == "csv" ? fm::ReportFormat::kCsv
                                     : fm::ReportFormat::kJson);
  }
  return 0;
}

int run_flat(const std::string& a_path, const std::string& b_path,
             double lambda, bool as_json) {
  const fm::PointList a = merge_frames(fm::parse_localizations(a_path));
  const fm::PointList b = merge_frames(fm::parse_localizations(b_path));
  // Counting measures: every localization carries unit mass.
  const fm::DiscreteMeasure mu(a, std::vector<double>(a.size(), 1.0));
  const fm::DiscreteMeasure nu(b, std::vector<double>(b.size(), 1.0));
  const fm::FlatMetricResult res = fm::flat_metric(mu, nu, lambda);
  if (as_json) {
    std::cout << result_to_json(res).dump(2) << "\n";
    return 0;
  }
  const EventCounts mv = tally(res.decomposition.moves);
  const EventCounts cr = tally(res.decomposition.creations);
  const EventCounts ds = tally(res.decomposition.destructions);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "flat=%.6f gap=%.3g\n", res.value,
                res.duality_gap);
  std::cout << buf;
  std::snprintf(buf, sizeof(buf),
                "moves=%zu (mass %.6f)\ncreations=%zu (mass %.6f)\n"
                "destructions=%zu (mass %.6f)\n",
                mv.count, mv.mass, cr.count, cr.mass, ds.count, ds.mass);
  std::cout << buf;
  return 0;
}

int run_surface(const fm::SurfaceConfig& config, const std::string& output,
                int workers) {
  const fm::SurfaceGrid grid = fm::surface_sweep(config, workers);
  const std::string csv = fm::write_surface_csv(grid);
  if (output.empty()) {
    std::cout << csv;
  } else {
    fm::write_text_file(output, csv);
    std::cout << "surface: " << grid.radius_axis.size() << "x"
              << grid.recall_axis.size() << " grid, " << config.trials
              << " trial(s) per cell -> " << output << "\n";
  }
  return 0;
}

int run_toy(std::size_t n, double lambda, std::uint64_t seed,
            const std::string& prefix) {
  const fm::ToyExample toy = fm::toy_example(n, lambda, seed);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "toy: n_gt=%zu n_det=%zu lambda=%g flat=%.6f moves=%zu "
                "creations=%zu destructions=%zu\n",
                toy.gt_points.size(), toy.det_points.size(), toy.lambda,
                toy.result.value, toy.result.decomposition.moves.size(),
                toy.result.decomposition.creations.size(),
                toy.result.decomposition.destructions.size());
  std::cout << buf;
  if (prefix.empty()) return 0;

  fm::FrameTable gt_table, det_table;
  gt_table.frames[1] = toy.gt_points;
  det_table.frames[1] = toy.det_points;
  fm::write_localizations(gt_table, prefix + "_gt.csv");
  fm::write_localizations(det_table, prefix + "_det.csv");

  std::string moves = "gt_index,det_index,mass,distance,cost\n";
  for (const auto& mv : toy.result.decomposition.moves) {
    moves += std::to_string(mv.gt) + "," + std::to_string(mv.det) + "," +
             fm::internal::format_number(mv.mass) + "," +
             fm::internal::format_number(mv.distance) + "," +
             fm::internal::format_number(mv.cost) + "\n";
  }
  fm::write_text_file(prefix + "_moves.csv", moves);

  std::string events = "kind,atom,mass,cost\n";
  for (const auto& ev : toy.result.decomposition.creations) {
    events += "creation," + std::to_string(ev.atom) + "," +
              fm::internal::format_number(ev.mass) + "," +
              fm::internal::format_number(ev.cost) + "\n";
  }
  for (const auto& ev : toy.result.decomposition.destructions) {
    events += "destruction," + std::to_string(ev.atom) + "," +
              fm::internal::format_number(ev.mass) + "," +
              fm::internal::format_number(ev.cost) + "\n";
  }
  fm::write_text_file(prefix + "_events.csv", events);

  nlohmann::ordered_json j = result_to_json(toy.result);
  j["n_gt"] = toy.gt_points.size();
  j["n_det"] = toy.det_points.size();
  fm::write_text_file(prefix + ".json", j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "flateval: compare localization sets with an exact flat-metric solver "
      "and the classical pairing panel"};
  app.require_subcommand(1);

  auto* eval = app.add_subcommand(
      "evaluate",
      "Frame-by-frame comparison of detections against ground truth");
  std::string gt_path, det_path, eval_output;
  std::string eval_format = "json";
  fm::EvalConfig eval_config;
  int eval_workers = 0;
  eval->add_option("ground_truth", gt_path, "ground-truth localization CSV")
      ->required();
  eval->add_option("detections", det_path, "detected localization CSV")
      ->required();
  eval->add_option("--lambda", eval_config.lambda,
                   "creation/deletion rate in nm")
      ->capture_default_str();
  eval->add_option("--radius-tolerance", eval_config.tolerance_radius,
                   "pairing radius in nm")
      ->capture_default_str();
  eval->add_option("--alpha", eval_config.alpha,
                   "efficiency weight per nm of RMSE")
      ->capture_default_str();
  eval->add_option("--output", eval_output, "write the full report here");
  eval->add_option("--format", eval_format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  eval->add_option("--workers", eval_workers, "worker threads, 0 = all cores")
      ->capture_default_str();

  auto* flat = app.add_subcommand(
      "flat",
      "Flat metric between two files, all frames merged, unit mass per "
      "localization");
  std::string flat_a, flat_b;
  double flat_lambda = 125.0;
  bool flat_json = false;
  flat->add_option("a", flat_a, "first localization CSV")->required();
  flat->add_option("b", flat_b, "second localization CSV")->required();
  flat->add_option("--lambda", flat_lambda, "creation/deletion rate in nm")
      ->capture_default_str();
  flat->add_flag("--json", flat_json, "print the full result as JSON");

  auto* surface = app.add_subcommand(
      "surface",
      "Mean metric surfaces over a (perturbation radius, recall) grid");
  fm::SurfaceConfig surface_config;
  std::string surface_grid = "51x51";
  std::string surface_output;
  int surface_workers = 0;
  surface->add_option("--seed", surface_config.seed, "master seed")
      ->capture_default_str();
  surface->add_option("--trials", surface_config.trials, "draws per cell")
      ->capture_default_str();
  surface
      ->add_option("--grid", surface_grid,
                   "radius steps x recall steps, e.g. 51x51")
      ->capture_default_str();
  surface->add_option("--lambda", surface_config.lambda,
                      "creation/deletion rate in nm")
      ->capture_default_str();
  surface->add_option("--alpha", surface_config.alpha,
                      "efficiency weight per nm of RMSE")
      ->capture_default_str();
  surface->add_option("--points", surface_config.n_points,
                      "ground-truth points per draw")
      ->capture_default_str();
  surface->add_option("--side", surface_config.side,
                      "side of the square field in nm")
      ->capture_default_str();
  surface->add_option("--radius-max", surface_config.radius_max,
                      "largest perturbation radius in nm, also the pairing "
                      "radius")
      ->capture_default_str();
  surface->add_option("--output", surface_output,
                      "CSV destination (stdout when omitted)");
  surface
      ->add_option("--workers", surface_workers,
                   "worker threads, 0 = all cores")
      ->capture_default_str();

  auto* toy = app.add_subcommand(
      "toy", "Small worked example with a solved flat metric");
  std::size_t toy_n = 15;
  double toy_lambda = 0.1;
  std::uint64_t toy_seed = 0;
  std::string toy_output;
  toy->add_option("--n", toy_n, "ground-truth points")->capture_default_str();
  toy->add_option("--lambda", toy_lambda, "creation/deletion rate")
      ->capture_default_str();
  toy->add_option("--seed", toy_seed, "master seed")->capture_default_str();
  toy->add_option("--output", toy_output,
                  "file prefix for the example CSVs and JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (*eval) {
      return run_evaluate(gt_path, det_path, eval_config, eval_output,
                          eval_format, eval_workers);
    }
    if (*flat) {
      return run_flat(flat_a, flat_b, flat_lambda, flat_json);
    }
    if (*surface) {
      if (!parse_grid(surface_grid, surface_config.radius_steps,
                      surface_config.recall_steps)) {
        std::cerr << "bad --grid value '" << surface_grid
                  << "', expected RxC such as 51x51\n";
        return 1;
      }
      return run_surface(surface_config, surface_output, surface_workers);
    }
    if (*toy) {
      return run_toy(toy_n, toy_lambda, toy_seed, toy_output);
    }
  } catch (const fm::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
