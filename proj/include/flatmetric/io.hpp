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

#ifndef FLATMETRIC_IO_HPP_
#define FLATMETRIC_IO_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "flatmetric/classical_metrics.hpp"
#include "flatmetric/flat_metric.hpp"
#include "flatmetric/measure.hpp"
#include "flatmetric/parallel.hpp"
#include "flatmetric/synth.hpp"

namespace flatmetric {

// Malformed input data; line numbers are 1-based and refer to the raw file.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& origin, std::size_t line,
             const std::string& message)
      : std::runtime_error(origin + ":" + std::to_string(line) + ": " +
                           message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Localizations grouped by acquisition frame, ordered by frame id.
struct FrameTable {
  int dim = 2;
  std::map<std::int64_t, PointList> frames;

  std::size_t total_points() const {
    std::size_t n = 0;
    for (const auto& [id, pts] : frames) n += pts.size();
    return n;
  }
};

namespace internal {

inline std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
  }
  return out;
}

inline bool has_space(std::string_view s) {
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\v' || c == '\f') return true;
  }
  return false;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline double parse_coord(std::string_view field, const std::string& origin,
                          std::size_t line, const char* name) {
  if (field.empty() || has_space(field)) {
    throw ParseError(origin, line,
                     std::string("malformed ") + name + " value '" +
                         std::string(field) + "'");
  }
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size() ||
      !std::isfinite(value)) {
    throw ParseError(origin, line,
                     std::string("malformed ") + name + " value '" +
                         std::string(field) + "'");
  }
  return value;
}

}  // namespace internal

// Parses the localization CSV format: LF line endings, comma separators
// with no surrounding whitespace, a mandatory case-insensitive header
// `frame,x,y` (optionally followed by `z` and then extra columns, which
// are carried but ignored), then one localization per line with a positive
// integer frame id and finite coordinates in nanometres.
inline FrameTable parse_localizations_text(std::string_view text,
                                           const std::string& origin) {
  if (text.find('\r') != std::string_view::npos) {
    std::size_t line = 1;
    const std::size_t pos = text.find('\r');
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ParseError(origin, line,
                     "carriage return found; LF line endings required");
  }

  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t nl = text.find('\n', start);
      if (nl == std::string_view::npos) {
        lines.push_back(text.substr(start));
        break;
      }
      lines.push_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }
  // A trailing newline produces one empty slot at the end; drop it.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) {
    throw ParseError(origin, 1, "missing header line");
  }

  const std::vector<std::string_view> header =
      internal::split_fields(lines[0]);
  for (const auto& h : header) {
    if (internal::has_space(h)) {
      throw ParseError(origin, 1, "whitespace around separators is not allowed");
    }
  }
  if (header.size() < 3 || internal::lower_ascii(header[0]) != "frame" ||
      internal::lower_ascii(header[1]) != "x" ||
      internal::lower_ascii(header[2]) != "y") {
    throw ParseError(origin, 1,
                     "header must start with 'frame,x,y' (got '" +
                         std::string(lines[0]) + "')");
  }
  FrameTable table;
  table.dim =
      (header.size() >= 4 && internal::lower_ascii(header[3]) == "z") ? 3 : 2;
  const std::size_t n_columns = header.size();

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = lines[i];
    if (line.empty()) {
      throw ParseError(origin, line_no, "empty line");
    }
    const std::vector<std::string_view> fields = internal::split_fields(line);
    if (fields.size() != n_columns) {
      throw ParseError(origin, line_no,
                       "expected " + std::to_string(n_columns) +
                           " columns, got " + std::to_string(fields.size()));
    }
    const std::string_view frame_field = fields[0];
    if (frame_field.empty() || internal::has_space(frame_field)) {
      throw ParseError(origin, line_no,
                       "malformed frame id '" + std::string(frame_field) + "'");
    }
    std::int64_t frame = 0;
    const auto [end, ec] = std::from_chars(
        frame_field.data(), frame_field.data() + frame_field.size(), frame);
    if (ec != std::errc() || end != frame_field.data() + frame_field.size()) {
      throw ParseError(origin, line_no,
                       "malformed frame id '" + std::string(frame_field) + "'");
    }
    if (frame < 1) {
      throw ParseError(origin, line_no,
                       "frame ids must be >= 1, got " + std::to_string(frame));
    }
    Point p;
    p.x = internal::parse_coord(fields[1], origin, line_no, "x");
    p.y = internal::parse_coord(fields[2], origin, line_no, "y");
    if (table.dim == 3) {
      p.z = internal::parse_coord(fields[3], origin, line_no, "z");
    }
    table.frames.try_emplace(frame, PointList(table.dim))
        .first->second.push_back(p);
  }
  return table;
}

inline FrameTable parse_localizations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path, 0, "cannot open file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_localizations_text(buffer.str(), path);
}

namespace internal {

// %.12g keeps 12 significant digits, enough to round-trip the coordinate
// magnitudes this format carries, and is locale-independent under the
// default "C" locale.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace internal

inline void write_localizations_text(const FrameTable& table,
                                     std::string& out) {
  out += table.dim == 3 ? "frame,x,y,z\n" : "frame,x,y\n";
  for (const auto& [id, pts] : table.frames) {
    for (const Point& p : pts) {
      out += std::to_string(id);
      out += ',';
      out += internal::format_number(p.x);
      out += ',';
      out += internal::format_number(p.y);
      if (table.dim == 3) {
        out += ',';
        out += internal::format_number(p.z);
      }
      out += '\n';
    }
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << text;
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

inline void write_localizations(const FrameTable& table,
                                const std::string& path) {
  std::string text;
  write_localizations_text(table, text);
  write_text_file(path, text);
}

struct EvalConfig {
  double lambda = 125.0;            // nm
  double tolerance_radius = 250.0;  // nm
  double alpha = 1.0;               // per nm
};

struct FrameMetrics {
  std::int64_t frame = 0;
  std::size_t n_gt = 0;
  std::size_t n_det = 0;
  // Unset when the frame has no ground-truth points (value would be pure
  // detection mass with no reference scale).
  std::optional<double> flat;
  std::size_t moves = 0;
  std::size_t creations = 0;
  std::size_t destructions = 0;
  MetricPanel panel;
};

struct AggregateMetrics {
  std::size_t n_frames = 0;
  std::size_t n_gt = 0;
  std::size_t n_det = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::optional<double> flat;   // mean over frames with ground truth
  double jaccard = 0.0;         // pooled over all frames
  double precision = 0.0;
  double recall = 0.0;
  std::optional<double> rmse;   // pooled over all matched pairs
  std::optional<double> rmsmd;  // mean over frames where defined
  double efficiency = 0.0;
  std::vector<std::int64_t> frames_without_ground_truth;
  bool rmse_defaulted_to_zero = false;  // efficiency convention, not data
};

struct EvaluationReport {
  EvalConfig config;
  std::vector<FrameMetrics> frames;
  AggregateMetrics aggregate;
};

// Frame-by-frame comparison of a detection table against a ground-truth
// table. Every detection frame must exist in the ground truth; ground-truth
// frames with no detections evaluate against the empty set. Frames are
// independent and processed in parallel; all aggregation is a fixed-order
// reduction, so results do not depend on the worker count.
inline EvaluationReport evaluate_dataset(const FrameTable& ground_truth,
                                         const FrameTable& detections,
                                         const EvalConfig& config,
                                         int workers = 1) {
  internal::check_lambda(config.lambda);
  if (ground_truth.frames.empty()) {
    throw std::invalid_argument("evaluate_dataset: ground truth has no frames");
  }
  if (ground_truth.dim != detections.dim) {
    throw std::invalid_argument(
        "evaluate_dataset: ground truth and detections dimensions differ");
  }
  for (const auto& [id, pts] : detections.frames) {
    if (!ground_truth.frames.count(id)) {
      throw std::invalid_argument(
          "evaluate_dataset: detection frame " + std::to_string(id) +
          " has no ground-truth frame");
    }
  }

  EvaluationReport report;
  report.config = config;
  report.frames.resize(ground_truth.frames.size());
  std::vector<const std::pair<const std::int64_t, PointList>*> gt_frames;
  gt_frames.reserve(ground_truth.frames.size());
  for (const auto& entry : ground_truth.frames) gt_frames.push_back(&entry);
  const PointList no_detections(ground_truth.dim);

  parallel_for(gt_frames.size(), workers, [&](std::size_t i) {
    const std::int64_t id = gt_frames[i]->first;
    const PointList& gt_pts = gt_frames[i]->second;
    const auto det_it = detections.frames.find(id);
    const PointList& det_pts =
        det_it == detections.frames.end() ? no_detections : det_it->second;
    FrameMetrics fm;
    fm.frame = id;
    fm.n_gt = gt_pts.size();
    fm.n_det = det_pts.size();
    fm.panel =
        compute_panel(gt_pts, det_pts, config.tolerance_radius, config.alpha);
    if (!gt_pts.empty()) {
      const auto [mu, nu] = uniform_normalize(gt_pts, det_pts);
      const FlatMetricResult res = flat_metric(mu, nu, config.lambda);
      fm.flat = res.value;
      fm.moves = res.decomposition.moves.size();
      fm.creations = res.decomposition.creations.size();
      fm.destructions = res.decomposition.destructions.size();
    }
    report.frames[i] = std::move(fm);
  });

  AggregateMetrics agg;
  agg.n_frames = report.frames.size();
  double flat_sum = 0.0;
  std::size_t flat_frames = 0;
  double sq_sum = 0.0;
  double rmsmd_sum = 0.0;
  std::size_t rmsmd_frames = 0;
  for (const FrameMetrics& fm : report.frames) {
    agg.n_gt += fm.n_gt;
    agg.n_det += fm.n_det;
    agg.tp += fm.panel.tp;
    agg.fp += fm.panel.fp;
    agg.fn += fm.panel.fn;
    sq_sum += fm.panel.sum_squared_match_distance;
    if (fm.flat) {
      flat_sum += *fm.flat;
      ++flat_frames;
    } else {
      agg.frames_without_ground_truth.push_back(fm.frame);
    }
    if (fm.panel.rmsmd) {
      rmsmd_sum += *fm.panel.rmsmd;
      ++rmsmd_frames;
    }
  }
  if (flat_frames > 0) {
    agg.flat = flat_sum / static_cast<double>(flat_frames);
  }
  const std::int64_t jd = agg.tp + agg.fp + agg.fn;
  agg.jaccard = jd == 0 ? 100.0
                        : 100.0 * static_cast<double>(agg.tp) /
                              static_cast<double>(jd);
  const std::int64_t pd = agg.tp + agg.fp;
  agg.precision = pd == 0 ? 100.0
                          : 100.0 * static_cast<double>(agg.tp) /
                                static_cast<double>(pd);
  const std::int64_t rd = agg.tp + agg.fn;
  agg.recall = rd == 0 ? 100.0
                       : 100.0 * static_cast<double>(agg.tp) /
                             static_cast<double>(rd);
  if (agg.tp > 0) {
    agg.rmse = std::sqrt(sq_sum / static_cast<double>(agg.tp));
  } else {
    agg.rmse_defaulted_to_zero = true;
  }
  if (rmsmd_frames > 0) {
    agg.rmsmd = rmsmd_sum / static_cast<double>(rmsmd_frames);
  }
  agg.efficiency =
      efficiency(agg.jaccard, agg.rmse.value_or(0.0), config.alpha);
  report.aggregate = agg;
  return report;
}

namespace internal {

inline nlohmann::ordered_json json_or_null(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

}  // namespace internal

inline nlohmann::ordered_json report_to_json(const EvaluationReport& report) {
  nlohmann::ordered_json j;
  j["config"] = {
      {"lambda_nm", report.config.lambda},
      {"radius_tolerance_nm", report.config.tolerance_radius},
      {"alpha_per_nm", report.config.alpha},
      {"normalization", "uniform-ground-truth"},
      {"flat_aggregation", "mean-over-frames"},
  };
  const AggregateMetrics& a = report.aggregate;
  j["aggregate"] = {
      {"flat_metric_nm", internal::json_or_null(a.flat)},
      {"jaccard", a.jaccard},
      {"precision", a.precision},
      {"recall", a.recall},
      {"rmse_nm", internal::json_or_null(a.rmse)},
      {"rmsmd_nm", internal::json_or_null(a.rmsmd)},
      {"efficiency", a.efficiency},
      {"tp", a.tp},
      {"fp", a.fp},
      {"fn", a.fn},
      {"n_frames", a.n_frames},
      {"n_gt", a.n_gt},
      {"n_det", a.n_det},
      {"frames_without_ground_truth", a.frames_without_ground_truth},
      {"rmse_defaulted_to_zero", a.rmse_defaulted_to_zero},
  };
  nlohmann::ordered_json frames = nlohmann::ordered_json::array();
  for (const FrameMetrics& fm : report.frames) {
    nlohmann::ordered_json f;
    f["frame"] = fm.frame;
    f["flat_metric_nm"] = fm.flat ? nlohmann::ordered_json(*fm.flat)
                                  : nlohmann::ordered_json(nullptr);
    f["jaccard"] = fm.panel.jaccard;
    f["precision"] = fm.panel.precision;
    f["recall"] = fm.panel.recall;
    f["rmse_nm"] = internal::json_or_null(fm.panel.rmse);
    f["rmsmd_nm"] = internal::json_or_null(fm.panel.rmsmd);
    f["efficiency"] = fm.panel.efficiency;
    f["n_gt"] = fm.n_gt;
    f["n_det"] = fm.n_det;
    f["tp"] = fm.panel.tp;
    f["fp"] = fm.panel.fp;
    f["fn"] = fm.panel.fn;
    f["moves"] = fm.moves;
    f["creations"] = fm.creations;
    f["destructions"] = fm.destructions;
    frames.push_back(std::move(f));
  }
  j["frames"] = std::move(frames);
  return j;
}

inline std::string write_report_json(const EvaluationReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

namespace internal {

inline std::string csv_opt(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace internal

inline std::string write_report_csv(const EvaluationReport& report) {
  std::string out =
      "frame,flat_metric_nm,jaccard,precision,recall,rmse_nm,rmsmd_nm,"
      "efficiency,n_gt,n_det,tp,fp,fn\n";
  auto row = [&out](const std::string& frame, const std::optional<double>& flat,
                    const MetricPanel& panel, std::size_t n_gt,
                    std::size_t n_det) {
    out += frame;
    out += ',';
    out += internal::csv_opt(flat);
    out += ',';
    out += internal::format_number(panel.jaccard);
    out += ',';
    out += internal::format_number(panel.precision);
    out += ',';
    out += internal::format_number(panel.recall);
    out += ',';
    out += internal::csv_opt(panel.rmse);
    out += ',';
    out += internal::csv_opt(panel.rmsmd);
    out += ',';
    out += internal::format_number(panel.efficiency);
    out += ',';
    out += std::to_string(n_gt);
    out += ',';
    out += std::to_string(n_det);
    out += ',';
    out += std::to_string(panel.tp);
    out += ',';
    out += std::to_string(panel.fp);
    out += ',';
    out += std::to_string(panel.fn);
    out += '\n';
  };
  for (const FrameMetrics& fm : report.frames) {
    row(std::to_string(fm.frame), fm.flat, fm.panel, fm.n_gt, fm.n_det);
  }
  const AggregateMetrics& a = report.aggregate;
  MetricPanel pooled;
  pooled.tp = a.tp;
  pooled.fp = a.fp;
  pooled.fn = a.fn;
  pooled.jaccard = a.jaccard;
  pooled.precision = a.precision;
  pooled.recall = a.recall;
  pooled.rmse = a.rmse;
  pooled.rmsmd = a.rmsmd;
  pooled.efficiency = a.efficiency;
  row("aggregate", a.flat, pooled, a.n_gt, a.n_det);
  return out;
}

enum class ReportFormat { kJson, kCsv };

inline void write_report(const EvaluationReport& report,
                         const std::string& path, ReportFormat format) {
  write_text_file(path, format == ReportFormat::kJson
                            ? write_report_json(report)
                            : write_report_csv(report));
}

// Surface grid CSV: one row per (radius, recall) cell, radius-major, with
// the per-cell trial means. rmse_nm is empty for cells where no trial had
// a matched pair.
inline std::string write_surface_csv(const SurfaceGrid& grid) {
  std::string out =
      "radius_nm,recall_pct,flat_metric_nm,efficiency,jaccard,rmse_nm,"
      "trials\n";
  for (std::size_t ri = 0; ri < grid.radius_axis.size(); ++ri) {
    for (std::size_t ci = 0; ci < grid.recall_axis.size(); ++ci) {
      const SurfaceCell& cell = grid.at(ri, ci);
      out += internal::format_number(cell.radius);
      out += ',';
      out += internal::format_number(cell.recall);
      out += ',';
      out += internal::format_number(cell.mean_flat);
      out += ',';
      out += internal::format_number(cell.mean_efficiency);
      out += ',';
      out += internal::format_number(cell.mean_jaccard);
      out += ',';
      if (cell.rmse_trials > 0) {
        out += internal::format_number(cell.mean_rmse);
      }
      out += ',';
      out += std::to_string(cell.trials);
      out += '\n';
    }
  }
  return out;
}

}  // namespace flatmetric

#endif  // FLATMETRIC_IO_HPP_
