#include "levershap/force_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "levershap/error.hpp"

namespace levershap {

using nlohmann::json;

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 380.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 28.0;
constexpr double kMarginBottom = 36.0;

struct Band {
  // per step: offset interval relative to the base value
  std::vector<double> lo, hi;
  std::vector<bool> positive;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << v;
  return os.str();
}

void check(const EpisodeAttributions& attributions, int output_index) {
  if (attributions.empty())
    throw InvalidArgumentError("force plot: no attributions");
  if (output_index < 0 ||
      output_index >= static_cast<int>(attributions.front().size()))
    throw InvalidArgumentError("force plot: output index out of range");
}

}  // namespace

std::string force_plot_svg(const EpisodeAttributions& attributions,
                           int output_index,
                           const std::vector<std::string>& feature_names) {
  check(attributions, output_index);
  const int steps = static_cast<int>(attributions.size());
  const int m = static_cast<int>(attributions[0][output_index].phi.size());
  const double base = attributions[0][output_index].phi0;

  // stack offsets per feature per step, positives up, negatives down
  std::vector<Band> bands(m);
  for (Band& b : bands) {
    b.lo.assign(steps, 0.0);
    b.hi.assign(steps, 0.0);
    b.positive.assign(steps, true);
  }
  std::vector<double> output_curve(steps, 0.0);
  double y_min = base, y_max = base;
  for (int t = 0; t < steps; ++t) {
    const Eigen::VectorXd& phi = attributions[t][output_index].phi;
    double pos_cum = 0.0, neg_cum = 0.0;
    for (int i = 0; i < m; ++i) {
      if (phi(i) >= 0.0) {
        bands[i].lo[t] = pos_cum;
        pos_cum += phi(i);
        bands[i].hi[t] = pos_cum;
        bands[i].positive[t] = true;
      } else {
        bands[i].hi[t] = neg_cum;
        neg_cum += phi(i);
        bands[i].lo[t] = neg_cum;
        bands[i].positive[t] = false;
      }
    }
    output_curve[t] = base + phi.sum();
    y_min = std::min(y_min, base + neg_cum);
    y_max = std::max(y_max, base + pos_cum);
  }
  const double pad = std::max((y_max - y_min) * 0.08, 1e-3);
  y_min -= pad;
  y_max += pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  // a single step still gets a visible column
  const double denom = steps > 1 ? steps - 1.0 : 1.0;
  auto sx = [&](double t) { return kMarginLeft + plot_w * t / denom; };
  auto sy = [&](double v) {
    return kMarginTop + plot_h * (y_max - v) / (y_max - y_min);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  svg << "<style>.pos{fill:#d62728;fill-opacity:0.55;stroke:none}"
         ".neg{fill:#1f77b4;fill-opacity:0.55;stroke:none}"
         ".base{stroke:#444;stroke-dasharray:4 3;stroke-width:1;fill:none}"
         ".out{stroke:#000;stroke-width:1.5;fill:none}"
         ".axis{stroke:#888;stroke-width:1;fill:none}"
         "text{font-family:sans-serif;font-size:11px;fill:#333}</style>\n";

  // maximal runs of constant sign per feature, skipping zero-area spans
  for (int i = 0; i < m; ++i) {
    int run_start = 0;
    while (run_start < steps) {
      int run_end = run_start;
      while (run_end + 1 < steps &&
             bands[i].positive[run_end + 1] == bands[i].positive[run_start])
        ++run_end;
      double area = 0.0;
      for (int t = run_start; t <= run_end; ++t)
        area += bands[i].hi[t] - bands[i].lo[t];
      if (area > 1e-12) {
        std::ostringstream pts;
        if (steps == 1) {
          pts << fmt(sx(0)) << ',' << fmt(sy(base + bands[i].hi[0])) << ' '
              << fmt(kWidth - kMarginRight) << ','
              << fmt(sy(base + bands[i].hi[0])) << ' '
              << fmt(kWidth - kMarginRight) << ','
              << fmt(sy(base + bands[i].lo[0])) << ' ' << fmt(sx(0)) << ','
              << fmt(sy(base + bands[i].lo[0]));
        } else {
          for (int t = run_start; t <= run_end; ++t)
            pts << fmt(sx(t)) << ',' << fmt(sy(base + bands[i].hi[t])) << ' ';
          for (int t = run_end; t >= run_start; --t)
            pts << fmt(sx(t)) << ',' << fmt(sy(base + bands[i].lo[t]))
                << (t == run_start ? "" : " ");
        }
        svg << "<polygon class=\"" << (bands[i].positive[run_start] ? "pos" : "neg")
            << "\" data-feature=\""
            << (i < static_cast<int>(feature_names.size()) ? feature_names[i]
                                                           : "f" + std::to_string(i))
            << "\" points=\"" << pts.str() << "\"/>\n";
      }
      run_start = run_end + 1;
    }
  }

  // base-value line and model-output curve
  svg << "<line class=\"base\" x1=\"" << fmt(kMarginLeft) << "\" y1=\""
      << fmt(sy(base)) << "\" x2=\"" << fmt(kWidth - kMarginRight)
      << "\" y2=\"" << fmt(sy(base)) << "\"/>\n";
  svg << "<polyline class=\"out\" points=\"";
  if (steps == 1) {
    svg << fmt(sx(0)) << ',' << fmt(sy(output_curve[0])) << ' '
        << fmt(kWidth - kMarginRight) << ',' << fmt(sy(output_curve[0]));
  } else {
    for (int t = 0; t < steps; ++t)
      svg << fmt(sx(t)) << ',' << fmt(sy(output_curve[t]))
          << (t + 1 == steps ? "" : " ");
  }
  svg << "\"/>\n";

  // axes and labels
  svg << "<line class=\"axis\" x1=\"" << fmt(kMarginLeft) << "\" y1=\""
      << fmt(kMarginTop) << "\" x2=\"" << fmt(kMarginLeft) << "\" y2=\""
      << fmt(kHeight - kMarginBottom) << "\"/>\n";
  svg << "<line class=\"axis\" x1=\"" << fmt(kMarginLeft) << "\" y1=\""
      << fmt(kHeight - kMarginBottom) << "\" x2=\""
      << fmt(kWidth - kMarginRight) << "\" y2=\""
      << fmt(kHeight - kMarginBottom) << "\"/>\n";
  const int tick = std::max(1, steps / 10);
  for (int t = 0; t < steps; t += tick)
    svg << "<text x=\"" << fmt(sx(t)) << "\" y=\""
        << fmt(kHeight - kMarginBottom + 14.0)
        << "\" text-anchor=\"middle\">" << t << "</text>\n";
  svg << "<text x=\"" << fmt(kWidth / 2) << "\" y=\""
      << fmt(kHeight - 6.0) << "\" text-anchor=\"middle\">step</text>\n";
  for (const double v : {y_min + pad, base, y_max - pad})
    svg << "<text x=\"" << fmt(kMarginLeft - 6.0) << "\" y=\""
        << fmt(sy(v) + 4.0) << "\" text-anchor=\"end\">" << fmt(v)
        << "</text>\n";
  svg << "<text x=\"" << fmt(kMarginLeft) << "\" y=\"16\">action output a"
      << output_index + 1 << " (base value " << fmt(base) << ")</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string attributions_json(const EpisodeAttributions& attributions,
                              const std::vector<Eigen::VectorXd>& raw_inputs,
                              const std::vector<std::string>& feature_names) {
  if (attributions.empty())
    throw InvalidArgumentError("attributions_json: no attributions");
  if (raw_inputs.size() != attributions.size())
    throw ShapeError("attributions_json: raw input count mismatch");

  const int outputs = static_cast<int>(attributions.front().size());
  json doc;
  json base = json::array();
  for (int o = 0; o < outputs; ++o)
    base.push_back(attributions.front()[o].phi0);
  doc["base_value"] = std::move(base);
  doc["feature_names"] = feature_names;

  json per_step = json::array();
  for (std::size_t t = 0; t < attributions.size(); ++t) {
    for (int o = 0; o < outputs; ++o) {
      const Attribution& att = attributions[t][o];
      json rec;
      rec["step"] = t;
      rec["output"] = o;
      json features = json::array();
      for (Eigen::Index i = 0; i < att.phi.size(); ++i) {
        json f;
        f["index"] = i;
        f["name"] = i < static_cast<Eigen::Index>(feature_names.size())
                        ? feature_names[static_cast<std::size_t>(i)]
                        : "f" + std::to_string(i);
        f["value"] = raw_inputs[t](i);
        f["phi"] = att.phi(i);
        features.push_back(std::move(f));
      }
      rec["features"] = std::move(features);
      per_step.push_back(std::move(rec));
    }
  }
  doc["per_step"] = std::move(per_step);
  return doc.dump(2);
}

void export_force_plot(const EpisodeAttributions& attributions,
                       const std::vector<Eigen::VectorXd>& raw_inputs,
                       const std::vector<std::string>& feature_names,
                       const std::filesystem::path& out_dir,
                       const std::string& prefix) {
  if (attributions.empty())
    throw InvalidArgumentError("export_force_plot: no attributions");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  const auto json_path = out_dir / (prefix + ".json");
  std::ofstream jf(json_path);
  if (!jf) throw IoError("cannot open " + json_path.string() + " for writing");
  jf << attributions_json(attributions, raw_inputs, feature_names) << '\n';
  if (!jf) throw IoError("write failed for " + json_path.string());

  const int outputs = static_cast<int>(attributions.front().size());
  for (int o = 0; o < outputs; ++o) {
    const auto svg_path =
        out_dir / (prefix + "_a" + std::to_string(o + 1) + ".svg");
    std::ofstream sf(svg_path);
    if (!sf) throw IoError("cannot open " + svg_path.string() + " for writing");
    sf << force_plot_svg(attributions, o, feature_names);
    if (!sf) throw IoError("write failed for " + svg_path.string());
  }
}

}  // namespace levershap
