#include "codesign/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace codesign {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 540;
constexpr int kMarginLeft = 80;
constexpr int kMarginRight = 30;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 60;

const char* kPalette[12] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                            "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Axes {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;

  double px(double x) const {
    const double span = x_max > x_min ? x_max - x_min : 1.0;
    return kMarginLeft + (x - x_min) / span * (kWidth - kMarginLeft - kMarginRight);
  }
  double py(double y) const {
    const double span = y_max > y_min ? y_max - y_min : 1.0;
    return kHeight - kMarginBottom - (y - y_min) / span * (kHeight - kMarginTop - kMarginBottom);
  }
};

Axes fit_axes(const std::vector<const EvalRecord*>& points) {
  Axes ax;
  if (points.empty()) return ax;
  ax.x_min = ax.x_max = points.front()->objectives.mse_total;
  ax.y_min = ax.y_max = points.front()->objectives.energy;
  for (const EvalRecord* r : points) {
    ax.x_min = std::min(ax.x_min, r->objectives.mse_total);
    ax.x_max = std::max(ax.x_max, r->objectives.mse_total);
    ax.y_min = std::min(ax.y_min, r->objectives.energy);
    ax.y_max = std::max(ax.y_max, r->objectives.energy);
  }
  const double pad_x = std::max(0.05 * (ax.x_max - ax.x_min), 1e-9);
  const double pad_y = std::max(0.05 * (ax.y_max - ax.y_min), 1e-9);
  ax.x_min -= pad_x;
  ax.x_max += pad_x;
  ax.y_min -= pad_y;
  ax.y_max += pad_y;
  return ax;
}

void svg_open(std::ostringstream& svg, const std::string& title) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << title << "</text>\n";
}

void svg_axes(std::ostringstream& svg, const Axes& ax, const std::string& x_label,
              const std::string& y_label) {
  svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kHeight - kMarginBottom << "\" x2=\""
      << kWidth - kMarginRight << "\" y2=\"" << kHeight - kMarginBottom
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
      << "\" y2=\"" << kHeight - kMarginBottom << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = ax.x_min + (ax.x_max - ax.x_min) * i / 5.0;
    const double yv = ax.y_min + (ax.y_max - ax.y_min) * i / 5.0;
    svg << "<text x=\"" << fmt(ax.px(xv)) << "\" y=\"" << kHeight - kMarginBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << fmt_tick(xv)
        << "</text>\n";
    svg << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt(ax.py(yv) + 3)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt_tick(yv)
        << "</text>\n";
  }
  svg << "<text x=\"" << (kMarginLeft + kWidth - kMarginRight) / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
      << "</text>\n";
  svg << "<text x=\"20\" y=\"" << (kMarginTop + kHeight - kMarginBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 20 "
      << (kMarginTop + kHeight - kMarginBottom) / 2 << ")\">" << y_label << "</text>\n";
}

void svg_point(std::ostringstream& svg, double x, double y, const std::string& fill, double r) {
  svg << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << r << "\" fill=\"" << fill
      << "\"/>\n";
}

std::vector<const EvalRecord*> feasible_subset(const std::vector<EvalRecord>& archive) {
  std::vector<const EvalRecord*> out;
  for (const EvalRecord& r : archive) {
    if (r.objectives.feasible) out.push_back(&r);
  }
  return out;
}

std::vector<const EvalRecord*> all_pointers(const std::vector<EvalRecord>& archive) {
  std::vector<const EvalRecord*> out;
  for (const EvalRecord& r : archive) out.push_back(&r);
  return out;
}

}  // namespace

std::string render_archive_scatter(const std::vector<EvalRecord>& archive,
                                   const std::vector<EvalRecord>& front) {
  std::ostringstream svg;
  svg_open(svg, "Candidate evaluations and Pareto front");
  std::vector<const EvalRecord*> cloud = feasible_subset(archive);
  const bool degenerate = cloud.empty();
  if (degenerate) cloud = all_pointers(archive);
  const Axes ax = fit_axes(cloud);
  svg_axes(svg, ax, "Tracking error MSE_total [m^2]", "Energy [J]");

  for (const EvalRecord* r : cloud) {
    svg_point(svg, ax.px(r->objectives.mse_total), ax.py(r->objectives.energy), "#9ecae1", 3.0);
  }
  if (!degenerate && !front.empty()) {
    std::vector<const EvalRecord*> fr = all_pointers(front);
    std::sort(fr.begin(), fr.end(), [](const EvalRecord* a, const EvalRecord* b) {
      return a->objectives.mse_total < b->objectives.mse_total;
    });
    svg << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"";
    for (const EvalRecord* r : fr) {
      svg << fmt(ax.px(r->objectives.mse_total)) << "," << fmt(ax.py(r->objectives.energy)) << " ";
    }
    svg << "\"/>\n";
    for (const EvalRecord* r : fr) {
      svg_point(svg, ax.px(r->objectives.mse_total), ax.py(r->objectives.energy), "#d62728", 4.0);
    }
  }
  if (degenerate) {
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#d62728\">"
           "no feasible candidates; showing penalized cloud</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_model_scatter(const std::vector<EvalRecord>& archive) {
  std::ostringstream svg;
  svg_open(svg, "Evaluations by centroid model");
  std::vector<const EvalRecord*> cloud = feasible_subset(archive);
  const bool degenerate = cloud.empty();
  if (degenerate) cloud = all_pointers(archive);
  const Axes ax = fit_axes(cloud);
  svg_axes(svg, ax, "Tracking error MSE_total [m^2]", "Energy [J]");
  for (const EvalRecord* r : cloud) {
    svg_point(svg, ax.px(r->objectives.mse_total), ax.py(r->objectives.energy),
              kPalette[((r->model_id % 12) + 12) % 12], 3.0);
  }
  if (degenerate) {
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#d62728\">"
           "no feasible candidates; showing penalized cloud</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_model_contributions(const std::vector<EvalRecord>& front) {
  std::ostringstream svg;
  svg_open(svg, "Per-model contributions to the Pareto front");
  const Axes ax = fit_axes(all_pointers(front));
  svg_axes(svg, ax, "Tracking error MSE_total [m^2]", "Energy [J]");

  std::map<int, std::vector<const EvalRecord*>> by_model;
  for (const EvalRecord& r : front) by_model[r.model_id].push_back(&r);

  int color = 0;
  for (auto& [model_id, members] : by_model) {
    const std::string fill = kPalette[color % 12];
    ++color;
    std::sort(members.begin(), members.end(), [](const EvalRecord* a, const EvalRecord* b) {
      return a->objectives.mse_total < b->objectives.mse_total;
    });
    if (members.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << fill << "\" stroke-width=\"1.2\" points=\"";
      for (const EvalRecord* r : members) {
        svg << fmt(ax.px(r->objectives.mse_total)) << "," << fmt(ax.py(r->objectives.energy)) << " ";
      }
      svg << "\"/>\n";
    }
    for (const EvalRecord* r : members) {
      svg_point(svg, ax.px(r->objectives.mse_total), ax.py(r->objectives.energy), fill, 4.0);
    }
    svg << "<text x=\"" << kWidth - kMarginRight - 8 << "\" y=\"" << kMarginTop + 14 * color
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\" fill=\"" << fill
        << "\">model " << model_id << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace codesign
