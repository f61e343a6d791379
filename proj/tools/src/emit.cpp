#include "emit.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "mtilt/errors.hpp"

#ifndef MTILT_VERSION
#define MTILT_VERSION "0.0.0"
#endif

namespace mtilt::cli {
namespace {

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const std::string& flag : flags) {
    if (!out.empty()) out += ';';
    out += flag;
  }
  return out;
}

std::string iso_utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Minimal line-chart scaffolding shared by the two SVG emitters.
struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b",
                                    "#17becf", "#7f7f7f"};

std::string svg_chart(const std::vector<Series>& series,
                      const std::string& x_label,
                      const std::string& y_label) {
  const double width = 840.0, height = 520.0;
  const double ml = 72.0, mr = 24.0, mt = 24.0, mb = 48.0;
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const Series& s : series) {
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  const auto sx = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
  };
  const auto sy = [&](double y) {
    return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";

  for (int t = 0; t <= 5; ++t) {
    const double fx = xmin + t * (xmax - xmin) / 5.0;
    const double fy = ymin + t * (ymax - ymin) / 5.0;
    char label[32];
    svg << "<line x1=\"" << sx(fx) << "\" y1=\"" << sy(ymin) << "\" x2=\""
        << sx(fx) << "\" y2=\"" << sy(ymin) + 5 << "\" stroke=\"#333\"/>\n";
    std::snprintf(label, sizeof label, "%.4g", fx);
    svg << "<text x=\"" << sx(fx) << "\" y=\"" << sy(ymin) + 19
        << "\" text-anchor=\"middle\">" << label << "</text>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << sy(fy) << "\" x2=\""
        << width - mr << "\" y2=\"" << sy(fy)
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    std::snprintf(label, sizeof label, "%.4g", fy);
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << sy(fy) + 4
        << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  svg << "<line x1=\"" << ml << "\" y1=\"" << sy(ymin) << "\" x2=\""
      << width - mr << "\" y2=\"" << sy(ymin) << "\" stroke=\"#333\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << sy(ymin) << "\" x2=\"" << ml
      << "\" y2=\"" << mt << "\" stroke=\"#333\"/>\n";
  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (mt + height - mb) / 2 << ")\">" << y_label << "</text>\n";

  std::size_t color_index = 0;
  double legend_y = mt + 8.0;
  for (const Series& s : series) {
    const char* color = kPalette[color_index % (sizeof kPalette /
                                                sizeof kPalette[0])];
    if (!s.dashed) ++color_index;
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"" << (s.dashed ? 1.0 : 1.8) << "\"";
    if (s.dashed) svg << " stroke-dasharray=\"5,4\"";
    svg << " points=\"";
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      svg << sx(x) << "," << sy(y) << " ";
    }
    svg << "\"/>\n";
    if (!s.dashed) {
      svg << "<line x1=\"" << width - mr - 150 << "\" y1=\"" << legend_y
          << "\" x2=\"" << width - mr - 130 << "\" y2=\"" << legend_y
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      svg << "<text x=\"" << width - mr - 124 << "\" y=\"" << legend_y + 4
          << "\">" << s.label << "</text>\n";
      legend_y += 16.0;
    }
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

struct RatioGroupKey {
  std::string model;
  long n;
  bool lower;
  auto operator<=>(const RatioGroupKey&) const = default;
};

bool has_flag(const ScanRow& row, const char* token) {
  return std::find(row.flags.begin(), row.flags.end(), token) !=
         row.flags.end();
}

// Groups scan rows by (model, n, side) preserving first-appearance order.
std::vector<std::pair<RatioGroupKey, std::vector<const ScanRow*>>>
group_rows(std::span<const ScanRow> rows) {
  std::vector<std::pair<RatioGroupKey, std::vector<const ScanRow*>>> groups;
  for (const ScanRow& row : rows) {
    const RatioGroupKey key{row.model, row.n, has_flag(row, "lower")};
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == key; });
    if (it == groups.end()) {
      groups.push_back({key, {}});
      it = std::prev(groups.end());
    }
    it->second.push_back(&row);
  }
  return groups;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::string ratio_csv(std::span<const ScanRow> rows) {
  std::string out = kRatioCsvHeader;
  out += '\n';
  for (const ScanRow& row : rows) {
    out += row.model;
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.x);
    out += ',';
    out += format_double(row.delta);
    out += ',';
    out += to_string(row.estimator);
    out += ',';
    out += std::to_string(row.replicates);
    out += ',';
    out += std::to_string(row.seed);
    out += ',';
    out += format_double(row.tail);
    out += ',';
    out += format_double(row.std_error);
    out += ',';
    out += format_double(row.normal_tail_value);
    out += ',';
    out += format_double(row.ratio);
    out += ',';
    out += format_double(row.ratio_std_error);
    out += ',';
    out += format_double(row.env_lower);
    out += ',';
    out += format_double(row.env_upper);
    out += ',';
    out += join_flags(row.flags);
    out += '\n';
  }
  return out;
}

std::string bound_csv(std::span<const BoundRow> rows) {
  std::string out = "model,n,lambda,lhs,rhs_shape,fitted_c,pass\n";
  for (const BoundRow& row : rows) {
    out += row.model;
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.lambda);
    out += ',';
    out += format_double(row.lhs);
    out += ',';
    out += format_double(row.rhs_shape);
    out += ',';
    out += format_double(row.fitted_c);
    out += ',';
    out += row.pass ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string ks_csv(std::span<const KsRow> rows) {
  std::string out = "model,n,lambda,N,ks,sampling_band,rhs_shape,fitted_c\n";
  for (const KsRow& row : rows) {
    out += row.model;
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.lambda);
    out += ',';
    out += std::to_string(row.replicates);
    out += ',';
    out += format_double(row.ks);
    out += ',';
    out += format_double(row.sampling_band);
    out += ',';
    out += format_double(row.rhs_shape);
    out += ',';
    out += format_double(row.fitted_c);
    out += '\n';
  }
  return out;
}

std::string mdp_csv(std::span<const MdpRow> rows) {
  std::string out =
      "n,a_n,threshold,value,target,gap,scaled_stderr,flags\n";
  for (const MdpRow& row : rows) {
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.a_n);
    out += ',';
    out += format_double(row.threshold);
    out += ',';
    out += format_double(row.value);
    out += ',';
    out += format_double(row.target);
    out += ',';
    out += format_double(row.gap);
    out += ',';
    out += format_double(row.scaled_std_error);
    out += ',';
    out += row.no_hits ? "no_hits" : "";
    out += '\n';
  }
  return out;
}

std::string conditions_csv(
    std::span<const std::pair<std::string, ConditionReport>> reports) {
  std::string out = "check,entry,measured,bound,holds\n";
  for (const auto& [name, report] : reports) {
    out += name;
    out += ",overall,";
    out += format_double(report.measured);
    out += ',';
    out += format_double(report.bound);
    out += ',';
    out += report.holds ? '1' : '0';
    out += '\n';
    for (const ConditionDetail& detail : report.detail) {
      const bool ok =
          detail.measured <= detail.bound * (1.0 + kConditionTolerance);
      out += name;
      out += ',';
      out += detail.label;
      out += ',';
      out += format_double(detail.measured);
      out += ',';
      out += format_double(detail.bound);
      out += ',';
      out += ok ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

std::vector<std::string> write_ratio_series(const std::string& prefix,
                                            std::span<const ScanRow> rows) {
  const std::string header = "# x ratio stderr lower upper\n";
  std::vector<std::string> written;
  if (rows.empty()) {
    const std::string path = prefix + ".dat";
    write_text_file(path, header);
    written.push_back(path);
    return written;
  }
  for (const auto& [key, group] : group_rows(rows)) {
    std::string path = prefix + "_" + key.model + "_n" +
                       std::to_string(key.n) + (key.lower ? "_lower" : "") +
                       ".dat";
    std::string body = header;
    for (const ScanRow* row : group) {
      body += format_double(row->x);
      body += ' ';
      body += format_double(row->ratio);
      body += ' ';
      body += format_double(row->ratio_std_error);
      body += ' ';
      body += format_double(row->env_lower);
      body += ' ';
      body += format_double(row->env_upper);
      body += '\n';
    }
    write_text_file(path, body);
    written.push_back(std::move(path));
  }
  return written;
}

std::vector<std::string> write_mdp_series(const std::string& prefix,
                                          std::span<const MdpRow> rows) {
  std::string body = "# n gap\n";
  for (const MdpRow& row : rows) {
    body += std::to_string(row.n);
    body += ' ';
    body += format_double(row.gap);
    body += '\n';
  }
  const std::string path = prefix + ".dat";
  write_text_file(path, body);
  return {path};
}

std::string ratio_svg(std::span<const ScanRow> rows) {
  std::vector<Series> series;
  for (const auto& [key, group] : group_rows(rows)) {
    Series line;
    line.label = key.model + " n=" + std::to_string(key.n) +
                 (key.lower ? " lower" : "");
    Series lo{"", {}, true}, hi{"", {}, true};
    for (const ScanRow* row : group) {
      line.points.push_back({row->x, row->ratio});
      lo.points.push_back({row->x, row->env_lower});
      hi.points.push_back({row->x, row->env_upper});
    }
    series.push_back(std::move(lo));
    series.push_back(std::move(hi));
    series.push_back(std::move(line));
  }
  return svg_chart(series, "threshold x", "tail / normal tail");
}

std::string mdp_svg(std::span<const MdpRow> rows) {
  Series gap{"gap to -x^2/2", {}, false};
  for (const MdpRow& row : rows) {
    gap.points.push_back({std::log10(static_cast<double>(row.n)), row.gap});
  }
  return svg_chart({gap}, "log10 n", "|scaled log tail - target|");
}

nlohmann::json summary_json(const Config& config, nlohmann::json results) {
  nlohmann::json doc;
  doc["metadata"] = {{"tool", "mtilt"},
                     {"version", MTILT_VERSION},
                     {"timestamp", iso_utc_now()}};
  doc["config"] = dump_config(config);
  doc["results"] = std::move(results);
  return doc;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ResourceError("cannot open output file " + path);
  }
  out << content;
  if (!out) {
    throw ResourceError("failed writing output file " + path);
  }
}

}  // namespace mtilt::cli
