#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "uavnoma/config.hpp"

namespace uavnoma::cli {

struct Row {
  double axis_value = 0.0;
  std::string user;
  std::string method;
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool feasible = true;
};

inline constexpr const char* csv_header = "axis_value,user,method,value,stderr,trials,seed,feasible";

inline void write_csv(std::ostream& os, const std::vector<Row>& rows) {
  os << csv_header << '\n';
  for (const auto& r : rows)
    os << format_number(r.axis_value) << ',' << r.user << ',' << r.method << ',' << format_number(r.value) << ','
       << format_number(r.std_error) << ',' << r.trials << ',' << r.seed << ',' << (r.feasible ? 1 : 0) << '\n';
}

inline std::string to_csv(const std::vector<Row>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// key = value record of a run. Written with status = running before any
// data file, rewritten with status = complete at the end.
class RunManifest {
 public:
  RunManifest(std::filesystem::path path, std::string command, const Settings& settings)
      : path_(std::move(path)), command_(std::move(command)), scenario_(describe(settings)),
        seed_(settings.scenario.seed), started_(utc_timestamp()) {
    write();
  }

  void add_output(const std::filesystem::path& p) {
    outputs_.push_back(p.filename().string());
    write();
  }

  void finish() {
    finished_ = utc_timestamp();
    status_ = "complete";
    write();
  }

  void fail(const std::string& why) {
    finished_ = utc_timestamp();
    status_ = "failed: " + why;
    write();
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  void write() const {
    std::ostringstream os;
    os << "manifest.tool = uavnoma\n";
    os << "manifest.tool_version = " << tool_version << '\n';
    os << "manifest.command = " << command_ << '\n';
    os << "manifest.status = " << status_ << '\n';
    os << "manifest.seed = " << seed_ << '\n';
    os << "manifest.started = " << started_ << '\n';
    os << "manifest.finished = " << finished_ << '\n';
    for (std::size_t i = 0; i < outputs_.size(); ++i) os << "manifest.output." << i << " = " << outputs_[i] << '\n';
    for (const auto& [k, v] : scenario_) os << k << " = " << v << '\n';
    write_text_file(path_, os.str());
  }

  std::filesystem::path path_;
  std::string command_;
  std::vector<std::pair<std::string, std::string>> scenario_;
  std::uint64_t seed_;
  std::string started_;
  std::string finished_;
  std::string status_ = "running";
  std::vector<std::string> outputs_;
};

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Line chart with one series per (user, method), in order of appearance.
inline std::string render_svg(const std::vector<Row>& rows, const std::string& title, const std::string& x_label,
                              bool log_y) {
  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  for (const auto& r : rows) {
    if (!std::isfinite(r.value) || (log_y && !(r.value > 0.0))) continue;
    const std::string name = r.user + " " + r.method;
    auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) { return s.name == name; });
    if (it == series.end()) {
      series.push_back({name, {}});
      it = series.end() - 1;
    }
    it->pts.emplace_back(r.axis_value, log_y ? std::log10(r.value) : r.value);
  }
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (auto [x, y] : s.pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (series.empty()) x0 = y0 = 0.0, x1 = y1 = 1.0;
  if (log_y) y0 = std::floor(y0), y1 = std::max(std::ceil(y1), y0 + 1.0);
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;

  const double W = 760, H = 480, L = 70, R = 250, T = 40, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return T + (1.0 - (y - y0) / (y1 - y0)) * ph; };
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
  };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << L + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    os << "<text x=\"" << sx(xv) << "\" y=\"" << T + ph + 16 << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
  }
  const int ny = log_y ? static_cast<int>(y1 - y0) : 5;
  for (int i = 0; i <= ny; ++i) {
    const double yv = y0 + (y1 - y0) * i / ny;
    os << "<line x1=\"" << L << "\" x2=\"" << L + pw << "\" y1=\"" << sy(yv) << "\" y2=\"" << sy(yv)
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">"
       << (log_y ? "1e" + num(yv) : num(yv)) << "</text>\n";
  }
  os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = palette[i % 10];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[i].pts) os << sx(x) << ',' << sy(y) << ' ';
    os << "\"/>\n";
    const double ly = T + 12 + 16.0 * static_cast<double>(i);
    os << "<line x1=\"" << W - R + 12 << "\" x2=\"" << W - R + 32 << "\" y1=\"" << ly - 4 << "\" y2=\"" << ly - 4
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R + 38 << "\" y=\"" << ly << "\">" << xml_escape(series[i].name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace uavnoma::cli
