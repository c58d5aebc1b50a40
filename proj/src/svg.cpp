#include "dirmh/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dirmh/diagnostics.hpp"
#include "dirmh/errors.hpp"

namespace dirmh {

namespace {

constexpr double kWidth = 860.0;
constexpr double kPanelHeight = 170.0;
constexpr double kMarginLeft = 56.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 24.0;
constexpr double kMarginBottom = 28.0;
// Traces are decimated to at most this many points per panel.
constexpr long kMaxTracePoints = 2000;

std::string num(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

struct Scale {
  double lo = 0.0;
  double hi = 1.0;
  double y0 = 0.0;  // pixel of hi (top)
  double y1 = 0.0;  // pixel of lo (bottom)

  double map(double v) const {
    const double span = hi > lo ? hi - lo : 1.0;
    return y1 - (v - lo) / span * (y1 - y0);
  }
};

Scale make_scale(double lo, double hi, double top) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  Scale scale;
  scale.lo = lo - pad;
  scale.hi = hi + pad;
  scale.y0 = top + kMarginTop;
  scale.y1 = top + kPanelHeight - kMarginBottom;
  return scale;
}

void begin_svg(std::ostringstream& out, long panels) {
  const double height = kPanelHeight * static_cast<double>(panels);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << kWidth << ' ' << height
      << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void panel_frame(std::ostringstream& out, const Scale& scale, const std::string& label) {
  out << "<rect x=\"" << num(kMarginLeft) << "\" y=\"" << num(scale.y0) << "\" width=\""
      << num(kWidth - kMarginLeft - kMarginRight) << "\" height=\""
      << num(scale.y1 - scale.y0)
      << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
  out << "<text x=\"8\" y=\"" << num(scale.y0 + 14)
      << "\" font-family=\"monospace\" font-size=\"12\">" << label << "</text>\n";
  out << "<text x=\"8\" y=\"" << num(scale.y0 + 28)
      << "\" font-family=\"monospace\" font-size=\"10\">" << num(scale.hi) << "</text>\n";
  out << "<text x=\"8\" y=\"" << num(scale.y1)
      << "\" font-family=\"monospace\" font-size=\"10\">" << num(scale.lo) << "</text>\n";
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << body;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void write_trace_svg(const Eigen::MatrixXd& states, const std::string& path) {
  const long n = states.rows();
  const long d = states.cols();
  if (n < 1 || d < 1) throw std::invalid_argument("trace plot needs a non-empty chain");

  const long stride = std::max<long>(1, (n + kMaxTracePoints - 1) / kMaxTracePoints);
  std::ostringstream out;
  begin_svg(out, d);
  for (long j = 0; j < d; ++j) {
    const Scale scale =
        make_scale(states.col(j).minCoeff(), states.col(j).maxCoeff(),
                   kPanelHeight * static_cast<double>(j));
    panel_frame(out, scale, "x" + std::to_string(j + 1));
    out << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1\" points=\"";
    const double x_span = kWidth - kMarginLeft - kMarginRight;
    for (long i = 0; i < n; i += stride) {
      const double px = kMarginLeft + (n > 1 ? static_cast<double>(i) /
                                                   static_cast<double>(n - 1) * x_span
                                             : 0.0);
      out << num(px) << ',' << num(scale.map(states(i, j))) << ' ';
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  write_file(path, out.str());
}

void write_acf_svg(const Eigen::MatrixXd& states, const std::string& path, long max_lag) {
  const long n = states.rows();
  const long d = states.cols();
  if (n < 2 || d < 1) throw std::invalid_argument("acf plot needs at least 2 states");
  const long lags = std::max<long>(1, std::min(max_lag, n / 2));

  std::ostringstream out;
  begin_svg(out, d);
  for (long j = 0; j < d; ++j) {
    const Scale scale = make_scale(-0.3, 1.0, kPanelHeight * static_cast<double>(j));
    panel_frame(out, scale, "acf x" + std::to_string(j + 1));

    const double x_span = kWidth - kMarginLeft - kMarginRight;
    const double bar_width = std::max(1.0, x_span / static_cast<double>(lags + 1) - 2.0);
    const double zero_y = scale.map(0.0);

    // Cutoff used by the integrated autocorrelation time.
    out << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(scale.map(0.05))
        << "\" x2=\"" << num(kWidth - kMarginRight) << "\" y2=\"" << num(scale.map(0.05))
        << "\" stroke=\"#c44040\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    out << "<text x=\"" << num(kWidth - kMarginRight + 4) << "\" y=\""
        << num(scale.map(0.05) + 4)
        << "\" font-size=\"10\" fill=\"#c44040\">0.05</text>\n";
    out << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(zero_y) << "\" x2=\""
        << num(kWidth - kMarginRight) << "\" y2=\"" << num(zero_y)
        << "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";

    for (long k = 0; k <= lags; ++k) {
      double rho = 1.0;
      if (k > 0) {
        try {
          rho = autocorrelation(states.col(j), k);
        } catch (const ConstantSeries&) {
          rho = 0.0;
        }
      }
      rho = std::clamp(rho, scale.lo, scale.hi);
      const double px = kMarginLeft +
                        static_cast<double>(k) / static_cast<double>(lags + 1) * x_span;
      const double top = std::min(zero_y, scale.map(rho));
      const double height = std::abs(scale.map(rho) - zero_y);
      out << "<rect x=\"" << num(px) << "\" y=\"" << num(top) << "\" width=\""
          << num(bar_width) << "\" height=\"" << num(height)
          << "\" fill=\"#1f6fb2\"/>\n";
    }
  }
  out << "</svg>\n";
  write_file(path, out.str());
}

void write_sigma_svg(const std::vector<AdaptTraceRow>& trace, const std::string& path) {
  if (trace.empty()) throw std::invalid_argument("sigma plot needs a non-empty trace");
  double lo = std::exp(trace.front().log_sigma);
  double hi = lo;
  for (const auto& row : trace) {
    lo = std::min(lo, std::exp(row.log_sigma));
    hi = std::max(hi, std::exp(row.log_sigma));
  }

  std::ostringstream out;
  begin_svg(out, 1);
  const Scale scale = make_scale(lo, hi, 0.0);
  panel_frame(out, scale, "sigma");
  out << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1\" points=\"";
  const double x_span = kWidth - kMarginLeft - kMarginRight;
  const long n = static_cast<long>(trace.size());
  for (long i = 0; i < n; ++i) {
    const double px =
        kMarginLeft +
        (n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) * x_span : 0.0);
    out << num(px) << ',' << num(scale.map(std::exp(trace[static_cast<std::size_t>(i)].log_sigma)))
        << ' ';
  }
  out << "\"/>\n</svg>\n";
  write_file(path, out.str());
}

}  // namespace dirmh
