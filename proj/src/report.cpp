#include "infogain/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "infogain/errors.hpp"

namespace infogain {

namespace {

constexpr int kMarginLeft = 160;
constexpr int kMarginRight = 30;
constexpr int kMarginTop = 56;
constexpr int kMarginBottom = 48;
constexpr int kStripHeight = 16;
constexpr int kGroupGap = 10;
constexpr int kDensityPoints = 160;
constexpr double kMinSpan = 0.05;

std::string fixed(double v, int decimals = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string escape_xml(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  return quantile_type7(v, 0.5);
}

struct Axis {
  double lo, hi, step;
  std::vector<double> ticks;
};

Axis nice_axis(double lo, double hi) {
  if (hi - lo < kMinSpan) hi = lo + kMinSpan;
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = 10.0 * mag;
  for (double m : {1.0, 2.0, 2.5, 5.0}) {
    if (m * mag >= raw * (1.0 - 1e-12)) {
      step = m * mag;
      break;
    }
  }
  Axis a;
  a.step = step;
  const auto k_lo = static_cast<long long>(std::floor(lo / step + 1e-9));
  auto k_hi = static_cast<long long>(std::ceil(hi / step - 1e-9));
  a.lo = static_cast<double>(k_lo) * step;
  a.hi = static_cast<double>(k_hi) * step;
  while (a.lo > lo) a.lo -= step;
  while (a.hi < hi) a.hi = static_cast<double>(++k_hi) * step;
  for (long long k = k_lo; k <= k_hi; ++k) a.ticks.push_back(static_cast<double>(k) * step);
  return a;
}

int tick_decimals(double step) {
  int d = 0;
  while (d < 8 && std::fabs(step * std::pow(10.0, d) - std::round(step * std::pow(10.0, d))) > 1e-9) ++d;
  return d;
}

}  // namespace

std::string_view role_color(Role role) {
  switch (role) {
    case Role::kHuman: return "#d95f02";
    case Role::kAi: return "#1b9e77";
    case Role::kHumanAi: return "#7570b3";
    case Role::kOther: break;
  }
  return "#666666";
}

double silverman_bandwidth(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) return 0.0;
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_type7(sorted, 0.75) - quantile_type7(sorted, 0.25);
  const double scale = std::pow(static_cast<double>(n), -0.2);
  const double spread = std::min(sd, iqr / 1.34);
  return spread > 0.0 ? 0.9 * spread * scale : 1.06 * sd * scale;
}

PlotSpec build_plot_spec(std::span<const BootstrapResult> results,
                         std::optional<std::pair<double, double>> axis) {
  if (results.empty()) throw SchemaError("no-results", "", "at least one bootstrap result is required");
  const auto& first = results.front();
  const std::set<std::string> signal_set(first.signals.begin(), first.signals.end());
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].schema_fingerprint != first.schema_fingerprint) {
      throw SchemaError("mixed-schemas", "results[" + std::to_string(i) + "]",
                        "result was computed under a different schema");
    }
    if (std::set<std::string>(results[i].signals.begin(), results[i].signals.end()) != signal_set) {
      throw SchemaError("mismatched-signals", "results[" + std::to_string(i) + "]",
                        "results cover different signal sets");
    }
  }

  std::map<std::string, SignalGroup> by_signal;
  for (const auto& s : first.signals) by_signal[s].signal = s;
  for (const auto& r : results) {
    for (const auto& stat : r.statistics) {
      if (stat.kind != "shapley") continue;
      by_signal[stat.signal].strips.push_back({stat.ground_label, stat.ground_role, stat.samples});
    }
  }

  PlotSpec spec;
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t i = 0; i < first.signals.size(); ++i) {
    const SignalGroup& g = by_signal[first.signals[i]];
    if (g.strips.empty()) {
      throw SchemaError("empty-group", first.signals[i], "no Shapley statistics for this signal");
    }
    const Strip* key = &g.strips.front();
    for (const auto& s : g.strips) {
      if (s.role == Role::kHuman) {
        key = &s;
        break;
      }
    }
    order.emplace_back(median_of(key->samples), i);
  }
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [median, i] : order) spec.groups.push_back(std::move(by_signal[first.signals[i]]));

  double lo = 0.0, hi = 0.0;
  bool seen = false;
  for (const auto& g : spec.groups) {
    for (const auto& s : g.strips) {
      for (double x : s.samples) {
        lo = seen ? std::min(lo, x) : std::min(0.0, x);
        hi = seen ? std::max(hi, x) : std::max(0.0, x);
        seen = true;
      }
    }
  }
  if (axis) {
    if (!(axis->first < axis->second)) throw SchemaError("invalid-axis", "axis", "axis lo must be below hi");
    lo = std::min(lo, axis->first);
    hi = std::max(hi, axis->second);
  }
  Axis a = nice_axis(lo, hi);
  if (axis && a.lo <= axis->first && axis->second <= a.hi && lo >= axis->first && hi <= axis->second) {
    // Respect an explicit range exactly when it already covers the data.
    a.lo = axis->first;
    a.hi = axis->second;
    a.ticks.erase(std::remove_if(a.ticks.begin(), a.ticks.end(),
                                 [&](double t) { return t < a.lo - 1e-12 || t > a.hi + 1e-12; }),
                  a.ticks.end());
  }
  spec.axis_lo = a.lo;
  spec.axis_hi = a.hi;
  spec.ticks = std::move(a.ticks);

  std::size_t strips = 0;
  for (const auto& g : spec.groups) strips += g.strips.size();
  spec.height = kMarginTop + kMarginBottom + static_cast<int>(strips) * kStripHeight +
                static_cast<int>(spec.groups.size()) * kGroupGap;
  spec.title = "Information gain by signal";
  return spec;
}

std::string render_svg(const PlotSpec& spec) {
  const int plot_w = spec.width - kMarginLeft - kMarginRight;
  const double span = spec.axis_hi - spec.axis_lo;
  auto x_of = [&](double v) { return kMarginLeft + (v - spec.axis_lo) / span * plot_w; };
  const int plot_bottom = spec.height - kMarginBottom;

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width << "\" height=\""
    << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height << "\" fill=\"#ffffff\"/>\n";
  o << "<text x=\"" << kMarginLeft << "\" y=\"18\" font-size=\"13\">" << escape_xml(spec.title) << "</text>\n";

  // Legend in order of first appearance.
  std::vector<std::pair<std::string, Role>> legend;
  for (const auto& g : spec.groups) {
    for (const auto& s : g.strips) {
      const std::pair<std::string, Role> key{s.ground_label, s.role};
      if (std::find(legend.begin(), legend.end(), key) == legend.end()) legend.push_back(key);
    }
  }
  o << "<g id=\"legend\">\n";
  int lx = kMarginLeft;
  for (const auto& [label, role] : legend) {
    o << "<rect x=\"" << lx << "\" y=\"28\" width=\"10\" height=\"10\" fill=\"" << role_color(role) << "\"/>\n";
    o << "<text x=\"" << lx + 14 << "\" y=\"37\">" << escape_xml(label) << "</text>\n";
    lx += 24 + 7 * static_cast<int>(label.size());
  }
  o << "</g>\n";

  const int dec = spec.ticks.size() > 1 ? tick_decimals(spec.ticks[1] - spec.ticks[0]) : 2;
  o << "<g id=\"axis\" stroke=\"#cccccc\" stroke-width=\"0.5\">\n";
  for (double t : spec.ticks) {
    o << "<line x1=\"" << fixed(x_of(t)) << "\" y1=\"" << kMarginTop - 4 << "\" x2=\"" << fixed(x_of(t))
      << "\" y2=\"" << plot_bottom << "\"/>\n";
  }
  o << "</g>\n<g id=\"tick-labels\" text-anchor=\"middle\">\n";
  for (double t : spec.ticks) {
    o << "<text x=\"" << fixed(x_of(t)) << "\" y=\"" << plot_bottom + 16 << "\">" << fixed(t, dec) << "</text>\n";
  }
  o << "</g>\n";
  o << "<text x=\"" << fixed(kMarginLeft + plot_w / 2.0) << "\" y=\"" << plot_bottom + 36
    << "\" text-anchor=\"middle\">information gain (payoff units)</text>\n";

  int y = kMarginTop;
  for (const auto& g : spec.groups) {
    const int group_h = static_cast<int>(g.strips.size()) * kStripHeight;
    o << "<g class=\"signal\" id=\"signal-" << escape_xml(g.signal) << "\">\n";
    o << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fixed(y + group_h / 2.0 + 4)
      << "\" text-anchor=\"end\">" << escape_xml(g.signal) << "</text>\n";
    for (const auto& s : g.strips) {
      const std::string color(role_color(s.role));
      const double base = y + kStripHeight - 1.0;
      o << "<g class=\"strip\" data-ground=\"" << escape_xml(s.ground_label) << "\">\n";
      const double bw = silverman_bandwidth(s.samples);
      if (bw == 0.0) {
        const double x = x_of(s.samples.empty() ? 0.0 : s.samples.front());
        o << "<line x1=\"" << fixed(x) << "\" y1=\"" << y + 1 << "\" x2=\"" << fixed(x) << "\" y2=\"" << fixed(base)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      } else {
        std::vector<double> dens(kDensityPoints + 1);
        const double norm = 1.0 / (static_cast<double>(s.samples.size()) * bw * std::sqrt(2.0 * std::numbers::pi));
        double peak = 0.0;
        for (int k = 0; k <= kDensityPoints; ++k) {
          const double v = spec.axis_lo + span * k / kDensityPoints;
          double sum = 0.0;
          for (double x : s.samples) {
            const double z = (v - x) / bw;
            sum += std::exp(-0.5 * z * z);
          }
          dens[k] = sum * norm;
          peak = std::max(peak, dens[k]);
        }
        o << "<path d=\"M" << fixed(x_of(spec.axis_lo)) << ',' << fixed(base);
        for (int k = 0; k <= kDensityPoints; ++k) {
          const double v = spec.axis_lo + span * k / kDensityPoints;
          o << " L" << fixed(x_of(v)) << ',' << fixed(base - (kStripHeight - 3) * dens[k] / peak);
        }
        o << " L" << fixed(x_of(spec.axis_hi)) << ',' << fixed(base) << " Z\" fill=\"" << color
          << "\" fill-opacity=\"0.55\" stroke=\"" << color << "\" stroke-width=\"0.75\"/>\n";
        const double xm = x_of(median_of(s.samples));
        o << "<line x1=\"" << fixed(xm) << "\" y1=\"" << y + 1 << "\" x2=\"" << fixed(xm) << "\" y2=\""
          << fixed(base) << "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
      }
      o << "</g>\n";
      y += kStripHeight;
    }
    o << "</g>\n";
    y += kGroupGap;
  }
  o << "</svg>\n";
  return o.str();
}

std::string summary_table(const BootstrapResult& result) {
  std::size_t w = 9;
  for (const auto& s : result.statistics) w = std::max(w, s.name.size());
  std::ostringstream o;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-*s %10s %10s %10s %10s %10s %10s\n", static_cast<int>(w), "statistic",
                "estimate", "mean", "sd", "q2.5", "median", "q97.5");
  o << buf;
  for (const auto& s : result.statistics) {
    std::snprintf(buf, sizeof buf, "%-*s %10.5f %10.5f %10.5f %10.5f %10.5f %10.5f\n", static_cast<int>(w),
                  s.name.c_str(), s.estimate, s.mean, s.sd, s.quantiles[0], s.quantiles[2], s.quantiles[4]);
    o << buf;
  }
  return o.str();
}

std::string summary_table(const ShapleyReport& report) {
  std::size_t w = 6;
  for (const auto& n : report.signal_names) w = std::max(w, n.size());
  std::ostringstream o;
  char buf[160];
  o << "ground: " << report.ground_label << " ("
    << (report.method == ShapleyMethod::kExact ? "exact" : "sampled, " + std::to_string(report.permutations) +
                                                                " permutations")
    << ")\n";
  const bool se = report.method == ShapleyMethod::kSampled;
  std::snprintf(buf, sizeof buf, "%-*s %12s%s\n", static_cast<int>(w), "signal", "phi", se ? "     std_err" : "");
  o << buf;
  for (std::size_t i = 0; i < report.phi.size(); ++i) {
    if (se) {
      std::snprintf(buf, sizeof buf, "%-*s %12.6f %12.6f\n", static_cast<int>(w), report.signal_names[i].c_str(),
                    report.phi[i], report.std_error[i]);
    } else {
      std::snprintf(buf, sizeof buf, "%-*s %12.6f\n", static_cast<int>(w), report.signal_names[i].c_str(),
                    report.phi[i]);
    }
    o << buf;
  }
  std::snprintf(buf, sizeof buf, "%-*s %12.6f\n", static_cast<int>(w), "total", report.total_gain);
  o << buf;
  return o.str();
}

}  // namespace infogain
