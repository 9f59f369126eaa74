#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infogain/bootstrap.hpp"
#include "infogain/model.hpp"
#include "infogain/shapley.hpp"

namespace infogain {

struct Strip {
  std::string ground_label;
  Role role = Role::kOther;
  std::vector<double> samples;
};

struct SignalGroup {
  std::string signal;
  std::vector<Strip> strips;
};

struct PlotSpec {
  std::vector<SignalGroup> groups;  // top to bottom
  double axis_lo = 0.0;
  double axis_hi = 1.0;
  std::vector<double> ticks;
  int width = 800;
  int height = 0;
  std::string title;
};

// Palette keyed by role: human, ai, human_ai, other.
std::string_view role_color(Role role);

// One strip per (signal, Shapley ground) across all results. Signals are
// ordered by descending median on the human ground (or the first ground when
// no human ground is present). The axis always covers every sample; a
// requested range is widened if needed. Throws SchemaError on mismatched
// schemas or signal sets.
PlotSpec build_plot_spec(std::span<const BootstrapResult> results,
                         std::optional<std::pair<double, double>> axis = std::nullopt);

std::string render_svg(const PlotSpec& spec);

// Fixed-width text tables for terminals.
std::string summary_table(const BootstrapResult& result);
std::string summary_table(const ShapleyReport& report);

// Silverman's rule of thumb; 0 for a point mass.
double silverman_bandwidth(std::span<const double> samples);

}  // namespace infogain
