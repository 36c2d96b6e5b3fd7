#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "qtdt/power.hpp"

namespace qtdt {

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_f6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_results_csv(const std::vector<PowerRow>& rows, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "delta_star,variant,power,mc_se,replications\n";
  for (const PowerRow& row : rows)
    out << fmt_g(row.delta_star) << ',' << to_string(row.variant) << ','
        << fmt_f6(row.power) << ',' << fmt_f6(row.mc_se) << ',' << row.replications << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_power_svg(const ScenarioResult& result, const std::string& path) {
  const int width = 720, height = 480;
  const int left = 70, right = 30, top = 30, bottom = 60;
  const int plot_w = width - left - right;
  const int plot_h = height - top - bottom;

  double x_min = result.cells.front().delta_star;
  double x_max = x_min;
  for (const DeltaSummary& cell : result.cells) {
    x_min = std::min(x_min, cell.delta_star);
    x_max = std::max(x_max, cell.delta_star);
  }
  if (x_max == x_min) x_max = x_min + 1.0;

  const auto px = [&](double delta) {
    return left + plot_w * (delta - x_min) / (x_max - x_min);
  };
  const auto py = [&](double power) { return top + plot_h * (1.0 - power); };

  std::ofstream out = open_for_write(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  for (int i = 0; i <= 10; ++i) {
    const double level = i / 10.0;
    out << "<line x1=\"" << left << "\" y1=\"" << fmt_g(py(level)) << "\" x2=\""
        << left + plot_w << "\" y2=\"" << fmt_g(py(level))
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << fmt_g(py(level) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << fmt_g(level) << "</text>\n";
  }
  for (const DeltaSummary& cell : result.cells) {
    out << "<line x1=\"" << fmt_g(px(cell.delta_star)) << "\" y1=\"" << top + plot_h
        << "\" x2=\"" << fmt_g(px(cell.delta_star)) << "\" y2=\"" << top + plot_h + 6
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt_g(px(cell.delta_star)) << "\" y=\"" << top + plot_h + 22
        << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt_g(cell.delta_star)
        << "</text>\n";
  }
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 16
      << "\" font-size=\"14\" text-anchor=\"middle\">delta*</text>\n"
      << "<text x=\"18\" y=\"" << top + plot_h / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + plot_h / 2 << ")\">power</text>\n";

  // Line colours follow the convention green / blue / red for the
  // no-missing / imputed / deleted datasets.
  const char* colors[3] = {"#2ca02c", "#1f77b4", "#d62728"};
  for (const Variant variant :
       {Variant::NoMissing, Variant::Imputed, Variant::Deleted}) {
    const int vi = static_cast<int>(variant);
    out << "<polyline fill=\"none\" stroke=\"" << colors[vi]
        << "\" stroke-width=\"2\" points=\"";
    for (const DeltaSummary& cell : result.cells)
      out << fmt_g(px(cell.delta_star)) << ',' << fmt_g(py(cell.power(variant))) << ' ';
    out << "\"/>\n";
    for (const DeltaSummary& cell : result.cells)
      out << "<circle cx=\"" << fmt_g(px(cell.delta_star)) << "\" cy=\""
          << fmt_g(py(cell.power(variant))) << "\" r=\"3\" fill=\"" << colors[vi]
          << "\"/>\n";
    out << "<text x=\"" << left + 12 << "\" y=\"" << top + 18 + 18 * vi
        << "\" font-size=\"13\" fill=\"" << colors[vi] << "\">" << to_string(variant)
        << "</text>\n";
  }
  out << "</svg>\n";
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_manifest(const ScenarioResult& result, const std::string& path) {
  const Scenario& scenario = result.scenario;
  std::ofstream out = open_for_write(path);
  out << "# resolved run parameters\n";
  out << "seed = " << scenario.master_seed << '\n';
  out << "n_families = " << scenario.n_families << '\n';
  out << "replications = " << scenario.replications << '\n';
  out << "alpha = " << fmt_g(scenario.alpha) << '\n';
  out << "d = " << fmt_g(scenario.d) << '\n';
  out << "m = " << fmt_g(scenario.m) << '\n';
  out << "theta = " << fmt_g(scenario.theta) << '\n';
  out << "delta_star =";
  for (std::size_t i = 0; i < scenario.delta_star_grid.size(); ++i)
    out << (i ? "," : " ") << fmt_g(scenario.delta_star_grid[i]);
  out << '\n';
  out << "mtype = " << to_string(scenario.mtype) << '\n';
  out << "miss_p = " << fmt_g(scenario.miss_p) << '\n';
  out << "deletion = " << to_string(scenario.deletion) << '\n';
  out << "strategy = "
      << (scenario.fixed_strategy ? to_string(*scenario.fixed_strategy) : "auto") << '\n';
  out << "rho1 = " << fmt_g(scenario.rho.cross_trait) << '\n';
  out << "rho2 = " << fmt_g(scenario.rho.cross_sib) << '\n';
  out << "centering = " << to_string(scenario.centering) << '\n';
  out << "threads_requested = " << scenario.threads
      << "  # results are identical for every thread count\n";

  const std::vector<TraitSpec> specs = scenario.resolve_traits();
  for (std::size_t t = 0; t < specs.size(); ++t) {
    const std::string prefix = "trait" + std::to_string(t + 1) + ".";
    out << prefix << "kind = " << to_string(specs[t].kind) << '\n';
    out << prefix << "alpha = " << fmt_g(specs[t].alpha) << '\n';
    out << prefix << "beta = " << fmt_g(specs[t].beta) << '\n';
    out << prefix << "residual = " << fmt_g(specs[t].residual) << '\n';
    if (specs[t].kind == TraitKind::BinaryThreshold)
      out << prefix << "c = " << fmt_g(specs[t].threshold) << '\n';
    else
      out << prefix << "p_star = " << fmt_g(scenario.traits[t].p_star) << '\n';
  }

  out << "\n# per-cell diagnostics\n";
  for (const DeltaSummary& cell : result.cells) {
    const std::string prefix = "delta[" + fmt_g(cell.delta_star) + "].";
    for (const Variant variant :
         {Variant::NoMissing, Variant::Imputed, Variant::Deleted}) {
      const int vi = static_cast<int>(variant);
      out << prefix << to_string(variant) << ".power = " << fmt_f6(cell.power(variant))
          << '\n';
      out << prefix << to_string(variant) << ".fit_errors = " << cell.fit_errors[vi] << '\n';
      out << prefix << to_string(variant) << ".nonconverged = " << cell.nonconverged[vi]
          << '\n';
    }
    if (scenario.mtype == MissingType::T2_1 && scenario.miss_p > 0.0) {
      out << prefix << "strategy.use_same = " << cell.strategy_counts[0] << '\n';
      out << prefix << "strategy.use_other = " << cell.strategy_counts[1] << '\n';
      out << prefix << "strategy.use_both = " << cell.strategy_counts[2] << '\n';
    }
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace qtdt
