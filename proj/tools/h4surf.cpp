// Command-line front end: analyze single points, sweep sample grids into
// CSV/JSONL reports, and run the structural identity checks of the library
// against a surface specification file.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "h4/checks.hpp"
#include "h4/report.hpp"
#include "h4/surface_spec.hpp"

namespace {

struct CommonArgs {
  std::string spec_path;
  std::optional<double> eps_k;
  std::optional<double> eps_reg;
};

void add_common(CLI::App& cmd, CommonArgs& args) {
  cmd.add_option("spec", args.spec_path, "surface specification file (JSON)")->required();
  cmd.add_option("--eps-k", args.eps_k, "zero-curvature threshold override (absolute)")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--eps-reg", args.eps_reg, "regularity threshold override (relative)")
      ->check(CLI::PositiveNumber);
}

h4::AnalysisOptions overrides_of(const CommonArgs& args) {
  h4::AnalysisOptions o;
  o.eps_k = args.eps_k;
  o.eps_reg = args.eps_reg;
  return o;
}

int run_analyze(const CommonArgs& args, const std::vector<double>& at, const std::string& format) {
  const h4::SurfaceSpec spec = h4::load_surface_spec_file(args.spec_path);
  const double u = at[0], v = at[1], w = at[2];
  if (!spec.surface.contains(u, v, w))
    throw h4::SpecError("point (" + h4::format_double(u) + ", " + h4::format_double(v) + ", " +
                        h4::format_double(w) + ") lies outside the domain box");
  const h4::PointReport report =
      h4::analyze_point(spec.surface, u, v, w, h4::merge_options(spec, overrides_of(args)));
  if (format == "csv")
    std::cout << h4::kCsvHeader << '\n' << h4::csv_row(report) << '\n';
  else if (format == "jsonl")
    std::cout << h4::jsonl_row(report) << '\n';
  else
    std::cout << h4::text_report(report);
  return 0;
}

int run_grid(const CommonArgs& args, const std::string& out_path, const std::string& format) {
  const h4::SurfaceSpec spec = h4::load_surface_spec_file(args.spec_path);
  const h4::AnalysisOptions opt = h4::merge_options(spec, overrides_of(args));

  std::vector<h4::PointReport> rows;
  long regular = 0;
  for (const auto& p : h4::grid_points(spec)) {
    rows.push_back(h4::grid_point_report(spec.surface, p[0], p[1], p[2], opt));
    if (rows.back().ok) ++regular;
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
  if (format == "jsonl")
    h4::write_grid_jsonl(out, rows);
  else
    h4::write_grid_csv(out, rows);
  out.flush();
  if (!out) throw std::runtime_error("failed writing output file '" + out_path + "'");

  std::cout << rows.size() << " points, " << regular << " regular, " << (rows.size() - static_cast<std::size_t>(regular))
            << " singular -> " << out_path << '\n';
  if (regular < 1) {
    std::cerr << "error [grid]: no regular point in the sample grid\n";
    return 1;
  }
  return 0;
}

int run_check(const CommonArgs& args) {
  const h4::SurfaceSpec spec = h4::load_surface_spec_file(args.spec_path);
  const h4::CheckReport report = h4::run_identity_checks(spec, overrides_of(args));
  std::cout << h4::format_check_report(report);
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weingarten map, curvatures and point classification of hypersurfaces in E4"};
  app.require_subcommand(1);

  CommonArgs analyze_args;
  std::vector<double> at;
  std::string analyze_format = "text";
  CLI::App* analyze = app.add_subcommand("analyze", "full report at a single parameter point");
  add_common(*analyze, analyze_args);
  analyze->add_option("--at", at, "parameter point u,v,w")->delimiter(',')->expected(3)->required();
  analyze->add_option("--format", analyze_format, "output format")
      ->check(CLI::IsMember({"text", "csv", "jsonl"}));

  CommonArgs grid_args;
  std::string out_path;
  std::string grid_format = "csv";
  CLI::App* grid = app.add_subcommand("grid", "sweep the sample grid into a report file");
  add_common(*grid, grid_args);
  grid->add_option("--out", out_path, "output file path")->required();
  grid->add_option("--format", grid_format, "output format")->check(CLI::IsMember({"csv", "jsonl"}));

  CommonArgs check_args;
  CLI::App* check = app.add_subcommand("check", "run the structural identity checks over the grid");
  add_common(*check, check_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return run_analyze(analyze_args, at, analyze_format);
    if (grid->parsed()) return run_grid(grid_args, out_path, grid_format);
    return run_check(check_args);
  } catch (const h4::SpecError& e) {
    std::cerr << "error [spec]: " << e.what() << '\n';
  } catch (const h4::ParseError& e) {
    std::cerr << "error [parse]: " << e.what() << '\n';
  } catch (const h4::NotRegularError& e) {
    std::cerr << "error [frame]: " << e.what() << '\n';
  } catch (const h4::ZeroGradientError& e) {
    std::cerr << "error [implicit]: " << e.what() << '\n';
  } catch (const h4::DomainError& e) {
    std::cerr << "error [evaluate]: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << '\n';
  }
  return 1;
}
