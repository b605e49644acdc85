// Command-line front end: generate, filter, fit, trace, pipeline, report.

#include "sdetect/diagnostics.hpp"
#include "sdetect/error.hpp"
#include "sdetect/filtering.hpp"
#include "sdetect/fitting.hpp"
#include "sdetect/io.hpp"
#include "sdetect/pipeline.hpp"
#include "sdetect/report.hpp"
#include "sdetect/serialize.hpp"
#include "sdetect/synthgen.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace sdetect;

namespace {

enum ExitCode
{
  ok = 0,
  io_failure = 1,
  invalid = 2,
  degenerate = 3
};

struct Options
{
  PipelineConfig cfg;
  std::string input;
  std::string domain;
  std::string out;
  std::string kept;
  std::string fit_path;
  std::string exact;
  std::size_t prefix{ 0 };
  bool table{ false };
};

void add_generator_options(CLI::App* cmd, Options& o)
{
  cmd->add_option("--curve", o.cfg.curve,
                  "circle, lshape, xshape, semicircles or poly:<file.json>")
    ->capture_default_str();
  cmd->add_option("--batches", o.cfg.gen.batches, "refinement steps R")->capture_default_str();
  cmd->add_option("--grid", o.cfg.gen.grid, "nodes per axis of the batch-0 grid")
    ->capture_default_str();
  cmd->add_option("--tube-points", o.cfg.gen.tube_points, "points over batches 1..R")
    ->capture_default_str();
  cmd->add_option("--tube-width", o.cfg.gen.tube_width, "w0")->capture_default_str();
  cmd->add_option("--decay", o.cfg.gen.decay, "q, width of batch i is w0 q^i")
    ->capture_default_str();
  cmd->add_option("--min-separation", o.cfg.gen.min_separation)->capture_default_str();
  cmd->add_option("--outliers", o.cfg.gen.outlier_fraction,
                  "fraction of uniform outliers added to each batch")
    ->capture_default_str();
  cmd->add_option("--seed", o.cfg.gen.seed)->capture_default_str();
  cmd->add_option("--max-attempts", o.cfg.gen.max_attempts, "proposals per batch")
    ->capture_default_str();
}

void add_filter_options(CLI::App* cmd, Options& o, const std::string& default_filter)
{
  o.cfg.filter = default_filter;
  auto* f = cmd->add_option("--filter", o.cfg.filter)->capture_default_str();
  if (default_filter == "none")
    f->check(CLI::IsMember({ "none", "kde", "knn" }));
  else
    f->check(CLI::IsMember({ "kde", "knn" }));
  cmd->add_option("--k", o.cfg.k, "kNN neighbour count")->capture_default_str();
  cmd->add_option("--gamma", o.cfg.gamma, "filter threshold factor in (0,1)")
    ->capture_default_str();
  cmd->add_option("--bandwidth", o.cfg.bandwidth, "KDE bandwidth: silverman or a number")
    ->capture_default_str();
  cmd->add_option("--prefix", o.prefix, "use only the first N (merged) points");
}

void add_fit_options(CLI::App* cmd, Options& o)
{
  cmd->add_option("--basis", o.cfg.basis, "poly:<n> or fourier:<J>:<M>")->capture_default_str();
  cmd->add_option("--weights", o.cfg.weights, "uniform, schedule:<b> or sigmas:<s0,s1,...>")
    ->capture_default_str();
}

void resolve_common(Options& o)
{
  if (!o.input.empty())
    o.cfg.input = o.input;
  if (o.prefix > 0)
    o.cfg.prefix = o.prefix;
  if (!o.domain.empty())
    o.cfg.domain = parse_domain(o.domain);
}

void print_warnings(const std::vector<std::string>& warnings)
{
  for (const auto& w : warnings)
    std::cerr << "warning: " << w << '\n';
}

int cmd_generate(Options& o)
{
  CurveSpec spec = CurveSpec::parse(o.cfg.curve);
  if (!o.domain.empty())
    spec = spec.with_domain(parse_domain(o.domain));
  const BatchedPointSet data = generate(spec, o.cfg.gen);
  if (o.out.empty()) {
    save_points(std::cout, data, PointFormat::csv);
  } else {
    save_points_file(o.out, data);
  }
  std::cerr << "generated " << data.total_size() << " points in " << data.batch_count()
            << " batches\n";
  return ok;
}

int cmd_filter(Options& o)
{
  resolve_common(o);
  const PointSet points = as_point_set(prepare_data(o.cfg));
  const FilterReport report = apply_filter(points, *o.cfg.filter_params());
  nlohmann::json j = to_json(report, points.size());
  j["config"] = o.cfg.to_json();
  if (o.out.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_json_file(o.out, j);
  if (!o.kept.empty())
    save_points_file(o.kept, report.kept);
  std::cerr << "kept " << report.kept_indices.size() << " of " << points.size() << " points\n";
  return ok;
}

int cmd_fit(Options& o, bool strict)
{
  resolve_common(o);
  const PointData data = prepare_data(o.cfg);
  const Basis basis = Basis::parse(o.cfg.basis);
  const DetectionResult result =
    detect(data, basis, WeightScheme::parse(o.cfg.weights), o.cfg.filter_params());
  const FitReport& fit = result.fit;
  print_warnings(fit.warnings);

  nlohmann::json j = to_json(fit);
  const auto domain = o.cfg.domain ? o.cfg.domain : domain_of(data);
  j["domain"] = domain ? domain_to_json(*domain) : nlohmann::json(nullptr);
  if (result.filter)
    j["n_kept"] = result.filter->kept_indices.size();
  std::optional<Eigen::VectorXd> exact;
  if (!o.exact.empty()) {
    exact = exact_coefficients(CurveSpec::parse(o.exact), basis);
    const CoefficientError e = coefficient_error(fit.coefficients, *exact);
    j["exact_curve"] = o.exact;
    j["coefficient_error"] = { { "l2", e.l2 }, { "max_abs", e.max_abs } };
  }
  j["config"] = o.cfg.to_json();

  if (o.out.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_json_file(o.out, j);
  if (o.table)
    std::cout << coefficient_table(basis, fit.coefficients, exact);
  return strict && fit.degenerate() ? degenerate : ok;
}

int cmd_trace(Options& o)
{
  const StoredFit fit = load_fit_file(o.fit_path);
  std::optional<RectDomain> domain;
  if (!o.domain.empty())
    domain = parse_domain(o.domain);
  else
    domain = fit.domain;
  if (!domain)
    throw ValidationError("no domain: pass --domain or use a fit report that records one");

  const TracedCurve curve = trace_zero_set(fit.model(), *domain, o.cfg.resolution);
  std::ostringstream text;
  if (std::filesystem::path(o.out).extension() == ".svg") {
    SvgLayers layers;
    if (!o.input.empty())
      layers.input = as_point_set(load_points_file(o.input));
    layers.metadata = "fit=" + o.fit_path;
    write_curve_svg(text, curve, layers);
  } else {
    write_curve_csv(text, curve);
  }
  if (o.out.empty())
    std::cout << text.str();
  else
    write_text_file(o.out, text.str());

  std::cerr << curve.segments.size() << " segments, " << curve.vertex_count() << " vertices\n";
  if (o.cfg.radius_samples > 0 && !curve.empty()) {
    const RadiusSamples r = radius_function(curve, o.cfg.radius_samples);
    std::cerr << "mean radius over " << r.count() << " samples: " << format_double(r.mean())
              << '\n';
  }
  return ok;
}

int cmd_pipeline(Options& o)
{
  resolve_common(o);
  if (!o.out.empty())
    o.cfg.out_dir = o.out;
  const PipelineResult r = run_pipeline(o.cfg, std::cerr);
  const FitReport& fit = r.detection.fit;
  std::cout << "points: " << as_point_set(r.data).size() << '\n';
  if (r.detection.filter)
    std::cout << "kept: " << r.detection.filter->kept_indices.size() << '\n';
  std::cout << "residual: " << format_double(fit.residual) << '\n'
            << "eigen_gap: " << format_double(fit.eigen_gap) << '\n';
  if (r.error)
    std::cout << "coefficient error (L2, sign-aligned): " << format_double(r.error->l2) << '\n';
  if (r.radius)
    std::cout << "mean radius: " << format_double(r.radius->mean()) << '\n';
  std::cout << "artifacts: " << o.cfg.out_dir.string() << '\n';
  return o.cfg.strict && fit.degenerate() ? degenerate : ok;
}

int cmd_report(Options& o)
{
  const StoredFit fit = load_fit_file(o.fit_path);
  std::optional<Eigen::VectorXd> exact;
  if (!o.exact.empty())
    exact = exact_coefficients(CurveSpec::parse(o.exact), fit.basis);
  const Eigen::VectorXd c = fit.coefficients / fit.coefficients.norm();
  const std::string table = coefficient_table(fit.basis, c, exact);
  if (o.out.empty())
    std::cout << table;
  else
    write_text_file(o.out, table);
  return ok;
}

/// Splices `--config <file>` (TOML, keys named like the flags) into the
/// argument list right after the subcommand, so later command-line flags win.
std::vector<std::string> expand_config(int argc, char** argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> out;
  std::vector<std::string> from_file;
  std::string subcommand;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string file;
    if (args[i] == "--config" && i + 1 < args.size())
      file = args[++i];
    else if (args[i].starts_with("--config="))
      file = args[i].substr(9);
    else {
      if (subcommand.empty() && !args[i].starts_with("-"))
        subcommand = args[i];
      out.push_back(args[i]);
      continue;
    }
    std::ifstream in(file);
    if (!in)
      throw IoError("cannot open config file " + file);
    for (const CLI::ConfigItem& item : CLI::ConfigTOML().from_config(in)) {
      if (item.name == "++" || item.name == "--")
        continue; // section markers
      if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == subcommand))
        continue;
      std::string key = item.name;
      std::replace(key.begin(), key.end(), '_', '-');
      std::string value;
      for (std::size_t v = 0; v < item.inputs.size(); ++v)
        value += (v ? "," : "") + item.inputs[v];
      from_file.push_back("--" + key + "=" + value);
    }
  }
  if (from_file.empty())
    return out;
  const auto pos = std::find(out.begin(), out.end(), subcommand);
  if (pos == out.end())
    return out;
  out.insert(pos + 1, from_file.begin(), from_file.end());
  return out;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Singularity-curve detection from adaptive-mesh vertex data" };
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_file;
  app.set_version_flag("--version", "sdetect 1.0");

  Options o;
  bool strict = false;
  std::function<int()> run;

  auto* gen = app.add_subcommand("generate", "synthetic batched point set around a known curve");
  gen->add_option("--config", config_file, "TOML file whose keys mirror the flag names");
  add_generator_options(gen, o);
  gen->add_option("--domain", o.domain, "xmin,xmax,ymin,ymax (default: the curve's own)");
  gen->add_option("--out", o.out, "output .csv or .json (default: CSV on stdout)");
  gen->callback([&] { run = [&] { return cmd_generate(o); }; });

  auto* flt = app.add_subcommand("filter", "KDE or kNN density filtering");
  flt->add_option("--config", config_file, "TOML file whose keys mirror the flag names");
  flt->add_option("--input", o.input, "points (.csv or .json)")->required();
  add_filter_options(flt, o, "knn");
  flt->add_option("--out", o.out, "filter report JSON (default: stdout)");
  flt->add_option("--kept", o.kept, "write the kept points to this file");
  flt->callback([&] { run = [&] { return cmd_filter(o); }; });

  auto* fit = app.add_subcommand("fit", "unit-norm least-squares fit of the detection function");
  fit->add_option("--config", config_file, "TOML file whose keys mirror the flag names");
  fit->add_option("--input", o.input, "points (.csv or .json)")->required();
  add_filter_options(fit, o, "none");
  add_fit_options(fit, o);
  fit->add_option("--domain", o.domain, "xmin,xmax,ymin,ymax recorded for tracing");
  fit->add_option("--exact", o.exact, "known curve to compare against");
  fit->add_option("--out", o.out, "fit report JSON (default: stdout)");
  fit->add_flag("--table", o.table, "print the coefficient table");
  fit->add_flag("--strict", strict, "exit 3 on rank-deficient or non-unique fits");
  fit->callback([&] { run = [&] { return cmd_fit(o, strict); }; });

  auto* trc = app.add_subcommand("trace", "zero level set of a fitted detection function");
  trc->add_option("--config", config_file, "TOML file whose keys mirror the flag names");
  trc->add_option("--fit", o.fit_path, "fit report JSON")->required();
  trc->add_option("--resolution", o.cfg.resolution, "grid cells per axis")
    ->capture_default_str()
    ->check(CLI::Range(2, 1 << 14));
  trc->add_option("--domain", o.domain, "xmin,xmax,ymin,ymax (default: from the fit report)");
  trc->add_option("--input", o.input, "points drawn under the curve in SVG output");
  trc->add_option("--radius-samples", o.cfg.radius_samples,
                  "report the mean distance to the origin over N arc-length samples (0: off)")
    ->capture_default_str();
  trc->add_option("--out", o.out, "curve.csv or curve.svg (default: CSV on stdout)");
  trc->callback([&] { run = [&] { return cmd_trace(o); }; });

  auto* pipe = app.add_subcommand("pipeline", "generate or read, filter, fit, trace, report");
  pipe->add_option("--config", config_file, "TOML file whose keys mirror the flag names");
  pipe->add_option("--input", o.input, "points (.csv or .json); generator used otherwise");
  add_generator_options(pipe, o);
  add_filter_options(pipe, o, "none");
  add_fit_options(pipe, o);
  pipe->add_option("--resolution", o.cfg.resolution)->capture_default_str()->check(
    CLI::Range(2, 1 << 14));
  pipe->add_option("--radius-samples", o.cfg.radius_samples)->capture_default_str();
  pipe->add_option("--domain", o.domain, "xmin,xmax,ymin,ymax for tracing");
  pipe->add_option("--out-dir", o.out, "artifact directory (default: out)");
  pipe->add_flag("--strict", o.cfg.strict, "exit 3 on rank-deficient or non-unique fits");
  pipe->callback([&] { run = [&] { return cmd_pipeline(o); }; });

  auto* rep = app.add_subcommand("report", "coefficient table of a fit report");
  rep->add_option("--config", config_file, "TOML file whose keys mirror the flag names");
  rep->add_option("--fit", o.fit_path, "fit report JSON")->required();
  rep->add_option("--exact", o.exact, "known curve: circle, lshape, xshape, semicircles");
  rep->add_option("--out", o.out, "text file (default: stdout)");
  rep->callback([&] { run = [&] { return cmd_report(o); }; });

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return io_failure;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : invalid;
  }

  try {
    return run();
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return io_failure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return io_failure;
  }
}
