#include "twinbeam/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "twinbeam/analysis.hpp"
#include "twinbeam/clipping_noise.hpp"
#include "twinbeam/config.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/oracle.hpp"
#include "twinbeam/output.hpp"
#include "twinbeam/validation.hpp"

namespace twinbeam {

namespace {

struct Context {
  RunConfig config;
  OutputSink sink;
  std::ostream& out;
};

std::string plane_tag(std::size_t index, int oam, const PlaneSpec& p) {
  return fmt::format("p{}_l{}_z{:.6g}zR", index, oam, p.z_over_zr);
}

Grid2D grid_for(const RunConfig& c, const PlaneSpec& p) {
  return Grid2D(c.grid_n, c.half_extent_m.value_or(preset_half_extent(p.z_over_zr)));
}

// Closed-form amplitude, or with the exact-sinc difference factor tabulated out to r_max.
TwoPhotonAmplitude make_amplitude(const RunConfig& c, const PumpParams& pump, const PlaneSpec& p, double r_max) {
  const Plane plane(p.z_m, pump);
  TwoPhotonAmplitude a(plane, pump, c.medium, c.approx);
  if (c.mode == SincMode::exact)
    a.use_difference_table(difference_table(plane, pump, c.medium, c.approx, SincMode::exact, r_max, c.table_samples,
                                            QuadratureSpec{}, c.threads));
  return a;
}

Json map_metadata(const DistributionMap& m, const char* kind) {
  return {{"kind", kind},
          {"axis_x", m.axis_x},
          {"axis_y", m.axis_y},
          {"fixed", m.fixed},
          {"z_m", m.z},
          {"z_over_zr", m.z_over_zr},
          {"oam", m.oam},
          {"grid", {{"n", m.grid.size()}, {"half_extent_m", m.grid.half_extent()}, {"spacing_m", m.grid.spacing()}}}};
}

void emit_map(Context& ctx, const std::string& stem, const DistributionMap& m, const char* kind) {
  const Json meta = map_metadata(m, kind);
  if (ctx.config.format != OutputFormat::pgm) ctx.sink.write(stem + ".csv", map_to_csv(m), "csv", meta);
  if (ctx.config.format != OutputFormat::csv) ctx.sink.write(stem + ".pgm", map_to_pgm(m), "pgm", meta);
}

void emit_table(Context& ctx, const std::string& name, const CsvTable& t, const Json& meta = Json::object()) {
  ctx.sink.write(name, t.render(), "csv", meta);
}

int cmd_joint(Context& ctx) {
  const RunConfig& c = ctx.config;
  for (std::size_t i = 0; i < c.planes.size(); ++i) {
    const Grid2D g = grid_for(c, c.planes[i]);
    const double r_max = std::hypot(c.slice_x_probe - c.slice_x_conjugate, 2.0 * g.half_extent()) * 1.01;
    const auto a = make_amplitude(c, c.pump, c.planes[i], r_max);
    const DistributionMap m = joint_slice(a, c.slice_x_probe, c.slice_x_conjugate, g, c.threads);
    emit_map(ctx, "joint_" + plane_tag(i, c.pump.oam(), c.planes[i]), m, "joint_slice");
  }
  return exit_ok;
}

double conditional_r_max(const RunConfig& c, const Grid2D& g) {
  return (c.probe.norm() + std::sqrt(2.0) * g.half_extent()) * 1.01;
}

int cmd_conditional(Context& ctx) {
  const RunConfig& c = ctx.config;
  for (std::size_t i = 0; i < c.planes.size(); ++i) {
    const Grid2D g = grid_for(c, c.planes[i]);
    const auto a = make_amplitude(c, c.pump, c.planes[i], conditional_r_max(c, g));
    emit_map(ctx, "conditional_" + plane_tag(i, c.pump.oam(), c.planes[i]), conditional_map(a, c.probe, g, c.threads),
             "conditional");
  }
  return exit_ok;
}

int cmd_profile(Context& ctx) {
  const RunConfig& c = ctx.config;
  CsvTable summary({"z_m", "z_over_zr", "oam", "width_1e2_m", "peak_x_m", "zero_index"});
  for (std::size_t i = 0; i < c.planes.size(); ++i) {
    const Grid2D g = grid_for(c, c.planes[i]);
    const auto a = make_amplitude(c, c.pump, c.planes[i], conditional_r_max(c, g));
    const DistributionMap m = conditional_map(a, c.probe, g, c.threads);
    const LineProfile p = line_profile(m);
    CsvTable t({"x_c_m", "value"});
    std::size_t peak = 0;
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      t.add_row({format_number(p.coordinates[k]), format_number(p.values[k])});
      if (p.values[k] > p.values[peak]) peak = k;
    }
    Json meta = map_metadata(m, "line_profile");
    meta["zero_index"] = p.zero_index;
    emit_table(ctx, "profile_" + plane_tag(i, c.pump.oam(), c.planes[i]) + ".csv", t, meta);
    summary.add_row({format_number(m.z), format_number(m.z_over_zr), std::to_string(m.oam),
                     format_number(width_1e2(p)), format_number(p.coordinates[peak]), std::to_string(p.zero_index)});
  }
  emit_table(ctx, "profile_summary.csv", summary);
  return exit_ok;
}

int coherence_table(Context& ctx, const std::vector<int>& oams, const std::string& name) {
  const RunConfig& c = ctx.config;
  CsvTable t({"z_m", "z_over_zr", "oam", "area_m2", "pixel_count", "spacing_m", "grid_points", "refined_area_m2",
              "converged"});
  for (std::size_t i = 0; i < c.planes.size(); ++i) {
    const Grid2D g = grid_for(c, c.planes[i]);
    for (int l : oams) {
      const PumpParams pump(c.pump.waist(), c.pump.wavelength(), l);
      const auto a = make_amplitude(c, pump, c.planes[i], conditional_r_max(c, g));
      auto build = [&](const Grid2D& grid) { return conditional_map(a, c.probe, grid, c.threads); };
      const CoherenceAreaResult r = c.check_refinement ? coherence_area_checked(build, g) : coherence_area(build(g));
      t.add_row({format_number(c.planes[i].z_m), format_number(c.planes[i].z_over_zr), std::to_string(l),
                 format_number(r.area), std::to_string(r.pixel_count), format_number(r.spacing),
                 std::to_string(r.grid_points), r.refined_area ? format_number(*r.refined_area) : "",
                 r.converged ? (*r.converged ? "true" : "false") : ""});
    }
  }
  emit_table(ctx, name, t, {{"threshold", inv_e2}, {"probe_m", {c.probe.x, c.probe.y}}});
  return exit_ok;
}

int cmd_clipping(Context& ctx) {
  const RunConfig& c = ctx.config;
  // The exact-sinc amplitude keeps slowly decaying rings out to many radii,
  // so no finite lattice holds its energy to the truncation limit.
  if (c.mode == SincMode::exact)
    throw ConfigError("sinc.mode", "clipping-sweep needs sinc.mode=cos_gauss; the exact-sinc tails are not integrable on a lattice");
  CsvTable t({"fraction", "geometry", "z_m", "z_over_zr", "oam", "cut_probe_m", "cut_conjugate_m", "eta", "noise_snl"});
  for (double zr : c.clipping.planes_z_over_zr) {
    const PlaneSpec p{zr * c.pump.rayleigh_range(), zr};
    const TwoPhotonAmplitude a(Plane(p.z_m, c.pump), c.pump, c.medium, c.approx);
    const ClipLattice lattice(a, c.clipping.lattice);
    for (ClipGeometry g : c.clipping.geometries) {
      for (double f : c.clipping.fractions) {
        const ClipRow r = evaluate_scenario(lattice, ClipScenario{f, g, zr, c.clipping.noise}, c.clipping.proxy);
        t.add_row({format_number(r.fraction), to_string(r.geometry), format_number(r.z), format_number(r.z_over_zr),
                   std::to_string(r.oam), format_number(r.cut_probe), format_number(r.cut_conjugate),
                   format_number(r.eta), format_number(r.noise)});
      }
    }
  }
  emit_table(ctx, "clipping.csv", t,
             {{"retention", to_string(c.clipping.proxy)},
              {"squeezing_db", c.clipping.noise.squeezing_db},
              {"v_uncorrelated", c.clipping.noise.v_uncorrelated}});
  return exit_ok;
}

int cmd_validate(Context& ctx, std::ostream& err) {
  const RunConfig& c = ctx.config;
  ValidationOptions opts;
  opts.planes_z_over_zr = c.validate_planes_z_over_zr;
  opts.oams = c.validate_oams;
  opts.fft_z_over_zr = c.fft_z_over_zr;
  opts.fft_n = c.fft_n;
  opts.threads = c.threads;
  const auto checks = run_validation_suite(c.pump, c.medium, c.approx, opts);
  CsvTable t({"check", "parameters", "value", "relation", "tolerance", "pass"});
  int failed = 0;
  for (const CheckResult& r : checks) {
    const char* rel = r.upper_bound ? "<" : ">";
    ctx.out << fmt::format("{} {:<38} {:<36} {:.3e} {} {:.0e}\n", r.pass ? "PASS" : "FAIL", r.name, r.parameters,
                           r.value, rel, r.tolerance);
    t.add_row({r.name, r.parameters, format_number(r.value), rel, format_number(r.tolerance), r.pass ? "true" : "false"});
    failed += r.pass ? 0 : 1;
  }
  emit_table(ctx, "validate.csv", t);
  if (failed) {
    err << Json{{"error",
                 {{"kind", "numerical"},
                  {"exit_code", exit_numerical},
                  {"message", fmt::format("{} of {} validation checks exceeded their tolerance", failed, checks.size())}}}}
               .dump()
        << "\n";
    return exit_numerical;
  }
  return exit_ok;
}

void report(std::ostream& err, const char* kind, int code, const std::string& message, Json extra = Json::object()) {
  Json record = {{"kind", kind}, {"exit_code", code}, {"message", message}};
  record.update(extra);
  err << Json{{"error", record}}.dump() << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spatial quantum correlations of four-wave-mixing twin beams"};
  app.name("twinbeam");
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path, preset, out_dir, format;
  std::optional<int> threads;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--preset", preset, "Figure preset: fig2, fig3, fig4 or fig8");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", format, "csv, pgm or both (maps only; tables are always CSV)");
  app.add_option("--threads", threads, "Worker threads (default: TWINBEAM_THREADS, else 1)");
  app.add_option("--set", sets, "Override a config value: dotted.key=value, arrays by index as planes.0 (repeatable)");

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"joint", "Joint |F|^2 slices over (y_pr, y_c) at fixed x_pr, x_c"},
      {"conditional", "Conditional maps over the conjugate plane for the fixed probe point"},
      {"profile", "Line profiles of the conditional maps and their 1/e^2 widths"},
      {"coherence", "Coherence areas at each plane for the configured pump"},
      {"curve", "Coherence area against z for every pump variant"},
      {"clipping-sweep", "Knife-edge retention and noise sweep"},
      {"validate", "Oracle and identity suite; nonzero exit if any residual exceeds tolerance"},
      {"schema", "Print the configuration schema"},
  };
  std::vector<CLI::App*> commands;
  for (const Sub& s : subs) commands.push_back(app.add_subcommand(s.name, s.help));
  commands[5]->alias("clipping");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report(err, "usage", exit_config, e.what());
    return exit_config;
  }
  std::string command;
  for (CLI::App* c : commands)
    if (c->parsed()) command = c->get_name();

  if (command == "schema") {
    out << config_schema_text();
    return exit_ok;
  }

  try {
    ConfigLayers layers{preset, config_path ? std::optional<std::filesystem::path>(*config_path) : std::nullopt, sets};
    if (out_dir) layers.overrides.push_back("output.dir=" + Json(*out_dir).dump());
    if (format) layers.overrides.push_back("output.format=" + Json(*format).dump());
    if (threads) layers.overrides.push_back("threads=" + std::to_string(*threads));
    const Json doc = merge_layers(layers);
    RunConfig config = resolve_config(doc);
    Context ctx{config, OutputSink(config.out_dir, command, doc), out};

    int code = exit_ok;
    if (command == "joint") code = cmd_joint(ctx);
    if (command == "conditional") code = cmd_conditional(ctx);
    if (command == "profile") code = cmd_profile(ctx);
    if (command == "coherence") code = coherence_table(ctx, {config.pump.oam()}, "coherence.csv");
    if (command == "curve") code = coherence_table(ctx, config.pump_variants, "coherence_curve.csv");
    if (command == "clipping-sweep") code = cmd_clipping(ctx);
    if (command == "validate") code = cmd_validate(ctx, err);
    for (const auto& p : ctx.sink.written()) out << "wrote " << p.string() << "\n";
    return code;
  } catch (const ConfigError& e) {
    report(err, "config", exit_config, e.what(), {{"path", e.path()}});
    return exit_config;
  } catch (const DegenerateError& e) {
    report(err, "degenerate", exit_degenerate, e.what());
    return exit_degenerate;
  } catch (const ConvergenceError& e) {
    report(err, "numerical", exit_numerical, e.what(),
           {{"best_estimate", e.best_estimate()}, {"achieved_error", e.achieved_error()}});
    return exit_numerical;
  } catch (const SamplingError& e) {
    report(err, "numerical", exit_numerical, e.what());
    return exit_numerical;
  } catch (const DomainError& e) {
    report(err, "numerical", exit_numerical, e.what());
    return exit_numerical;
  } catch (const std::exception& e) {
    // I/O failures: the output directory is part of the configuration
    report(err, "io", exit_config, e.what());
    return exit_config;
  }
}

}  // namespace twinbeam
