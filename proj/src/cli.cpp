#include "knrspec/cli.hpp"

#include "knrspec/errors.hpp"
#include "knrspec/pipeline.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>

namespace knrspec {
namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void print_transitions(const std::vector<TransitionRow>& table, std::ostream& out) {
  out << "transition   energy (MHz)   <En|sx2|Em>           |lambda2 <En|sx2|Em>| (MHz)\n";
  for (const auto& r : table) {
    out << r.label() << "  " << fmt("%13.6f", rad_per_us_to_mhz(r.energy)) << "   "
        << fmt("%+.6f", r.sigma_x_element.real()) << fmt("%+.6fi", r.sigma_x_element.imag())
        << "   " << fmt("%.6e", rad_per_us_to_mhz(std::abs(r.drive_element))) << "\n";
  }
}

void print_eigensystem(const SystemParams& params, std::ostream& out) {
  const AnalyticEigensystem an = analytic_eigensystem(params);
  const OperatorMatrix h0 = build_qubit_h0(params);
  const HermitianEigensystem num = hermitian_eigensystem(h0);
  const double shift = subspace_a_shift(params);
  const double scale = std::max(1.0, max_abs(h0));
  out << "state   analytic (MHz)    numeric (MHz)     |dE| (rad/us)   residual (rel)\n";
  for (int n = 0; n < 6; ++n) {
    const double e = an.energies[n] + (n < 4 ? shift : 0.0);
    Eigen::Index best = 0;
    (num.eigenvalues.array() - e).abs().minCoeff(&best);
    const double de = std::abs(num.eigenvalues(best) - e);
    double residual = 0.0;
    const double norm = an.states[n].norm();
    if (norm > 0.0) {
      const StateVector v = an.states[n] / norm;
      residual = (h0 * v - e * v).norm() / scale;
    }
    out << "E" << n + 1 << "   " << fmt("%15.9f", rad_per_us_to_mhz(e)) << "   "
        << fmt("%15.9f", rad_per_us_to_mhz(num.eigenvalues(best))) << "   " << fmt("%.3e", de)
        << "       " << fmt("%.3e", residual) << "\n";
  }
  out << "theta = " << fmt("%.6f", an.theta) << " rad, r = " << fmt("%.6f", rad_per_us_to_mhz(an.r))
      << " MHz, epsilon = " << fmt("%.6f", rad_per_us_to_mhz(an.epsilon)) << " MHz\n";
}

void print_peaks(const PeakSet& peaks, std::ostream& out) {
  out << "peaks (" << peaks.peaks.size() << "):\n";
  for (const auto& p : peaks.peaks) {
    out << "  " << fmt("%9.4f", rad_per_us_to_mhz(p.delta)) << " MHz  P_e = "
        << fmt("%.4e", p.height);
    if (p.assigned.empty()) {
      out << "  unassigned";
    } else {
      out << "  ";
      for (std::size_t i = 0; i < p.assigned.size(); ++i) out << (i ? " + " : "") << p.assigned[i];
    }
    out << "\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectroscopy of four coupled Kerr resonators", "knrspec"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int threads = -1;

  auto* sweep = app.add_subcommand("sweep", "run the detuning sweep and write artifacts");
  sweep->add_option("config", config_path, "configuration file")->required();
  sweep->add_option("-o,--output-dir", output_dir, "override the output directory");
  sweep->add_option("-j,--threads", threads, "worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  auto* transitions = app.add_subcommand("transitions", "print the analytic transition table");
  transitions->add_option("config", config_path, "configuration file")->required();
  auto* eigen = app.add_subcommand("eigensystem", "print E1..E6 against numeric diagonalization");
  eigen->add_option("config", config_path, "configuration file")->required();
  auto* validate = app.add_subcommand("validate", "check the configuration only");
  validate->add_option("config", config_path, "configuration file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    if (e.get_exit_code() != 0) err << app.help();
    return exit_code::usage;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (validate->parsed()) {
      const auto warnings = cfg.plan.validate(cfg.params.gamma);
      for (const auto& w : warnings) err << "warning: " << w << "\n";
      out << config_path << ": ok\n";
    } else if (transitions->parsed()) {
      print_transitions(transition_table(cfg.params), out);
    } else if (eigen->parsed()) {
      print_eigensystem(cfg.params, out);
    } else if (sweep->parsed()) {
      if (!output_dir.empty()) cfg.outputs.directory = output_dir;
      if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);
      const PipelineResult res = run_pipeline(cfg, std::filesystem::path(cfg.outputs.directory));
      for (const auto& w : res.spectrum.warnings) err << "warning: " << w << "\n";
      print_peaks(res.peaks, out);
      out << "max trace drift " << fmt("%.3e", res.spectrum.max_trace_drift)
          << ", max hermiticity drift " << fmt("%.3e", res.spectrum.max_hermiticity_drift)
          << "\nartifacts written to " << cfg.outputs.directory << " ("
          << fmt("%.1f", res.manifest.wall_clock_seconds) << " s)\n";
    }
  } catch (const ConfigParseError& e) {
    err << config_path << ": " << e.what() << "\n";
    return exit_code::validation;
  } catch (const ValidationError& e) {
    err << config_path << ": invalid [" << e.constraint() << "]: " << e.what() << "\n";
    return exit_code::validation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::runtime;
  }
  return exit_code::ok;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace knrspec
