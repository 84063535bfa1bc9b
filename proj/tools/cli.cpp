#include "cli.hpp"

#include "rdwkit/error.hpp"
#include "rdwkit/kinematics.hpp"
#include "rdwkit/rdw.hpp"
#include "rdwkit/singularity.hpp"
#include "rdwkit/sweep.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace rdwkit::cli {

namespace {

struct GeometryOptions {
  std::string type;
  GeometryParams geom;
};

void add_geometry_options(CLI::App& sub, GeometryOptions& o) {
  sub.add_option("--type", o.type, "Manipulator family: B1, C, E, G, H or Generic")->required();
  sub.add_option("--d2", o.geom.d2, "Length d2")->capture_default_str();
  sub.add_option("--d3", o.geom.d3, "Length d3")->capture_default_str();
  sub.add_option("--d4", o.geom.d4, "Length d4")->capture_default_str();
  sub.add_option("--r2", o.geom.r2, "Offset r2")->capture_default_str();
  sub.add_option("--r3", o.geom.r3, "Offset r3")->capture_default_str();
}

void add_resolution_options(CLI::App& sub, RdwConfig& c, std::string& aggregate) {
  sub.add_option("--grid", c.singular_grid, "Singular-set scan grid per joint axis")
      ->capture_default_str();
  sub.add_option("--spacing-fraction", c.spacing_fraction,
                 "Singular sample spacing as a fraction of the maximal reach")
      ->capture_default_str();
  sub.add_option("--nscan", c.scan_divisions, "Scan steps per free-square edge")
      ->capture_default_str();
  sub.add_option("--reach-grid", c.reach_grid, "Grid used to locate the maximal reach")
      ->capture_default_str();
  sub.add_option("--hj-initial", c.hj_initial_fraction,
                 "Initial Hooke-Jeeves step as a fraction of the seed size")
      ->capture_default_str();
  sub.add_option("--hj-shrink", c.hj_shrink, "Hooke-Jeeves step shrink factor")
      ->capture_default_str();
  sub.add_option("--hj-min-step", c.hj_min_step_fraction,
                 "Minimum Hooke-Jeeves step as a fraction of the maximal reach")
      ->capture_default_str();
  sub.add_option("--hj-max-evals", c.hj_max_evals, "Hooke-Jeeves evaluation budget")
      ->capture_default_str();
  sub.add_option("--aggregate", aggregate,
                 "Combine the conditioning of IK branches by min, max or first")
      ->capture_default_str();
}

ManipulatorType parse_type(const std::string& name) {
  const auto type = parse_manipulator_type(name);
  if (!type) {
    throw Error(ErrorCode::InvalidArgument,
                "unknown type '" + name + "' (expected B1, C, E, G, H or Generic)");
  }
  return *type;
}

Aggregate parse_aggregate_option(const std::string& name) {
  const auto aggregate = parse_aggregate(name);
  if (!aggregate) {
    throw Error(ErrorCode::InvalidArgument,
                "unknown aggregate '" + name + "' (expected min, max or first)");
  }
  return *aggregate;
}

template <class Write>
void emit(const std::string& path, std::ostream& out, Write&& write) {
  if (path.empty() || path == "-") {
    write(out);
    out.flush();
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot open output file '" + path + "'");
  write(file);
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

nlohmann::ordered_json square_json(const Square& s) {
  nlohmann::ordered_json j;
  j["rho"] = s.center.rho;
  j["z"] = s.center.z;
  j["edge"] = s.edge();
  return j;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Appends `--key value` for every line of the --config file whose key was not
// given on the command line.
void inject_config(std::vector<std::string>& args, const CLI::App& app) {
  std::size_t sub_pos = args.size();
  const CLI::App* sub = nullptr;
  for (std::size_t k = 1; k < args.size(); ++k) {
    for (const CLI::App* s : app.get_subcommands([](const CLI::App*) { return true; })) {
      if (s->get_name() == args[k]) {
        sub_pos = k;
        sub = s;
        break;
      }
    }
    if (sub) break;
  }
  if (!sub) return;

  std::string path;
  for (std::size_t k = sub_pos + 1; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
    if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
  }
  if (path.empty()) return;

  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open config file '" + path + "'");
  std::string line;
  int line_no = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, path + ":" + std::to_string(line_no) +
                                                  ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    const std::string flag = "--" + key;
    if (key == "config" || !sub->get_option_no_throw(flag)) {
      throw Error(ErrorCode::InvalidArgument, path + ":" + std::to_string(line_no) +
                                                  ": unknown key '" + key + "' for " +
                                                  sub->get_name());
    }
    if (has_flag(args, flag)) continue;
    extra.push_back(flag);
    extra.push_back(value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidGeometry:
    case ErrorCode::InvalidArgument: return kExitValidation;
    default: return kExitComputation;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regular dextrous workspace of 3R orthogonal manipulators", "rdwkit"};
  app.set_help_flag();
  app.set_help_all_flag("-h,--help", "Print this help, including every subcommand flag");
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  double k_min_inv = 0.25;

  // rdw
  GeometryOptions rdw_geom;
  RdwConfig rdw_config;
  std::string rdw_aggregate = "min";
  CLI::App* rdw = app.add_subcommand("rdw", "Free square, RDW square and eta of one design");
  add_geometry_options(*rdw, rdw_geom);
  rdw->add_option("--kmin", k_min_inv, "Lower bound on the conditioning index")
      ->capture_default_str();
  add_resolution_options(*rdw, rdw_config, rdw_aggregate);
  rdw->add_option("--out", out_path, "Output JSON file (stdout when omitted)");
  rdw->add_option("--config", config_path, "key=value file; command-line flags win");

  // singular
  GeometryOptions sing_geom;
  int sing_grid = 1024;
  double sing_spacing = 0.0;
  CLI::App* singular = app.add_subcommand("singular", "Sample the singular curves in (rho, z)");
  add_geometry_options(*singular, sing_geom);
  singular->add_option("--grid", sing_grid, "Scan grid per joint axis")->capture_default_str();
  singular->add_option("--spacing", sing_spacing,
                       "Maximal distance between adjacent samples (0 picks reach / 500)")
      ->capture_default_str();
  singular->add_option("--out", out_path, "Output CSV file (stdout when omitted)");
  singular->add_option("--config", config_path, "key=value file; command-line flags win");

  // sweep
  std::string sweep_type;
  Axis axis;
  SweepConfig sweep_config;
  std::string sweep_aggregate = "min";
  CLI::App* sweep = app.add_subcommand("sweep", "Eta over a square grid of the two free lengths");
  sweep->add_option("--type", sweep_type, "Manipulator family: B1, C, E, G or H")->required();
  sweep->add_option("--min", axis.min, "Smallest grid value")->capture_default_str();
  sweep->add_option("--max", axis.max, "Largest grid value")->capture_default_str();
  sweep->add_option("--step", axis.step, "Grid step")->capture_default_str();
  sweep->add_option("--kmin", k_min_inv, "Lower bound on the conditioning index")
      ->capture_default_str();
  sweep->add_option("--jobs", sweep_config.jobs, "Worker threads (0 uses every core)")
      ->capture_default_str();
  add_resolution_options(*sweep, sweep_config.rdw, sweep_aggregate);
  sweep->add_option("--out", out_path, "Output CSV file (stdout when omitted)");
  sweep->add_option("--config", config_path, "key=value file; command-line flags win");

  // contour
  std::string in_path;
  std::vector<double> levels;
  std::string format;
  CLI::App* contour = app.add_subcommand("contour", "Isocontours of a sweep CSV");
  contour->add_option("--in", in_path, "Sweep CSV file ('-' reads stdin)")->required();
  contour->add_option("--levels", levels, "Comma-separated eta levels")
      ->required()
      ->delimiter(',');
  contour->add_option("--format", format, "csv or svg (default from the --out extension)");
  contour->add_option("--out", out_path, "Output file (stdout when omitted)");
  contour->add_option("--config", config_path, "key=value file; command-line flags win");

  std::vector<std::string> args(argv, argv + argc);
  try {
    inject_config(args, app);
  } catch (const Error& e) {
    err << "rdwkit: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (rdw->parsed()) {
      const ManipulatorType type = parse_type(rdw_geom.type);
      check_type(type, rdw_geom.geom);
      rdw_config.aggregate = parse_aggregate_option(rdw_aggregate);
      const RdwResult r = compute_rdw(rdw_geom.geom, k_min_inv, rdw_config);

      nlohmann::ordered_json j;
      j["type"] = std::string(to_string(type));
      j["params"] = {{"d2", rdw_geom.geom.d2},
                     {"d3", rdw_geom.geom.d3},
                     {"d4", rdw_geom.geom.d4},
                     {"r2", rdw_geom.geom.r2},
                     {"r3", rdw_geom.geom.r3}};
      j["free_square"] = square_json(r.free_square);
      j["rdw_square"] = square_json(r.rdw_square);
      j["k_min_inv"] = r.k_min_inv;
      j["rho_max"] = r.rho_max;
      j["eta"] = r.eta;
      j["scan_step"] = r.scan_step;
      j["singular_samples"] = r.singular_samples;
      emit(out_path, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    } else if (singular->parsed()) {
      check_type(parse_type(sing_geom.type), sing_geom.geom);
      if (sing_spacing < 0.0) throw Error(ErrorCode::InvalidArgument, "spacing must be >= 0");
      if (sing_grid < 64) throw Error(ErrorCode::InvalidArgument, "grid must be >= 64");
      const SingularSampleSet samples = singular_set(sing_geom.geom, sing_grid, sing_spacing);
      err << "singular: " << samples.size() << " samples, max gap " << samples.max_gap << '\n';
      emit(out_path, out, [&](std::ostream& os) { write_singular_csv(os, samples); });
    } else if (sweep->parsed()) {
      const ManipulatorType type = parse_type(sweep_type);
      sweep_config.rdw.aggregate = parse_aggregate_option(sweep_aggregate);
      if (sweep_config.jobs < 0) throw Error(ErrorCode::InvalidArgument, "jobs must be >= 0");
      const GridSpec grid{type, axis, axis};
      int last_percent = -1;
      sweep_config.progress = [&](std::size_t done, std::size_t total) {
        const int percent = static_cast<int>(100 * done / total);
        if (percent != last_percent) {
          last_percent = percent;
          err << "\rsweep " << to_string(type) << ": " << percent << "% (" << done << '/'
              << total << ')' << std::flush;
        }
      };
      const EtaField field = sweep_eta(grid, k_min_inv, sweep_config);
      err << '\n';
      if (const EtaCell* best = field.max_cell()) {
        const auto names = axis_names(type);
        err << "max eta " << best->eta << " at " << names[0] << '=' << best->p1 << ' '
            << names[1] << '=' << best->p2 << '\n';
      }
      emit(out_path, out, [&](std::ostream& os) { write_sweep_csv(os, field); });
    } else if (contour->parsed()) {
      EtaField field;
      if (in_path == "-") {
        field = read_sweep_csv(std::cin);
      } else {
        std::ifstream in(in_path);
        if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open input file '" + in_path + "'");
        field = read_sweep_csv(in);
      }
      if (format.empty()) {
        const bool svg = out_path.size() >= 4 && out_path.substr(out_path.size() - 4) == ".svg";
        format = svg ? "svg" : "csv";
      }
      if (format != "csv" && format != "svg") {
        throw Error(ErrorCode::InvalidArgument, "format must be csv or svg (got " + format + ")");
      }
      const ContourSet contours = extract_contours(field, levels);
      for (const auto& c : contours.contours) {
        err << "level " << c.level << ": " << c.polylines.size() << " polylines\n";
      }
      emit(out_path, out, [&](std::ostream& os) {
        if (format == "svg") {
          write_contour_svg(os, contours, field);
        } else {
          write_contour_csv(os, contours);
        }
      });
    }
  } catch (const Error& e) {
    err << "rdwkit: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "rdwkit: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitOk;
}

}  // namespace rdwkit::cli
