#include "htype/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "htype/catalog.hpp"
#include "htype/config.hpp"
#include "htype/csv.hpp"
#include "htype/errors.hpp"
#include "htype/geodesics.hpp"
#include "htype/group.hpp"

namespace htype::cli {

namespace {

struct LoadedGroup {
  StructureConstants sc;
  std::uint64_t seed = kDefaultSeed;
};

void require_one_source(const GroupSource& source) {
  if (source.config_path.empty() == source.group_name.empty())
    throw Error(ErrorCode::InvalidArgument, "give exactly one of a config path or --group");
}

GroupConfig read_source(const GroupSource& source) {
  require_one_source(source);
  GroupConfig config;
  if (!source.group_name.empty())
    config.spectral = catalog_spec(source.group_name);
  else
    config = load_config(source.config_path);
  if (source.seed) config.seed = *source.seed;
  return config;
}

std::string source_name(const GroupSource& source) {
  return source.group_name.empty() ? source.config_path : source.group_name;
}

LoadedGroup load_group(const GroupSource& source) {
  const GroupConfig config = read_source(source);
  return {realize(config, source_name(source)), config.seed};
}

std::string join(const Eigen::VectorXd& v, char sep = ',') {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_double(v(i));
  }
  return s;
}

Eigen::VectorXd to_vector(const std::vector<double>& values) {
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// Runs `body`, which writes to the stream it is given, either into the file
// at `path` or into `out`.
void with_output(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(out);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  body(file);
  if (!file) throw Error(ErrorCode::InvalidArgument, "write to '" + path + "' failed");
}

// Report prose goes to `out` when the data went to a file, else to `err`.
std::ostream& prose_stream(const std::string& out_path, std::ostream& out, std::ostream& err) {
  return out_path.empty() ? err : out;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  }
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SpecNotRealizable:
      return kValidationFailure;
    case ErrorCode::CutLocusTarget:
    case ErrorCode::WitnessNotFound:
    case ErrorCode::NoCandidateFound:
    case ErrorCode::NumericalFailure:
      return kPropertyFailure;
    default:
      return kMalformedInput;
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string::npos ? text.size() : comma;
    out.push_back(parse_double(std::string_view(text).substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_t_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_list(text);
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "t grid range must be start:stop:count");
  const double start = parse_double(parts[0]);
  const double stop = parse_double(parts[1]);
  const double count = parse_double(parts[2]);
  if (count < 1 || count != std::floor(count)) throw Error(ErrorCode::InvalidArgument, "t grid count must be a positive integer");
  const int n = static_cast<int>(count);
  std::vector<double> grid;
  for (int i = 0; i < n; ++i) grid.push_back(n == 1 ? start : start + (stop - start) * i / (n - 1));
  return grid;
}

CovectorBox parse_box(const StructureConstants& sc, const std::string& text) {
  if (text == "default") return default_box(sc);
  if (text == "sharpness") return sharpness_box(sc);
  CovectorBox box{Eigen::VectorXd(sc.dimension()), Eigen::VectorXd(sc.dimension())};
  std::stringstream ss(text);
  int i = 0;
  for (std::string range; std::getline(ss, range, ',');) {
    const auto colon = range.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "box ranges must be lo:hi");
    if (i >= sc.dimension()) throw Error(ErrorCode::DimensionMismatch, "box has more than n ranges");
    box.lower(i) = parse_double(std::string_view(range).substr(0, colon));
    box.upper(i) = parse_double(std::string_view(range).substr(colon + 1));
    ++i;
  }
  if (i != sc.dimension()) throw Error(ErrorCode::DimensionMismatch, "box needs n = k + p ranges");
  validate_box(sc, box);
  return box;
}

int cmd_validate(const GroupSource& source, const OutputOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const GroupConfig config = read_source(source);
    auto say = [&](const std::string& line) {
      if (!opts.quiet) out << line << '\n';
    };

    Eigen::MatrixXd S;
    std::vector<Eigen::MatrixXd> L;
    if (config.spectral) {
      const ExistenceResult existence = existence_check(*config.spectral);
      say(std::string("existence: ") + (existence.realizable ? "PASS" : "FAIL"));
      if (!existence.realizable) {
        err << existence.diagnostic << '\n';
        return static_cast<int>(kValidationFailure);
      }
      const StructureConstants sc = build_structure(*config.spectral);
      S = sc.S;
      L = sc.L;
    } else {
      S = config.explicit_form->s_diagonal.asDiagonal();
      L = config.explicit_form->L;
    }

    const ValidationReport report = validate_structure(S, L, config.tolerance, config.seed);
    for (const auto& check : report.checks) {
      std::string line = check.name + ": " + (check.passed ? "PASS" : "FAIL") + " residual=" + format_double(check.residual);
      if (!check.detail.empty()) line += " (" + check.detail + ")";
      say(line);
    }
    if (!report.passed()) return static_cast<int>(kValidationFailure);
    say("rank " + std::to_string(S.rows()) + ", corank " + std::to_string(L.size()) + ": valid");
    return static_cast<int>(kOk);
  });
}

int cmd_exp(const GroupSource& source, const ExpArgs& args, const OutputOptions& opts, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    const LoadedGroup g = load_group(source);
    const StructureConstants& sc = g.sc;
    if (args.steps < 1) throw Error(ErrorCode::InvalidArgument, "--steps must be >= 1");
    const Covector lambda{to_vector(parse_list(args.u)), to_vector(parse_list(args.v))};
    check_dimensions(sc, lambda);

    std::vector<double> ts;
    for (int i = 0; i <= args.steps; ++i) ts.push_back(static_cast<double>(i) / args.steps);
    const auto points = geodesic_sample(sc, lambda, ts);

    with_output(args.out_path, out, [&](std::ostream& os) {
      std::vector<std::string> header{"t"};
      for (int i = 1; i <= sc.rank(); ++i) header.push_back("x" + std::to_string(i));
      for (int a = 1; a <= sc.corank(); ++a) header.push_back("z" + std::to_string(a));
      write_csv_header(os, header);
      std::vector<double> row;
      for (std::size_t i = 0; i < points.size(); ++i) {
        row.assign(1, ts[i]);
        for (Eigen::Index c = 0; c < points[i].x.size(); ++c) row.push_back(points[i].x(c));
        for (Eigen::Index c = 0; c < points[i].z.size(); ++c) row.push_back(points[i].z(c));
        write_csv_row(os, row);
      }
    });

    if (!opts.quiet) {
      std::ostream& prose = prose_stream(args.out_path, out, err);
      if (lambda.u.norm() == 0.0 && lambda.v.norm() == 0.0) {
        prose << "cut_time: inf\nminimizing: yes (constant curve)\n";
      } else {
        const double tc = cut_time(sc, lambda);
        prose << "cut_time: " << (std::isinf(tc) ? std::string("inf") : format_double(tc)) << '\n';
        prose << "minimizing: " << (tc >= 1.0 ? "yes" : "no") << '\n';
      }
    }
    return static_cast<int>(kOk);
  });
}

int cmd_log(const GroupSource& source, const LogArgs& args, const OutputOptions& opts, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    const LoadedGroup g = load_group(source);
    const StructureConstants& sc = g.sc;
    const GroupPoint target{to_vector(parse_list(args.x)), to_vector(parse_list(args.z))};
    check_dimensions(sc, target);
    if (target.is_identity()) throw Error(ErrorCode::IdentityTarget, "log of the identity");

    Covector lambda;
    try {
      lambda = log_map(sc, target);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CutLocusTarget) throw;
      const DistanceBound bound = distance_bound(sc, target, g.seed);
      err << "cut locus target\n";
      if (!opts.quiet) {
        out << "distance_bound: " << format_double(bound.value) << '\n';
        out << "u: " << join(bound.covector.u) << '\n';
        out << "v: " << join(bound.covector.v) << '\n';
      }
      return static_cast<int>(kPropertyFailure);
    }
    if (!opts.quiet) {
      out << "u: " << join(lambda.u) << '\n';
      out << "v: " << join(lambda.v) << '\n';
      out << "distance: " << format_double(lambda.u.norm()) << '\n';
      out << "in_domain: " << (in_injectivity_domain(sc, lambda) ? "yes" : "no") << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_mcp(const GroupSource& source, const McpArgs& args, const OutputOptions& opts, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    if (args.K > 0.0) {
      err << "error: K > 0 is not supported; MCP(K, N) with K > 0 forces a bounded space and Carnot groups are "
             "unbounded\n";
      return static_cast<int>(kMalformedInput);
    }
    const LoadedGroup g = load_group(source);
    const StructureConstants& sc = g.sc;
    const double N = args.N.value_or(geodesic_dimension(sc.spec));
    const CovectorBox box = parse_box(sc, args.box);
    const auto grid = parse_t_grid(args.t_grid);
    const QuadratureOptions q{args.quad, opts.workers};
    const ContractionReport report = mcp_report(sc, args.K, N, box, grid, q);

    with_output(args.out_path, out, [&](std::ostream& os) {
      os << "t,ratio,bound,margin,verdict\n";
      for (std::size_t i = 0; i < report.t_grid.size(); ++i) {
        os << format_double(report.t_grid[i]) << ',' << format_double(report.ratios[i]) << ','
           << format_double(report.bounds[i]) << ',' << format_double(report.margins[i]) << ','
           << (report.verdicts[i] ? "pass" : "fail") << '\n';
      }
    });

    if (!opts.quiet) {
      std::ostream& prose = prose_stream(args.out_path, out, err);
      std::size_t failures = 0;
      for (bool v : report.verdicts) failures += v ? 0 : 1;
      prose << "MCP(" << format_double(args.K) << ", " << format_double(N) << ") on " << report.group_id << ": "
            << (report.passed() ? "PASS" : "FAIL") << " (" << failures << " of " << report.t_grid.size()
            << " t values fail)\n";
    }
    return static_cast<int>(report.passed() ? kOk : kPropertyFailure);
  });
}

int cmd_sharpness(const GroupSource& source, const SharpnessArgs& args, const OutputOptions& opts,
                  std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedGroup g = load_group(source);
    const StructureConstants& sc = g.sc;
    const SharpnessWitness w = sharpness_witness(sc, args.epsilon, {args.quad, opts.workers});

    with_output(args.out_path, out, [&](std::ostream& os) {
      os << "# group " << sc.name << '\n';
      os << "# epsilon " << format_double(w.epsilon) << '\n';
      os << "# N " << format_double(w.N) << '\n';
      os << "# shrink_steps " << w.shrink_steps << '\n';
      os << "# box_lower " << join(w.box.lower, ' ') << '\n';
      os << "# box_upper " << join(w.box.upper, ' ') << '\n';
      os << "t,ratio,bound,margin\n";
      for (std::size_t i = 0; i < w.t_grid.size(); ++i)
        write_csv_row(os, std::vector<double>{w.t_grid[i], w.ratios[i], w.bounds[i], w.margins[i]});
    });

    if (!opts.quiet) {
      double min_margin = w.margins.front();
      for (double m : w.margins) min_margin = std::min(min_margin, m);
      prose_stream(args.out_path, out, err)
          << "MCP(0, " << format_double(w.N - w.epsilon) << ") fails on " << sc.name << ": witness found after "
          << w.shrink_steps << " shrink steps, min margin " << format_double(min_margin) << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geodesics and measure contraction on generalized H-type Carnot groups"};
  app.name("htype");
  app.require_subcommand(1);

  GroupSource source;
  OutputOptions opts;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", source.config_path, "JSON group config");
    sub->add_option("--group", source.group_name, "catalog group name");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_flag("--quiet", opts.quiet, "suppress report prose");
    sub->add_option("--workers", opts.workers, "quadrature threads (0: OpenMP default)");
  };

  auto* validate = app.add_subcommand("validate", "check existence or the structure relations");
  add_common(validate);

  ExpArgs exp_args;
  auto* exp = app.add_subcommand("exp", "sample a normal geodesic to CSV");
  add_common(exp);
  exp->add_option("--u", exp_args.u, "horizontal covector, comma separated")->required();
  exp->add_option("--v", exp_args.v, "vertical covector, comma separated")->required();
  exp->add_option("--steps", exp_args.steps, "number of intervals");
  exp->add_option("--out", exp_args.out_path, "CSV path");

  LogArgs log_args;
  auto* log = app.add_subcommand("log", "initial covector of the minimizing geodesic");
  add_common(log);
  log->add_option("--x", log_args.x, "horizontal coordinates")->required();
  log->add_option("--z", log_args.z, "vertical coordinates")->required();

  McpArgs mcp_args;
  double N = 0.0;
  auto* mcp = app.add_subcommand("mcp", "measure contraction report");
  add_common(mcp);
  mcp->add_option("--K", mcp_args.K, "curvature bound (<= 0)");
  auto* n_opt = mcp->add_option("--N", N, "dimension bound (default k + 3p)");
  mcp->add_option("--box", mcp_args.box, "default | sharpness | lo:hi,...");
  mcp->add_option("--t-grid", mcp_args.t_grid, "list or start:stop:count");
  mcp->add_option("--quad", mcp_args.quad, "Gauss-Legendre points per dimension");
  mcp->add_option("--out", mcp_args.out_path, "CSV path");

  SharpnessArgs sharp_args;
  auto* sharp = app.add_subcommand("sharpness", "witness box for the failure of MCP(0, N - epsilon)");
  add_common(sharp);
  sharp->add_option("--epsilon", sharp_args.epsilon, "dimension deficit in (0, 1]");
  sharp->add_option("--quad", sharp_args.quad, "Gauss-Legendre points per dimension");
  sharp->add_option("--out", sharp_args.out_path, "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  }

  for (auto* sub : {validate, exp, log, mcp, sharp})
    if (sub->parsed() && sub->count("--seed")) source.seed = seed;
  if (n_opt->count()) mcp_args.N = N;

  if (validate->parsed()) return cmd_validate(source, opts, out, err);
  if (exp->parsed()) return cmd_exp(source, exp_args, opts, out, err);
  if (log->parsed()) return cmd_log(source, log_args, opts, out, err);
  if (mcp->parsed()) return cmd_mcp(source, mcp_args, opts, out, err);
  return cmd_sharpness(source, sharp_args, opts, out, err);
}

}  // namespace htype::cli
