#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conlap/assembly.hpp"
#include "conlap/eigensolver.hpp"
#include "conlap/errors.hpp"
#include "conlap/harness.hpp"
#include "conlap/nets.hpp"
#include "conlap/report_io.hpp"

namespace {

using conlap::BundleModel;
using conlap::ConfigError;
using conlap::ExperimentConfig;
using conlap::ManifoldModel;

struct CommonFlags {
  std::string manifold = "torus:1,1";
  std::string bundle = "trivial-real:1";
  std::string holonomy;
  double rho = 0.3;
  double eps = 0.0;  // 0 -> rho / 8
  int k = 6;
  std::uint64_t seed = 1;
  std::int64_t mc_samples = 0;
  double tol = 1e-8;
  std::string out;
  std::string format = "csv";
  std::string net = "fps";
  int grid_k = 0;
  int levels = 3;
  double ratio = 0.125;
};

std::vector<double> parse_doubles(const std::string& text,
                                  const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("could not parse " + what + " value '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(what + " list is empty");
  return out;
}

ManifoldModel parse_manifold(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "circle") {
    return ManifoldModel::circle(parse_doubles(args, "circle length").at(0));
  }
  if (kind == "torus") {
    return ManifoldModel::flat_torus(parse_doubles(args, "torus length"));
  }
  if (kind == "sphere2") {
    return ManifoldModel::sphere2(parse_doubles(args, "sphere radius").at(0));
  }
  throw ConfigError("unknown manifold '" + text +
                    "' (expected circle:L, torus:L1,L2,... or sphere2:R)");
}

BundleModel parse_bundle(const std::string& text, const ManifoldModel& m,
                         const std::string& holonomy_text) {
  const std::size_t colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const int rank = colon == std::string::npos
                       ? 1
                       : static_cast<int>(parse_doubles(text.substr(colon + 1),
                                                        "bundle rank")
                                              .at(0));
  if (kind == "trivial-real") return BundleModel::trivial_real(m, rank);
  if (kind == "trivial-complex") return BundleModel::trivial_complex(m, rank);
  if (kind == "flat-u1") {
    std::vector<double> holonomy(static_cast<std::size_t>(m.dim()), 0.0);
    if (!holonomy_text.empty()) {
      holonomy = parse_doubles(holonomy_text, "holonomy");
    }
    return BundleModel::flat_u1(m, holonomy);
  }
  if (kind == "tangent-sphere2") return BundleModel::tangent_sphere2(m);
  throw ConfigError("unknown bundle '" + text +
                    "' (expected trivial-real:r, trivial-complex:r, flat-u1 "
                    "or tangent-sphere2)");
}

ExperimentConfig make_config(const CommonFlags& flags, int levels) {
  const ManifoldModel m = parse_manifold(flags.manifold);
  ExperimentConfig cfg;
  cfg.bundle = parse_bundle(flags.bundle, m, flags.holonomy);
  cfg.k = flags.k;
  cfg.seed = flags.seed;
  cfg.mc_samples = flags.mc_samples;
  cfg.tol = flags.tol;
  if (flags.net == "grid") {
    cfg.net_kind = ExperimentConfig::NetKind::Grid;
  } else if (flags.net != "fps") {
    throw ConfigError("unknown net kind '" + flags.net +
                      "' (expected fps or grid)");
  }
  cfg.grid_points_per_dim = flags.grid_k;
  double rho = flags.rho;
  double eps = flags.eps > 0.0 ? flags.eps : flags.rho * flags.ratio;
  const double r = eps / rho;
  for (int l = 0; l < levels; ++l) {
    cfg.levels.push_back({rho, rho * r});
    rho *= 0.5;
  }
  return cfg;
}

void emit(const CommonFlags& flags, const std::string& text) {
  if (flags.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(flags.out);
  if (!os) throw ConfigError("cannot open output file '" + flags.out + "'");
  os << text;
}

std::string render_report(const CommonFlags& flags,
                          const ExperimentConfig& cfg,
                          const conlap::ConvergenceReport& report) {
  if (flags.format == "json") {
    return conlap::report_to_json(cfg, report).dump(2) + "\n";
  }
  if (flags.format != "csv") {
    throw ConfigError("unknown format '" + flags.format +
                      "' (expected csv or json)");
  }
  std::vector<conlap::LevelRow> rows;
  for (const conlap::LevelResult& level : report.levels) {
    rows.insert(rows.end(), level.rows.begin(), level.rows.end());
  }
  std::ostringstream os;
  conlap::write_rows_csv(os, rows);
  return os.str();
}

int cmd_spectrum(const CommonFlags& flags) {
  const ExperimentConfig cfg = make_config(flags, 1);
  conlap::ConvergenceReport report;
  report.levels.push_back(conlap::run_spectrum(cfg));
  emit(flags, render_report(flags, cfg, report));
  return 0;
}

int cmd_sweep(const CommonFlags& flags) {
  const ExperimentConfig cfg = make_config(flags, flags.levels);
  const conlap::ConvergenceReport report = conlap::run_convergence_sweep(cfg);
  emit(flags, render_report(flags, cfg, report));
  for (const conlap::LevelResult& level : report.levels) {
    if (level.failed) {
      std::cerr << "level " << level.level << " failed: " << level.error
                << "\n";
    }
  }
  return 0;
}

int cmd_net(const CommonFlags& flags) {
  const ExperimentConfig cfg = make_config(flags, 1);
  const conlap::Net net =
      conlap::build_level_net(cfg, cfg.levels.front(), cfg.seed);
  emit(flags, conlap::net_to_json(cfg.bundle.base(), net) + "\n");
  return 0;
}

int cmd_check(const CommonFlags& flags) {
  const conlap::LemmaReport report = conlap::verify_lemma_suite(flags.seed);
  if (flags.format == "json") {
    emit(flags, conlap::lemma_report_to_json(report).dump(2) + "\n");
  } else {
    std::ostringstream os;
    for (const conlap::LemmaCheck& check : report.checks) {
      os << (check.pass ? "[PASS] " : "[FAIL] ") << check.name
         << "  lhs=" << check.lhs << "  rhs=" << check.rhs << "  ("
         << check.witness << ")\n";
    }
    os << (report.all_pass ? "all checks passed" : "CHECK VIOLATIONS FOUND")
       << "\n";
    emit(flags, os.str());
  }
  if (!report.all_pass) {
    for (const conlap::LemmaCheck& check : report.checks) {
      if (!check.pass) {
        throw conlap::CheckViolation(check.name + " violated: " +
                                     check.witness);
      }
    }
  }
  return 0;
}

int cmd_oracle(const CommonFlags& flags) {
  ExperimentConfig cfg = make_config(flags, 1);
  const conlap::ScaleLevel level = cfg.levels.front();
  const conlap::Net net = conlap::build_level_net(cfg, level, cfg.seed);
  const conlap::BlockOperator op =
      conlap::assemble_graph_laplacian(cfg.bundle, net, level.rho);
  if (op.dim() > 2000) {
    throw ConfigError("oracle comparison needs N*r <= 2000 (got " +
                      std::to_string(op.dim()) + ")");
  }
  const double bound = conlap::gershgorin_upper_bound(op);

  conlap::EigenOptions lanczos;
  lanczos.tol = cfg.tol;
  lanczos.seed = cfg.seed;
  lanczos.method = conlap::EigenOptions::Method::Lanczos;
  lanczos.max_iter = 500 * cfg.k + 3000;
  const conlap::SpectrumResult iterative =
      conlap::smallest_eigenpairs(op, cfg.k, lanczos);
  const conlap::SpectrumResult dense = conlap::dense_reference_spectrum(op);

  double max_dev = 0.0;
  std::ostringstream os;
  os << "k,lambda_lanczos,lambda_dense,abs_dev\n";
  for (int i = 0; i < cfg.k; ++i) {
    const double dev =
        std::abs(iterative.eigenvalues(i) - dense.eigenvalues(i));
    max_dev = std::max(max_dev, dev);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", i + 1,
                  iterative.eigenvalues(i), dense.eigenvalues(i), dev);
    os << buf;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max_abs_dev,%.17g\nscale,%.17g\n", max_dev,
                bound);
  os << buf;
  emit(flags, os.str());
  if (max_dev > 1e-8 * bound) {
    throw conlap::CheckViolation(
        "iterative and dense spectra disagree beyond 1e-8 * scale");
  }
  return 0;
}

void add_common_flags(CLI::App* sub, CommonFlags& flags, bool with_scales) {
  sub->add_option("--manifold", flags.manifold,
                  "circle:L | torus:L1,L2,... | sphere2:R");
  sub->add_option("--bundle", flags.bundle,
                  "trivial-real:r | trivial-complex:r | flat-u1 | "
                  "tangent-sphere2");
  sub->add_option("--holonomy", flags.holonomy,
                  "holonomy angles a1,a2,... in [0,1) for flat-u1");
  sub->add_option("--seed", flags.seed, "master seed");
  sub->add_option("--mc-samples", flags.mc_samples,
                  "Voronoi measure samples (0: 400 per net point)");
  sub->add_option("--out", flags.out, "output path (default: stdout)");
  sub->add_option("--format", flags.format, "csv | json");
  if (with_scales) {
    sub->add_option("--rho", flags.rho, "connection scale rho");
    sub->add_option("--eps", flags.eps,
                    "net covering target (default: rho/8)");
    sub->add_option("--k", flags.k, "number of eigenvalues");
    sub->add_option("--tol", flags.tol, "solver residual tolerance");
    sub->add_option("--net", flags.net, "net construction: fps | grid");
    sub->add_option("--grid-k", flags.grid_k,
                    "grid net: points per dimension (0: derived from eps)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "conlap: graph connection Laplacians on model manifolds and their "
      "spectra"};
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "single-scale eigenvalue comparison against analytic data");
  add_common_flags(spectrum, flags, true);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "convergence sweep across halved (rho, eps) levels");
  add_common_flags(sweep, flags, true);
  sweep->add_option("--levels", flags.levels, "number of scale levels (>= 3)");
  sweep->add_option("--ratio", flags.ratio,
                    "eps/rho ratio kept fixed across levels");

  CLI::App* net =
      app.add_subcommand("net", "build a net and print it as JSON");
  add_common_flags(net, flags, true);

  CLI::App* check =
      app.add_subcommand("check", "run the inequality suite and report");
  add_common_flags(check, flags, false);

  CLI::App* oracle = app.add_subcommand(
      "oracle", "compare the iterative solver against the dense reference");
  add_common_flags(oracle, flags, true);

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(spectrum)) return cmd_spectrum(flags);
    if (app.got_subcommand(sweep)) return cmd_sweep(flags);
    if (app.got_subcommand(net)) return cmd_net(flags);
    if (app.got_subcommand(check)) return cmd_check(flags);
    if (app.got_subcommand(oracle)) return cmd_oracle(flags);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const conlap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const conlap::RegimeError& e) {
    std::cerr << "regime rejection: " << e.what() << "\n";
    return 3;
  } catch (const conlap::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 4;
  } catch (const conlap::CheckViolation& e) {
    std::cerr << "check violation: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
