#include <ostream>
#include <string_view>

#include "CLI11.hpp"
#include "cli_internal.hpp"
#include "fatou/cli.hpp"

namespace fatou {

namespace {

void add_map_options(CLI::App* sub, cli::MapOpts& m) {
  sub->add_option("--family", m.family, "skew-siegel | cusp | tangent | generic")->capture_default_str();
  sub->add_option("--theta", m.theta, "rotation number of the skew product");
  sub->add_option("--p", m.p)->capture_default_str();
  sub->add_option("--q", m.q)->capture_default_str();
  sub->add_option("--k", m.k, "order of tangency")->capture_default_str();
  sub->add_option("--g", m.g, "defining function of V (tangent family)");
  sub->add_option("--P", m.P);
  sub->add_option("--Q", m.Q);
  sub->add_option("--pz", m.pz, "first component (generic family)");
  sub->add_option("--pw", m.pw, "second component (generic family)");
  sub->add_option("--seed", m.seed, "point as z,w (real) or zr,zi,wr,wi");
  sub->add_option("--seed-on-curve", m.seed_on_curve, "cusp point (t^q, t^p) given as t=re[,im]");
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::SmallDivisor: return kExitSmallDivisor;
    case ErrorKind::Parse:
    case ErrorKind::Precondition:
    case ErrorKind::BadOrder:
    case ErrorKind::DegenerateFamily:
    case ErrorKind::NotOnCurve: return kExitConfig;
    default: return kExitNumeric;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fatoulab: orbits, petals, monodromy and Siegel-factor experiments"};
  app.set_config("--config", "", "key=value file; [section] names a subcommand");
  app.fallthrough();
  app.require_subcommand(1);

  cli::CommonOpts common;
  app.add_option("--out", common.out, "output directory")->capture_default_str();
  app.add_option("--threads", common.threads)->capture_default_str();
  app.add_flag("--no-timestamp", common.no_timestamp, "omit the timestamp line of run records");

  cli::MapOpts map_orbit, map_chardirs, map_petals, map_basin, map_extend;
  cli::OrbitOpts orbit;
  cli::CharDirsOpts chardirs;
  cli::PetalsOpts petals;
  cli::MonodromyOpts monodromy;
  cli::BasinOpts basin;
  cli::SiegelOpts siegel;

  auto* s_orbit = app.add_subcommand("orbit", "iterate one seed and classify its orbit");
  add_map_options(s_orbit, map_orbit);
  s_orbit->add_option("--n", orbit.n, "iterations")->capture_default_str();
  s_orbit->add_option("--tol", orbit.tol)->capture_default_str();
  s_orbit->add_option("--target", orbit.target, "target set {target = 0}; defaults to g or w = 0");

  auto* s_chardirs = app.add_subcommand("chardirs", "characteristic directions of a germ");
  add_map_options(s_chardirs, map_chardirs);
  s_chardirs->add_option("--fz", chardirs.fz, "first component of F_k (homogeneous)");
  s_chardirs->add_option("--fw", chardirs.fw, "second component of F_k (homogeneous)");

  auto* s_petals = app.add_subcommand("petals", "calibrate petals and test convergence");
  add_map_options(s_petals, map_petals);
  s_petals->add_option("--m", petals.m, "petal index, 0 for all")->capture_default_str();
  s_petals->add_option("--eps", petals.eps_start)->capture_default_str();
  s_petals->add_option("--max-halvings", petals.max_halvings)->capture_default_str();
  s_petals->add_option("--probe-points", petals.probe_points)->capture_default_str();
  s_petals->add_option("--margin", petals.margin)->capture_default_str();
  s_petals->add_option("--seeds", petals.seeds)->capture_default_str();
  s_petals->add_option("--budget", petals.budget)->capture_default_str();
  s_petals->add_flag("--repelling", petals.repelling, "seed the repelling sectors instead");
  s_petals->add_option("--rng-seed", petals.rng_seed)->capture_default_str();

  auto* s_mono = app.add_subcommand("monodromy", "permutation of attracting directions along loops");
  s_mono->add_option("--q-max", monodromy.q_max)->capture_default_str();
  s_mono->add_option("--k-min", monodromy.k_min)->capture_default_str();
  s_mono->add_option("--k-max", monodromy.k_max)->capture_default_str();
  s_mono->add_option("--t0", monodromy.t0, "loop start as re,im")->capture_default_str();
  s_mono->add_option("--steps", monodromy.steps, "loop samples, 0 for 16 k p q")->capture_default_str();

  auto* s_basin = app.add_subcommand("basin", "classify a grid of seeds on an affine slice");
  add_map_options(s_basin, map_basin);
  s_basin->add_option("--base", basin.base, "slice base point; defaults to --seed");
  s_basin->add_option("--dir1", basin.dir1)->capture_default_str();
  s_basin->add_option("--dir2", basin.dir2)->capture_default_str();
  s_basin->add_option("--window", basin.window, "smin,smax,tmin,tmax")->capture_default_str();
  s_basin->add_option("--nx", basin.nx)->capture_default_str();
  s_basin->add_option("--ny", basin.ny)->capture_default_str();
  s_basin->add_option("--budget", basin.budget)->capture_default_str();
  s_basin->add_option("--tol", basin.tol)->capture_default_str();
  s_basin->add_option("--target", basin.target);
  s_basin->add_flag("--petals", basin.petals, "color converging cells by attracting direction");

  auto* s_siegel = app.add_subcommand("siegel", "linearizer, alpha track and reciprocal recursion");
  s_siegel->add_option("--theta", siegel.theta);
  s_siegel->add_option("--order", siegel.order)->capture_default_str();
  s_siegel->add_option("--z0", siegel.z0)->capture_default_str();
  s_siegel->add_option("--n-alpha", siegel.n_alpha)->capture_default_str();
  s_siegel->add_option("--n-recip", siegel.n_recip)->capture_default_str();
  s_siegel->add_option("--kappa", siegel.kappa)->capture_default_str();
  s_siegel->add_option("--probe-w0", siegel.probe_w0)->capture_default_str();
  s_siegel->add_option("--probe-budget", siegel.probe_budget)->capture_default_str();

  auto* s_extend = app.add_subcommand("extend-check", "does the map extend to P^2");
  add_map_options(s_extend, map_extend);

  for (auto* s : app.get_subcommands({})) s->configurable();

  // Config sections activate their subcommands too; the command line picks
  // the one to run.
  CLI::App* chosen = nullptr;
  for (int i = 1; i < argc && !chosen; ++i)
    for (auto* s : app.get_subcommands({}))
      if (std::string_view(argv[i]) == s->get_name()) chosen = s;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (!chosen) {
    err << "error: a subcommand is required\n";
    return kExitConfig;
  }
  if (common.threads < 1) {
    err << "error: --threads must be positive\n";
    return kExitConfig;
  }

  try {
    if (chosen == s_orbit) return cli::cmd_orbit(common, map_orbit, orbit, out);
    if (chosen == s_chardirs) return cli::cmd_chardirs(common, map_chardirs, chardirs, out);
    if (chosen == s_petals) return cli::cmd_petals(common, map_petals, petals, out);
    if (chosen == s_mono) return cli::cmd_monodromy(common, monodromy, out);
    if (chosen == s_basin) return cli::cmd_basin(common, map_basin, basin, out);
    if (chosen == s_siegel) return cli::cmd_siegel(common, siegel, out);
    return cli::cmd_extend_check(common, map_extend, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace fatou
