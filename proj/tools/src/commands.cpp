#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include "cli_internal.hpp"
#include "fatou/cli.hpp"
#include "fatou/monodromy.hpp"
#include "fatou/parabolic.hpp"
#include "fatou/siegel.hpp"

namespace fatou::cli {

int cmd_orbit(const CommonOpts& c, const MapOpts& m, const OrbitOpts& o, std::ostream& out) {
  Record rec;
  rec.add("command", std::string("orbit"));
  const PlanarMap map = build_map(m, rec);
  const Point seed = resolve_base(m, map, rec);
  rec.add("n", o.n);
  rec.add("tol", o.tol);
  const BivarPoly target = default_target(map, o.target, rec);
  const std::string h = rec.hash();

  const Orbit orbit = iterate(map, seed, o.n);
  const OrbitVerdict v = classify_orbit(map, seed, target, o.n, o.tol);
  {
    std::ofstream os = open_output(c, "orbit", h, "csv");
    write_orbit_csv(os, orbit);
  }
  {
    std::ofstream os = open_output(c, "orbit", h, "txt");
    os << "config_hash=" << h << "\n"
       << "points=" << orbit.points.size() << "\n"
       << "escaped=" << (orbit.escaped ? "true" : "false") << "\n"
       << "verdict=" << to_string(v.kind) << "\n"
       << "steps_used=" << v.steps_used << "\n"
       << "final_distance=" << fmt(v.final_distance) << "\n"
       << "final_point=" << fmt(v.final_point) << "\n";
    if (v.tangent_direction) os << "tangent_direction=" << fmt(v.tangent_direction->v1()) << "," << fmt(v.tangent_direction->v2()) << "\n";
    else os << "tangent_direction=none\n";
  }
  write_run_record(c, "orbit", rec);
  out << "orbit " << h << ": " << orbit.points.size() << " points, " << to_string(v.kind) << "\n";
  return kExitOk;
}

namespace {

BinaryForm form_from_text(const std::string& text) {
  const BivarPoly p = parse_poly(text);
  const int d = std::max(p.degree(), 0);
  const BinaryForm f = homogeneous_part(p, d);
  if (!(to_poly(f) == p)) throw Error(ErrorKind::Parse, "'" + text + "' is not homogeneous");
  return f;
}

}  // namespace

int cmd_chardirs(const CommonOpts& c, const MapOpts& m, const CharDirsOpts& o, std::ostream& out) {
  Record rec;
  rec.add("command", std::string("chardirs"));
  GermData germ;
  std::optional<Complex> condition;
  if (!o.fz.empty() || !o.fw.empty()) {
    if (o.fz.empty() || o.fw.empty()) throw Error(ErrorKind::Parse, "--fz and --fw go together");
    rec.add("fz", o.fz);
    rec.add("fw", o.fw);
    germ.fz = form_from_text(o.fz);
    germ.fw = form_from_text(o.fw);
    if (germ.fz.degree() != germ.fw.degree()) {
      // A zero component has degree 0; lift it to the other's degree.
      if (germ.fz.is_zero()) germ.fz = BinaryForm(germ.fw.degree());
      else if (germ.fw.is_zero()) germ.fw = BinaryForm(germ.fz.degree());
      else throw Error(ErrorKind::Parse, "--fz and --fw differ in degree");
    }
    germ.k = germ.fz.degree();
  } else {
    const PlanarMap map = build_map(m, rec);
    const Point base = resolve_base(m, map, rec);
    germ = germ_at(map, base);
    if (map.tangent()) condition = condition_check(map.tangent()->g, map.tangent()->P, map.tangent()->Q, base);
  }
  const std::string h = rec.hash();
  const CharDirectionResult res = char_directions(germ.fz, germ.fw);
  {
    std::ofstream os = open_output(c, "chardirs", h, "txt");
    os << "config_hash=" << h << "\nk=" << germ.k << "\n";
    if (condition) os << "condition=" << fmt(*condition) << "\n";
    os << "dicritical=" << (res.dicritical ? "true" : "false") << "\n"
       << "directions=" << res.directions.size() << "\n"
       << "v1_re,v1_im,v2_re,v2_im,lambda_re,lambda_im,degenerate,multiplicity\n";
    for (const auto& d : res.directions)
      os << fmt(d.v.v1()) << "," << fmt(d.v.v2()) << "," << fmt(d.lambda_char) << "," << (d.degenerate ? 1 : 0) << ","
         << d.multiplicity << "\n";
  }
  write_run_record(c, "chardirs", rec);
  out << "chardirs " << h << ": " << (res.dicritical ? "dicritical" : std::to_string(res.directions.size()) + " directions")
      << "\n";
  return kExitOk;
}

int cmd_petals(const CommonOpts& c, const MapOpts& m, const PetalsOpts& o, std::ostream& out) {
  Record rec;
  rec.add("command", std::string("petals"));
  const PlanarMap map = build_map(m, rec);
  const Point base = resolve_base(m, map, rec);
  rec.add("m", o.m);
  rec.add("eps_start", o.eps_start);
  rec.add("max_halvings", o.max_halvings);
  rec.add("probe_points", o.probe_points);
  rec.add("margin", o.margin);
  rec.add("seeds", o.seeds);
  rec.add("budget", o.budget);
  rec.add("repelling", o.repelling);
  rec.add("rng_seed", std::to_string(o.rng_seed));
  const std::string h = rec.hash();

  const NormalForm nf = local_normal_form(map, base, o.eps_start);
  const int k = nf.chart->order();
  if (o.m < 0 || o.m > k - 1) throw Error(ErrorKind::Parse, "--m must lie in 0..k-1");
  std::ofstream os = open_output(c, "petals", h, "txt");
  os << "config_hash=" << h << "\nbranch_note=" << nf.branch_note << "\ngamma=" << fmt(nf.chart->gamma())
     << "\ncondition=" << fmt(nf.chart->condition_at_base()) << "\n";
  write_run_record(c, "petals", rec);

  int status = kExitOk;
  int converged = 0, exited = 0, total = 0;
  for (const PetalSpec& petal : nf.petals) {
    if (o.m != 0 && petal.m != o.m) continue;
    os << "\n[petal m=" << petal.m << "]\n";
    PetalSpec spec = petal;
    spec.angle_shift = o.repelling ? std::numbers::pi / (k - 1) : 0.0;
    CalibrationOptions copts{o.eps_start, o.max_halvings, o.probe_points, o.margin};
    CalibrationResult cal;
    try {
      cal = calibrate_petal(map, spec, copts);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CalibrationFailed) throw;
      os << "calibration=failed\nmessage=" << e.what() << "\n";
      status = kExitNumeric;
      continue;
    }
    os << "calibration=ok\nhalvings=" << cal.halvings << "\nunit_fit_radius=" << fmt(cal.spec.fit_radius) << "\n";
    PetalTestOptions topts;
    topts.repelling = o.repelling;
    topts.rng_seed = o.rng_seed;
    try {
      const PetalReport r = petal_convergence_test(map, cal.spec, o.seeds, o.budget, topts);
      write_petal_report(os, r);
      converged += r.converged;
      exited += r.exited;
      total += static_cast<int>(r.seeds.size());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CalibrationFailed) throw;
      os << "convergence=failed\nmessage=" << e.what() << "\n";
      status = kExitNumeric;
    }
  }
  out << "petals " << h << ": " << converged << "/" << total << " converged, " << exited << " exited"
      << (status == kExitOk ? "" : " (calibration failed)") << "\n";
  return status;
}

int cmd_monodromy(const CommonOpts& c, const MonodromyOpts& o, std::ostream& out) {
  Record rec;
  rec.add("command", std::string("monodromy"));
  const Complex t0 = parse_complex(o.t0);
  rec.add("q_max", o.q_max);
  rec.add("k_min", o.k_min);
  rec.add("k_max", o.k_max);
  rec.add("t0", fmt(t0));
  rec.add("steps", o.steps);
  if (o.q_max < 2 || o.k_min < 2 || o.k_max < o.k_min) throw Error(ErrorKind::Parse, "empty (p, q, k) range");
  const std::string h = rec.hash();

  std::ofstream csv = open_output(c, "monodromy", h, "csv");
  std::ofstream notes = open_output(c, "monodromy", h, "txt");
  csv << monodromy_header() << "\n";
  notes << "config_hash=" << h << "\np,q,k,classes,case,beyond_stated_cases\n";
  int lines = 0, matches = 0;
  for (int k = o.k_min; k <= o.k_max; ++k)
    for (int q = 2; q <= o.q_max; ++q)
      for (int p = 1; p < q; ++p) {
        if (std::gcd(p, q) != 1) {
          if (k == o.k_min) notes << "# skipped p=" << p << " q=" << q << ": not coprime\n";
          continue;
        }
        const CuspParams params{p, q, k};
        const int steps = o.steps > 0 ? o.steps : 16 * k * p * q;
        const MonodromyReport r = continue_loop(params, t0, steps);
        write_monodromy_line(csv, r);
        ++lines;
        if (!r.match) continue;
        ++matches;
        const ComponentVerdict v = component_verdict(r);
        notes << p << "," << q << "," << k << "," << v.class_count << "," << to_string(v.dichotomy) << ","
              << (v.beyond_stated_cases ? "true" : "false") << "\n";
      }
  write_run_record(c, "monodromy", rec);
  out << "monodromy " << h << ": " << matches << "/" << lines << " match the shift law\n";
  return kExitOk;
}

int cmd_basin(const CommonOpts& c, const MapOpts& m, const BasinOpts& o, std::ostream& out) {
  Record rec;
  rec.add("command", std::string("basin"));
  const PlanarMap map = build_map(m, rec);
  Slice slice;
  if (!o.base.empty()) {
    slice.base = parse_point(o.base);
    rec.add("base", fmt(slice.base));
  } else {
    slice.base = resolve_base(m, map, rec);
  }
  slice.dir1 = parse_point(o.dir1);
  slice.dir2 = parse_point(o.dir2);
  const auto win = parse_reals(o.window);
  if (win.size() != 4) throw Error(ErrorKind::Parse, "--window expects smin,smax,tmin,tmax");
  slice.s_min = win[0];
  slice.s_max = win[1];
  slice.t_min = win[2];
  slice.t_max = win[3];
  rec.add("dir1", fmt(slice.dir1));
  rec.add("dir2", fmt(slice.dir2));
  rec.add("window", o.window);
  rec.add("nx", o.nx);
  rec.add("ny", o.ny);
  rec.add("budget", o.budget);
  rec.add("tol", o.tol);
  rec.add("petals", o.petals);
  const BivarPoly target = default_target(map, o.target, rec);
  const std::string h = rec.hash();

  PetalIndexer indexer;
  if (o.petals) {
    if (!map.tangent()) throw Error(ErrorKind::Parse, "--petals needs a map tangent to the identity");
    indexer = cusp_petal_indexer(map);
  }
  const BasinGrid grid = compute_basin(map, target, slice, o.nx, o.ny, o.budget, o.tol, c.threads, indexer);
  {
    std::ofstream os = open_output(c, "basin", h, "ppm");
    write_basin_ppm(os, grid, "config_hash=" + h);
  }
  {
    std::ofstream os = open_output(c, "basin", h, "meta");
    os << "config_hash=" << h << "\n";
    write_basin_metadata(os, grid);
  }
  write_run_record(c, "basin", rec);
  const std::size_t failed = grid.failed_count();
  out << "basin " << h << ": " << grid.cells.size() << " cells, " << failed << " failed\n";
  return failed * 100 > grid.cells.size() ? kExitNumeric : kExitOk;
}

int cmd_siegel(const CommonOpts& c, const SiegelOpts& o, std::ostream& out) {
  Record rec;
  rec.add("command", std::string("siegel"));
  const Complex z0 = parse_complex(o.z0);
  const Complex probe_w0 = parse_complex(o.probe_w0);
  rec.add("theta", o.theta);
  rec.add("order", o.order);
  rec.add("z0", fmt(z0));
  rec.add("n_alpha", o.n_alpha);
  rec.add("n_recip", o.n_recip);
  rec.add("kappa", o.kappa);
  rec.add("probe_w0", fmt(probe_w0));
  rec.add("probe_budget", o.probe_budget);
  const std::string h = rec.hash();

  const PlanarMap map = make_skew_siegel(o.theta);
  const LinearizerSeries eta = build_linearizer(o.theta, o.order);
  const double residual = conjugacy_residual(eta, 0.5 * eta.radius_estimate);
  const AlphaTrack track = alpha_track(o.theta, z0, o.n_alpha);
  const HalfplaneSpec hp = calibrate_halfplane(map, z0, o.kappa);
  const Complex u0 = hp.sample(2.0, 0.0);
  const ReciprocalReport rr = reciprocal_recursion_check(map, z0, 1.0 / u0, o.n_recip);
  const JuliaProbeReport jp = julia_probe_siegel_circle(map, probe_w0, 1e-6, o.probe_budget);
  {
    std::ofstream os = open_output(c, "linearizer", h, "csv");
    write_linearizer(os, eta);
  }
  std::ofstream os = open_output(c, "siegel", h, "txt");
  os << "config_hash=" << h << "\n"
     << "linearizer_radius_estimate=" << fmt(eta.radius_estimate) << "\n"
     << "conjugacy_residual_half_radius=" << fmt(residual) << "\n"
     << "c3=" << fmt(eta.coeff(3)) << "\n"
     << "alpha_sup_dev=" << fmt(track.sup_dev) << "\n"
     << "alpha_sup_dev_over_abs_z0=" << fmt(track.sup_dev / std::abs(z0)) << "\n"
     << "halfplane_K=" << fmt(hp.K) << "\n"
     << "halfplane_kappa=" << fmt(hp.kappa) << "\n"
     << "halfplane_doublings=" << hp.doublings << "\n"
     << "reciprocal_u0=" << fmt(u0) << "\n"
     << "reciprocal_fitted_constant=" << fmt(rr.fitted_constant) << "\n"
     << "reciprocal_median_scaled_defect=" << fmt(rr.median_scaled_defect) << "\n"
     << "reciprocal_transient=" << rr.transient << "\n"
     << "reciprocal_monotone_after_transient=" << (rr.monotone_after_transient ? "true" : "false") << "\n"
     << "reciprocal_max_consistency_error=" << fmt(rr.max_consistency_error) << "\n"
     << "reciprocal_final_abs_u=" << fmt(std::abs(rr.u.back())) << "\n"
     << "probe_fiber_stays_in_plane=" << (jp.fiber_stays_in_plane ? "true" : "false") << "\n"
     << "probe_fiber_bounded=" << (jp.fiber_bounded ? "true" : "false") << "\n"
     << "probe_separation=" << fmt(jp.separation) << "\n"
     << "probe_first_separation_step=" << jp.first_separation_step << "\n"
     << "probe_final_w_modulus_change=" << fmt(jp.final_w_modulus_change) << "\n"
     << "probe_sensitive=" << (jp.sensitive ? "true" : "false") << "\n";
  write_run_record(c, "siegel", rec);
  out << "siegel " << h << ": residual " << fmt(residual) << ", sup_dev " << fmt(track.sup_dev) << "\n";
  return kExitOk;
}

int cmd_extend_check(const CommonOpts& c, const MapOpts& m, std::ostream& out) {
  Record rec;
  rec.add("command", std::string("extend-check"));
  const PlanarMap map = build_map(m, rec);
  const std::string h = rec.hash();
  const bool ok = check_projective_extension(map);
  const int d = map.degree();
  const BinaryForm tz = homogeneous_part(map.pz(), std::max(d, 0));
  const BinaryForm tw = homogeneous_part(map.pw(), std::max(d, 0));
  std::ofstream os = open_output(c, "extend", h, "txt");
  os << "config_hash=" << h << "\ndegree=" << d << "\n";
  if (!tz.is_zero() && !tw.is_zero()) os << "resultant_abs=" << fmt(std::abs(binary_resultant(tz, tw))) << "\n";
  os << "extends=" << (ok ? "true" : "false") << "\n";
  write_run_record(c, "extend", rec);
  out << "extend-check " << h << ": " << (ok ? "extends" : "does not extend") << "\n";
  return kExitOk;
}

}  // namespace fatou::cli
