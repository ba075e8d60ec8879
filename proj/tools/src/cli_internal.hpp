#pragma once

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fatou/dynamics.hpp"

namespace fatou::cli {

struct CommonOpts {
  std::string out = ".";
  int threads = 1;
  bool no_timestamp = false;
};

struct MapOpts {
  std::string family = "cusp";
  double theta = kGoldenMean;
  int p = 2, q = 3, k = 2;
  std::string g, P, Q, pz, pw;
  std::string seed;
  std::string seed_on_curve;
};

struct OrbitOpts {
  int n = 1000;
  double tol = 1e-10;
  std::string target;
};

struct CharDirsOpts {
  std::string fz, fw;
};

struct PetalsOpts {
  int m = 0;  // 0 = every petal
  double eps_start = 0.1;
  int max_halvings = 6;
  int probe_points = 64;
  double margin = 10.0;
  int seeds = 64;
  int budget = 100000;
  bool repelling = false;
  std::uint64_t rng_seed = 20130415;
};

struct MonodromyOpts {
  int q_max = 7;
  int k_min = 2, k_max = 6;
  std::string t0 = "1,0";
  int steps = 0;  // 0 = 16 k p q
};

struct BasinOpts {
  std::string base, dir1 = "1,0,0,0", dir2 = "0,1,0,0";
  std::string window = "-1,1,-1,1";
  int nx = 64, ny = 64;
  int budget = 1000;
  double tol = 1e-8;
  std::string target;
  bool petals = false;
};

struct SiegelOpts {
  double theta = kGoldenMean;
  int order = 50;
  std::string z0 = "0.05,0";
  int n_alpha = 100000;
  int n_recip = 100000;
  double kappa = 10.0;
  std::string probe_w0 = "0.5,0";
  int probe_budget = 10000;
};

// Resolved configuration as ordered key=value lines. The config hash is
// FNV-1a over these lines, so it names everything that shapes the output.
class Record {
 public:
  void add(std::string key, std::string value) { lines_.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, double value);
  void add(std::string key, long value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, int value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, bool value) { add(std::move(key), std::string(value ? "true" : "false")); }
  std::string text() const;
  std::string hash() const;

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

std::string fmt(double x);
std::string fmt(Complex c);
std::string fmt(Point p);

std::vector<double> parse_reals(const std::string& text);
Complex parse_complex(const std::string& text);
// Two numbers are real z and w; four are re/im pairs.
Point parse_point(const std::string& text);

PlanarMap build_map(const MapOpts& opts, Record& rec);
Point resolve_base(const MapOpts& opts, const PlanarMap& map, Record& rec);
BivarPoly default_target(const PlanarMap& map, const std::string& target, Record& rec);

// Output file `<stem>_<hash>.<ext>` under opts.out.
std::ofstream open_output(const CommonOpts& opts, const std::string& stem, const std::string& hash,
                          const std::string& ext, std::string* path = nullptr);
void write_run_record(const CommonOpts& opts, const std::string& command, const Record& rec);

int cmd_orbit(const CommonOpts&, const MapOpts&, const OrbitOpts&, std::ostream& out);
int cmd_chardirs(const CommonOpts&, const MapOpts&, const CharDirsOpts&, std::ostream& out);
int cmd_petals(const CommonOpts&, const MapOpts&, const PetalsOpts&, std::ostream& out);
int cmd_monodromy(const CommonOpts&, const MonodromyOpts&, std::ostream& out);
int cmd_basin(const CommonOpts&, const MapOpts&, const BasinOpts&, std::ostream& out);
int cmd_siegel(const CommonOpts&, const SiegelOpts&, std::ostream& out);
int cmd_extend_check(const CommonOpts&, const MapOpts&, std::ostream& out);

}  // namespace fatou::cli
