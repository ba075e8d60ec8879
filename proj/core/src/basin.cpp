#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "fatou/dynamics.hpp"

namespace fatou {

Point BasinGrid::center(int ix, int iy) const {
  const double s = slice.s_min + (ix + 0.5) / nx * (slice.s_max - slice.s_min);
  const double t = slice.t_max - (iy + 0.5) / ny * (slice.t_max - slice.t_min);
  return slice.at(s, t);
}

std::size_t BasinGrid::failed_count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const BasinCell& c) { return c.failed; }));
}

BasinGrid compute_basin(const PlanarMap& map, const BivarPoly& target, const Slice& slice, int nx, int ny,
                        int budget, double tol, int threads, const PetalIndexer& indexer) {
  if (nx < 1 || ny < 1) throw Error(ErrorKind::Precondition, "basin resolution must be positive");
  if (budget < 0) throw Error(ErrorKind::Precondition, "basin budget must be non-negative");
  BasinGrid grid{slice, nx, ny, budget, tol, {}};
  grid.cells.resize(static_cast<std::size_t>(nx) * ny);

  auto run_row = [&](int iy) {
    for (int ix = 0; ix < nx; ++ix) {
      BasinCell& cell = grid.cells[static_cast<std::size_t>(iy) * nx + ix];
      cell.steps = budget;
      if (budget == 0) continue;
      try {
        const OrbitVerdict v = classify_orbit(map, grid.center(ix, iy), target, budget, tol);
        cell.kind = v.kind;
        cell.steps = v.steps_used;
        if (v.kind == VerdictKind::ConvergesToTarget && indexer) cell.petal = indexer(v.previous_point, v.final_point);
      } catch (const Error&) {
        cell.failed = true;
        cell.kind = VerdictKind::Undecided;
      }
    }
  };

  // Rows are dealt round-robin; each cell is written by exactly one worker.
  const int workers = std::clamp(threads, 1, ny);
  if (workers == 1) {
    for (int iy = 0; iy < ny; ++iy) run_row(iy);
  } else {
    std::vector<std::jthread> pool;
    for (int wkr = 0; wkr < workers; ++wkr)
      pool.emplace_back([&, wkr] {
        for (int iy = wkr; iy < ny; iy += workers) run_row(iy);
      });
  }
  return grid;
}

namespace {

std::array<unsigned char, 3> petal_color(int petal) {
  // Hues spaced by the golden angle so neighbouring labels stay distinct.
  const double h = std::fmod(std::max(petal, 0) * 0.3819660112501051 + 0.05, 1.0) * 6.0;
  const double s = 0.8, v = 0.95;
  const int sector = static_cast<int>(h) % 6;
  const double f = h - std::floor(h);
  const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = v, g = t, b = p; break;
    case 1: r = q, g = v, b = p; break;
    case 2: r = p, g = v, b = t; break;
    case 3: r = p, g = q, b = v; break;
    case 4: r = t, g = p, b = v; break;
    default: r = v, g = p, b = q; break;
  }
  auto byte = [](double x) { return static_cast<unsigned char>(std::lround(x * 255.0)); };
  return {byte(r), byte(g), byte(b)};
}

}  // namespace

void write_basin_ppm(std::ostream& os, const BasinGrid& grid, const std::string& comment) {
  os << "P6\n";
  if (!comment.empty()) os << "# " << comment << "\n";
  os << grid.nx << " " << grid.ny << "\n255\n";
  for (const auto& cell : grid.cells) {
    std::array<unsigned char, 3> rgb{0, 0, 0};
    if (cell.kind == VerdictKind::Escapes) rgb = {255, 255, 255};
    else if (cell.kind == VerdictKind::ConvergesToTarget) rgb = petal_color(cell.petal);
    os.write(reinterpret_cast<const char*>(rgb.data()), 3);
  }
}

void write_basin_metadata(std::ostream& os, const BasinGrid& grid) {
  auto pt = [](Point p) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", p.z.real(), p.z.imag(), p.w.real(), p.w.imag());
    return std::string(buf);
  };
  char win[200];
  std::snprintf(win, sizeof win, "%.17g,%.17g,%.17g,%.17g", grid.slice.s_min, grid.slice.s_max, grid.slice.t_min,
                grid.slice.t_max);
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& c : grid.cells) ++counts[static_cast<int>(c.kind)];
  os << "base=" << pt(grid.slice.base) << "\n"
     << "dir1=" << pt(grid.slice.dir1) << "\n"
     << "dir2=" << pt(grid.slice.dir2) << "\n"
     << "window=" << win << "\n"
     << "resolution=" << grid.nx << "x" << grid.ny << "\n"
     << "budget=" << grid.budget << "\n";
  char tol[40];
  std::snprintf(tol, sizeof tol, "%.17g", grid.tol);
  os << "tol=" << tol << "\n"
     << "converged_cells=" << counts[0] << "\n"
     << "escaped_cells=" << counts[1] << "\n"
     << "undecided_cells=" << counts[2] << "\n"
     << "failed_cells=" << grid.failed_count() << "\n";
}

}  // namespace fatou
