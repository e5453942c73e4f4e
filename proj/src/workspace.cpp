#include "deltacut/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "deltacut/errors.hpp"
#include "deltacut/format.hpp"
#include "deltacut/kinematics.hpp"

namespace deltacut {
namespace {

std::size_t cells_along(double lo, double hi, double resolution) {
  const double n = (hi - lo) / resolution;
  const double nearest = std::round(n);
  if (std::abs(n - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::size_t>(std::max(1.0, nearest));
  }
  return static_cast<std::size_t>(std::ceil(n));
}

}  // namespace

void GridSpec::validate() const {
  const double values[] = {x_min, x_max, y_min, y_max, z_min, z_max, resolution};
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidGridSpec("grid bounds and resolution must be finite");
  }
  if (!(x_max > x_min)) throw InvalidGridSpec("grid: x_max > x_min violated");
  if (!(y_max > y_min)) throw InvalidGridSpec("grid: y_max > y_min violated");
  if (!(z_max > z_min)) throw InvalidGridSpec("grid: z_max > z_min violated");
  if (!(resolution > 0.0)) throw InvalidGridSpec("grid: resolution > 0 violated");

  // Guard in floating point before the dims cast can overflow.
  const double cells = std::ceil((x_max - x_min) / resolution) *
                       std::ceil((y_max - y_min) / resolution) *
                       std::ceil((z_max - z_min) / resolution);
  if (cells > 1.5 * static_cast<double>(kMaxGridCells) || cell_count() > kMaxGridCells) {
    std::ostringstream os;
    os << "CellBudgetExceeded: grid would need about " << cells << " cells (limit "
       << kMaxGridCells << ")";
    throw CellBudgetExceeded(os.str());
  }
}

std::array<std::size_t, 3> GridSpec::dims() const {
  return {cells_along(x_min, x_max, resolution), cells_along(y_min, y_max, resolution),
          cells_along(z_min, z_max, resolution)};
}

std::size_t GridSpec::cell_count() const {
  const auto d = dims();
  return d[0] * d[1] * d[2];
}

Pose GridSpec::cell_center(std::size_t ix, std::size_t iy, std::size_t iz) const {
  return {x_min + (static_cast<double>(ix) + 0.5) * resolution,
          y_min + (static_cast<double>(iy) + 0.5) * resolution,
          z_min + (static_cast<double>(iz) + 0.5) * resolution};
}

GridSpec default_grid_spec(const RobotGeometry& geometry, double resolution) {
  const double radius = geometry.base_offset() + geometry.rf() + geometry.re();
  const double depth = geometry.rf() + geometry.re();
  return {-radius, radius, -radius, radius, -depth, 0.0, resolution};
}

WorkspaceGrid::WorkspaceGrid(GridSpec spec, std::vector<std::uint8_t> occupancy)
    : spec_(spec), dims_(spec.dims()), occupancy_(std::move(occupancy)) {
  if (occupancy_.size() != dims_[0] * dims_[1] * dims_[2]) {
    throw InvalidGridSpec("occupancy size does not match grid dimensions");
  }
}

std::size_t WorkspaceGrid::occupied_count() const {
  return static_cast<std::size_t>(
      std::count_if(occupancy_.begin(), occupancy_.end(), [](std::uint8_t v) { return v != 0; }));
}

PrescribedWorkspace::PrescribedWorkspace(std::vector<Pose> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidPrescribedWorkspace("prescribed workspace is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].finite()) {
      throw InvalidPrescribedWorkspace("prescribed point " + std::to_string(i) +
                                       " is not finite");
    }
  }
}

WorkspaceGrid compute_workspace(const RobotGeometry& geometry, const GridSpec& spec,
                                unsigned threads) {
  spec.validate();
  const auto [nx, ny, nz] = spec.dims();
  std::vector<std::uint8_t> occupancy(nx * ny * nz, 0);

  // Each worker owns a disjoint set of z slices.
  const auto fill_slices = [&](std::size_t first, std::size_t stride) {
    for (std::size_t iz = first; iz < nz; iz += stride) {
      for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
          const bool hit = is_reachable(geometry, spec.cell_center(ix, iy, iz));
          occupancy[(iz * ny + iy) * nx + ix] = hit ? 1 : 0;
        }
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, nz);
  if (workers <= 1) {
    fill_slices(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(fill_slices, w, workers);
  }
  return WorkspaceGrid(spec, std::move(occupancy));
}

double coverage(const RobotGeometry& geometry, const PrescribedWorkspace& prescribed) {
  std::size_t hits = 0;
  for (const Pose& p : prescribed.points()) {
    if (is_reachable(geometry, p)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(prescribed.size());
}

double volume_estimate(const WorkspaceGrid& grid) {
  const double r = grid.spec().resolution;
  return static_cast<double>(grid.occupied_count()) * r * r * r;
}

void write_grid(std::ostream& out, const WorkspaceGrid& grid,
                const std::optional<RobotGeometry>& geometry) {
  const GridSpec& s = grid.spec();
  const auto d = grid.dims();
  std::vector<std::uint8_t> packed((grid.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.occupied(i)) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }

  std::string header = "deltacut-grid 1\n";
  header += "bounds " + format_real(s.x_min) + " " + format_real(s.x_max) + " " +
            format_real(s.y_min) + " " + format_real(s.y_max) + " " + format_real(s.z_min) +
            " " + format_real(s.z_max) + "\n";
  header += "resolution " + format_real(s.resolution) + "\n";
  header += "dims " + std::to_string(d[0]) + " " + std::to_string(d[1]) + " " +
            std::to_string(d[2]) + "\n";
  header += "order z-major x-fastest lsb-first\n";
  if (geometry) {
    header += "geometry " + format_real(geometry->f()) + " " + format_real(geometry->e()) + " " +
              format_real(geometry->rf()) + " " + format_real(geometry->re()) + "\n";
  }
  header += "occupied " + std::to_string(grid.occupied_count()) + "\n";
  header += "data " + std::to_string(packed.size()) + "\n";

  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(packed.data()),
            static_cast<std::streamsize>(packed.size()));
}

WorkspaceGrid read_grid(std::istream& in) {
  const auto fail = [](const std::string& why) -> ParseError {
    return ParseError("grid dump: " + why);
  };
  std::string line;
  if (!std::getline(in, line) || line != "deltacut-grid 1") throw fail("bad magic line");

  GridSpec spec;
  std::array<std::size_t, 3> dims{};
  std::size_t bytes = 0;
  bool have_bounds = false, have_res = false, have_dims = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "bounds") {
      ls >> spec.x_min >> spec.x_max >> spec.y_min >> spec.y_max >> spec.z_min >> spec.z_max;
      have_bounds = static_cast<bool>(ls);
    } else if (key == "resolution") {
      ls >> spec.resolution;
      have_res = static_cast<bool>(ls);
    } else if (key == "dims") {
      ls >> dims[0] >> dims[1] >> dims[2];
      have_dims = static_cast<bool>(ls);
    } else if (key == "data") {
      ls >> bytes;
      if (!ls) throw fail("bad data line");
      break;
    }
  }
  if (!have_bounds || !have_res || !have_dims) throw fail("incomplete header");
  spec.validate();
  if (spec.dims() != dims) throw fail("dims do not match bounds and resolution");

  const std::size_t cells = dims[0] * dims[1] * dims[2];
  if (bytes != (cells + 7) / 8) throw fail("data length does not match dims");
  std::vector<std::uint8_t> packed(bytes);
  in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) throw fail("truncated data");

  std::vector<std::uint8_t> occupancy(cells);
  for (std::size_t i = 0; i < cells; ++i) occupancy[i] = (packed[i / 8] >> (i % 8)) & 1u;
  return WorkspaceGrid(spec, std::move(occupancy));
}

}  // namespace deltacut
