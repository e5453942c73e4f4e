#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "deltacut/geometry.hpp"

namespace deltacut {

inline constexpr std::size_t kMaxGridCells = 100'000'000;

/// Axis-aligned box cut into cubic cells of edge `resolution` (mm). An axis
/// whose extent is not a multiple of the resolution gets one extra cell
/// that overhangs the max bound.
struct GridSpec {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  double z_min = 0.0, z_max = 0.0;
  double resolution = 1.0;

  /// Throws InvalidGridSpec or CellBudgetExceeded.
  void validate() const;

  std::array<std::size_t, 3> dims() const;
  std::size_t cell_count() const;
  Pose cell_center(std::size_t ix, std::size_t iy, std::size_t iz) const;

  bool operator==(const GridSpec&) const = default;
};

/// Bounds guaranteed to contain the workspace: horizontal radius
/// a + r_f + r_e, z in [-(r_f + r_e), 0].
GridSpec default_grid_spec(const RobotGeometry& geometry, double resolution);

/// Dense occupancy over a GridSpec. Cells are stored z-major: the linear
/// index of (ix, iy, iz) is (iz * ny + iy) * nx + ix.
class WorkspaceGrid {
 public:
  WorkspaceGrid(GridSpec spec, std::vector<std::uint8_t> occupancy);

  const GridSpec& spec() const { return spec_; }
  std::array<std::size_t, 3> dims() const { return dims_; }
  std::size_t size() const { return occupancy_.size(); }

  std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return (iz * dims_[1] + iy) * dims_[0] + ix;
  }
  bool occupied(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return occupancy_[index(ix, iy, iz)] != 0;
  }
  bool occupied(std::size_t linear) const { return occupancy_[linear] != 0; }

  std::size_t occupied_count() const;
  const std::vector<std::uint8_t>& occupancy() const { return occupancy_; }

  bool operator==(const WorkspaceGrid&) const = default;

 private:
  GridSpec spec_;
  std::array<std::size_t, 3> dims_;
  std::vector<std::uint8_t> occupancy_;
};

class PrescribedWorkspace {
 public:
  /// Throws InvalidPrescribedWorkspace when empty or non-finite.
  explicit PrescribedWorkspace(std::vector<Pose> points);

  const std::vector<Pose>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Pose> points_;
};

/// Flags every cell whose centre passes inverse kinematics. Slices are
/// evaluated on `threads` workers (0 = hardware concurrency); the result
/// does not depend on the thread count.
WorkspaceGrid compute_workspace(const RobotGeometry& geometry, const GridSpec& spec,
                                unsigned threads = 0);

/// Fraction of prescribed points that are exactly reachable.
double coverage(const RobotGeometry& geometry, const PrescribedWorkspace& prescribed);

/// Occupied cells times resolution^3 (mm^3).
double volume_estimate(const WorkspaceGrid& grid);

/// Binary grid dump: a text header followed by the occupancy packed eight
/// cells per byte, least significant bit first, in linear index order.
///
///   deltacut-grid 1
///   bounds <x_min> <x_max> <y_min> <y_max> <z_min> <z_max>
///   resolution <r>
///   dims <nx> <ny> <nz>
///   order z-major x-fastest lsb-first
///   geometry <f> <e> <rf> <re>        (optional)
///   occupied <count>
///   data <bytes>
///   <bytes of packed bits>
///
/// Numbers use 17 significant digits; lines end in LF.
void write_grid(std::ostream& out, const WorkspaceGrid& grid,
                const std::optional<RobotGeometry>& geometry = std::nullopt);
WorkspaceGrid read_grid(std::istream& in);

}  // namespace deltacut
