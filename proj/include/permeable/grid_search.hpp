#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "permeable/exception_set.hpp"
#include "permeable/geometry.hpp"

namespace permeable {

struct GridSearchOptions {
  int depth = 10;            // grid step is (longest box side) * 2^-depth
  double inflate = 0.25;     // relative box inflation per axis
  int expansions = 4;        // box doublings tried when no path is found
  std::size_t node_cap = std::size_t{1} << 23;
};

struct GridSearchResult {
  std::optional<Polyline> path;  // smoothed witness, absent when disconnected
  std::size_t nodes = 0;
  std::string diagnostic;
};

/// True when the closed segment avoids the obstacle and both ends satisfy the
/// convex region constraints.
bool segment_free(const ExceptionSet* obstacle, const std::vector<HalfSpace>& region, const Segment& s);

/// Planar shortest path avoiding a closed obstacle: 16-neighbour Dijkstra on a
/// uniform grid followed by shortcut smoothing and vertex tightening.
GridSearchResult grid_shortest_path(const ExceptionSet* obstacle, const std::vector<HalfSpace>& region,
                                    const Point& x, const Point& y, const GridSearchOptions& options);

/// Greedy shortcutting until the length stops improving by more than kGeomTol,
/// then pulls interior vertices toward the chord of their neighbours.
Polyline smooth_path(const ExceptionSet* obstacle, const std::vector<HalfSpace>& region, const Polyline& path);

}  // namespace permeable
