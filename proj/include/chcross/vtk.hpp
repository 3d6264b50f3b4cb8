#pragma once

#include <iosfwd>
#include <string>

#include "chcross/stepper.hpp"

namespace chcross {

// Legacy VTK ASCII snapshot of a state: STRUCTURED_GRID of the
// (nx+1) x (ny+1) x 1 mesh points with three POINT_DATA scalar arrays
// named phi, c and mu.
void write_field_vtk(std::ostream& os, const State& state);
void write_field_vtk(const std::string& path, const State& state);

}  // namespace chcross
