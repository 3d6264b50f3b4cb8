#include "chcross/vtk.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include "chcross/csv.hpp"

namespace chcross {

namespace {

void write_scalars(std::ostream& os, const char* name,
                   const std::vector<double>& values) {
  os << "SCALARS " << name << " double 1\n";
  os << "LOOKUP_TABLE default\n";
  for (double v : values) os << format_double(v) << '\n';
}

}  // namespace

void write_field_vtk(std::ostream& os, const State& state) {
  const Mesh* mesh = state.phi.mesh;
  if (mesh == nullptr || state.c.mesh != mesh || state.mu.mesh != mesh) {
    throw std::invalid_argument(
        "write_field_vtk: state fields must share one mesh");
  }
  const int npts = mesh->node_count();
  os << "# vtk DataFile Version 3.0\n";
  os << "chcross fields at t = " << format_double(state.t) << '\n';
  os << "ASCII\n";
  os << "DATASET STRUCTURED_GRID\n";
  os << "DIMENSIONS " << mesh->nx() + 1 << ' ' << mesh->ny() + 1 << " 1\n";
  os << "POINTS " << npts << " double\n";
  for (int i = 0; i < npts; ++i) {
    const Vec2& p = mesh->node(i);
    os << format_double(p.x) << ' ' << format_double(p.y) << " 0\n";
  }
  os << "POINT_DATA " << npts << '\n';
  write_scalars(os, "phi", state.phi.values);
  write_scalars(os, "c", state.c.values);
  write_scalars(os, "mu", state.mu.values);
  if (!os) throw std::runtime_error("write_field_vtk: write failed");
}

void write_field_vtk(const std::string& path, const State& state) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_field_vtk(os, state);
}

}  // namespace chcross
