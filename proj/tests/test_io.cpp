#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chcross/csv.hpp"
#include "chcross/vtk.hpp"

namespace {

using namespace chcross;

bool bits_equal(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

// std::stod raises out_of_range on subnormals (strtod flags ERANGE), so parse
// with plain strtod.
double parse_double(const std::string& s) {
  return std::strtod(s.c_str(), nullptr);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("format_double is shortest and round-trips bitwise") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-0.25) == "-0.25");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "-0");
  CHECK(format_double(1e300) == "1e+300");

  const double cases[] = {0.0,
                          -0.0,
                          1.0 / 3.0,
                          3.14159265358979323846,
                          1e-300,
                          1e300,
                          5e-324,
                          std::numeric_limits<double>::min(),
                          std::numeric_limits<double>::max(),
                          89.76383092104219,
                          -2.7729e-2};
  for (double v : cases) {
    CHECK(bits_equal(parse_double(format_double(v)), v));
  }

  std::mt19937_64 rng(20240817ull);
  int checked = 0;
  while (checked < 500) {
    const double v = std::bit_cast<double>(rng());
    if (!std::isfinite(v)) continue;
    CHECK(bits_equal(parse_double(format_double(v)), v));
    ++checked;
  }
}

TEST_CASE("energy CSV uses the fixed header and bitwise cells") {
  EnergyRecord a;
  a.step_index = 1;
  a.t = 0.5;
  a.E = -2.0;
  a.mass_phi = 11.5;
  a.mass_c = 0.25;
  a.dissipation = 0.0;
  a.mu_mean = -0.5;
  a.mu_w16_5 = 3.0;

  std::ostringstream os;
  write_energy_csv(os, {a});
  CHECK(os.str() ==
        "step,t,E,mass_phi,mass_c,dissipation,mu_mean,mu_w16_5\n"
        "1,0.5,-2,11.5,0.25,0,-0.5,3\n");

  // Awkward values survive a parse of the written row.
  EnergyRecord b;
  b.step_index = 42;
  b.t = 1.0 / 3.0;
  b.E = 89.76383092104219;
  b.mass_phi = -2.7729e-2;
  b.mass_c = 1e-300;
  b.dissipation = 5e-324;
  b.mu_mean = -0.0;
  b.mu_w16_5 = 3.14159265358979323846;
  std::ostringstream os2;
  write_energy_csv(os2, {b});
  std::istringstream in(os2.str());
  std::string line;
  std::getline(in, line);  // header
  std::getline(in, line);
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream row(line);
  while (std::getline(row, cell, ',')) cells.push_back(cell);
  REQUIRE(cells.size() == 8);
  CHECK(std::stoi(cells[0]) == 42);
  CHECK(bits_equal(parse_double(cells[1]), b.t));
  CHECK(bits_equal(parse_double(cells[2]), b.E));
  CHECK(bits_equal(parse_double(cells[3]), b.mass_phi));
  CHECK(bits_equal(parse_double(cells[4]), b.mass_c));
  CHECK(bits_equal(parse_double(cells[5]), b.dissipation));
  CHECK(bits_equal(parse_double(cells[6]), b.mu_mean));
  CHECK(bits_equal(parse_double(cells[7]), b.mu_w16_5));
}

TEST_CASE("rate CSV sorts by resolution and leaves empty rate cells") {
  RateRow fine;
  fine.resolution = 0.25;
  fine.err_phi_h1 = 0.5;
  fine.err_c = 0.5;
  fine.err_mu_h1 = 0.5;
  RateRow mid;
  mid.resolution = 0.5;
  mid.err_phi_h1 = 1.0;
  mid.err_c = 1.0;
  mid.err_mu_h1 = 1.0;
  mid.rate_phi = 1.0;
  mid.rate_c = 1.0;
  mid.rate_mu = 1.0;
  RateRow coarse;
  coarse.resolution = 1.0;
  coarse.err_phi_h1 = 2.0;
  coarse.err_c = 2.0;
  coarse.err_mu_h1 = 2.0;
  coarse.rate_phi = 1.0;
  coarse.rate_c = 1.0;
  coarse.rate_mu = 1.0;

  std::ostringstream os;
  write_rate_csv(os, {coarse, fine, mid});  // deliberately out of order
  CHECK(os.str() ==
        "resolution,err_phi_H1,rate_phi,err_c,rate_c,err_mu_H1,rate_mu\n"
        "0.25,0.5,,0.5,,0.5,\n"
        "0.5,1,1,1,1,1,1\n"
        "1,2,1,2,1,2,1\n");
}

TEST_CASE("VTK snapshots carry the structured grid and all three fields") {
  Mesh mesh = build_rect_mesh(0.0, 1.0, 0.0, 1.0, 1, 1);
  State s;
  s.phi = NodalFunction(mesh, {0.0, 0.25, 0.5, 1.0});
  s.c = NodalFunction(mesh, {1.0, 1.0, 1.0, 1.0});
  s.mu = NodalFunction(mesh, {-1.0, -1.0, -1.0, -1.0});
  s.t = 0.0;

  std::ostringstream os;
  write_field_vtk(os, s);
  CHECK(os.str() ==
        "# vtk DataFile Version 3.0\n"
        "chcross fields at t = 0\n"
        "ASCII\n"
        "DATASET STRUCTURED_GRID\n"
        "DIMENSIONS 2 2 1\n"
        "POINTS 4 double\n"
        "0 0 0\n"
        "1 0 0\n"
        "0 1 0\n"
        "1 1 0\n"
        "POINT_DATA 4\n"
        "SCALARS phi double 1\n"
        "LOOKUP_TABLE default\n"
        "0\n"
        "0.25\n"
        "0.5\n"
        "1\n"
        "SCALARS c double 1\n"
        "LOOKUP_TABLE default\n"
        "1\n"
        "1\n"
        "1\n"
        "1\n"
        "SCALARS mu double 1\n"
        "LOOKUP_TABLE default\n"
        "-1\n"
        "-1\n"
        "-1\n"
        "-1\n");

  Mesh other = build_rect_mesh(0.0, 1.0, 0.0, 1.0, 2, 2);
  State broken = s;
  broken.mu = NodalFunction(other, 0.0);
  CHECK_THROWS_AS(write_field_vtk(os, broken), std::invalid_argument);
}

TEST_CASE("path overloads write the same bytes as the stream overloads") {
  EnergyRecord rec;
  rec.step_index = 3;
  rec.t = 0.003;
  rec.E = 1.0 / 7.0;
  rec.mass_phi = 11.843525281307237;
  rec.mass_c = 19.739208802178716;
  rec.dissipation = 1.25e-4;
  rec.mu_mean = -3.5;
  rec.mu_w16_5 = 42.0;

  std::ostringstream os;
  write_energy_csv(os, {rec});
  write_energy_csv(std::string("test_io_energy.csv"), {rec});
  CHECK(slurp("test_io_energy.csv") == os.str());

  RateRow row;
  row.resolution = 0.5;
  row.err_phi_h1 = 0.125;
  row.err_c = 0.25;
  row.err_mu_h1 = 0.375;
  std::ostringstream rs;
  write_rate_csv(rs, {row});
  write_rate_csv(std::string("test_io_rates.csv"), {row});
  CHECK(slurp("test_io_rates.csv") == rs.str());

  Mesh mesh = build_rect_mesh(0.0, 1.0, 0.0, 1.0, 1, 1);
  State s;
  s.phi = NodalFunction(mesh, 0.5);
  s.c = NodalFunction(mesh, 0.25);
  s.mu = NodalFunction(mesh, -0.125);
  s.t = 0.125;
  std::ostringstream vs;
  write_field_vtk(vs, s);
  write_field_vtk(std::string("test_io_fields.vtk"), s);
  CHECK(slurp("test_io_fields.vtk") == vs.str());

  CHECK_THROWS_AS(
      write_energy_csv(std::string("no_such_dir/x.csv"),
                       std::vector<EnergyRecord>{}),
      std::runtime_error);
}

}  // TEST_SUITE
