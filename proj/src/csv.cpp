#include "chcross/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace chcross {

std::string format_double(double x) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc()) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf, res.ptr);
}

namespace {

void require_stream(const std::ostream& os, const char* what) {
  if (!os) throw std::runtime_error(std::string(what) + ": write failed");
}

std::ofstream open_file(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  return os;
}

}  // namespace

void write_energy_csv(std::ostream& os,
                      const std::vector<EnergyRecord>& records) {
  os << "step,t,E,mass_phi,mass_c,dissipation,mu_mean,mu_w16_5\n";
  for (const EnergyRecord& r : records) {
    os << r.step_index << ',' << format_double(r.t) << ','
       << format_double(r.E) << ',' << format_double(r.mass_phi) << ','
       << format_double(r.mass_c) << ',' << format_double(r.dissipation) << ','
       << format_double(r.mu_mean) << ',' << format_double(r.mu_w16_5) << '\n';
  }
  require_stream(os, "write_energy_csv");
}

void write_energy_csv(const std::string& path,
                      const std::vector<EnergyRecord>& records) {
  std::ofstream os = open_file(path);
  write_energy_csv(os, records);
}

void write_rate_csv(std::ostream& os, std::vector<RateRow> rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const RateRow& a, const RateRow& b) {
                     return a.resolution < b.resolution;
                   });
  os << "resolution,err_phi_H1,rate_phi,err_c,rate_c,err_mu_H1,rate_mu\n";
  const auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const RateRow& r : rows) {
    os << format_double(r.resolution) << ',' << format_double(r.err_phi_h1)
       << ',' << cell(r.rate_phi) << ',' << format_double(r.err_c) << ','
       << cell(r.rate_c) << ',' << format_double(r.err_mu_h1) << ','
       << cell(r.rate_mu) << '\n';
  }
  require_stream(os, "write_rate_csv");
}

void write_rate_csv(const std::string& path, std::vector<RateRow> rows) {
  std::ofstream os = open_file(path);
  write_rate_csv(os, std::move(rows));
}

}  // namespace chcross
