#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chcross/convergence.hpp"
#include "chcross/diagnostics.hpp"

namespace chcross {

// Shortest decimal text that parses back to exactly x (std::to_chars).
// Makes every CSV bit-for-bit reproducible and round-trippable.
std::string format_double(double x);

// Header "step,t,E,mass_phi,mass_c,dissipation,mu_mean,mu_w16_5", one row per
// record.
void write_energy_csv(std::ostream& os, const std::vector<EnergyRecord>& records);
void write_energy_csv(const std::string& path,
                      const std::vector<EnergyRecord>& records);

// Header "resolution,err_phi_H1,rate_phi,err_c,rate_c,err_mu_H1,rate_mu";
// rows are sorted by resolution before writing; empty rate entries serialize
// as empty cells.
void write_rate_csv(std::ostream& os, std::vector<RateRow> rows);
void write_rate_csv(const std::string& path, std::vector<RateRow> rows);

}  // namespace chcross
