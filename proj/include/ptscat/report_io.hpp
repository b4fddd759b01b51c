#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ptscat/identities.hpp"
#include "ptscat/scan.hpp"
#include "ptscat/sweep.hpp"

namespace ptscat {

// Table formats. Numbers are written with 17 significant digits so that parsing a table
// reproduces every stored double exactly. Absent values are empty CSV cells / JSON null;
// non-finite amplitudes are "nan" in CSV and null in JSON.
//
// Report CSV column order:
//   k, T_re, T_im, Rl_re, Rl_im, Rr_re, Rr_im, T_abs2, Rl_abs2, Rr_abs2, D_re, D_im,
//   tau, lambda, rho, m1, m2, <one column per identity id>,
//   pt_sign, finite, condition, negk_T_re, negk_T_im, negk_Rl_re, negk_Rl_im, negk_Rr_re,
//   negk_Rr_im, negk_D_re, negk_D_im, negk_finite, negk_condition, m1_residue, m2_residue,
//   backend, inapplicable
// The last column lists inapplicable identities as "ID=reason" joined by ';'.

std::vector<std::string> report_csv_header();
std::string format_double(double x);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows);

std::string reports_to_csv(const std::vector<IdentityReport>& reports);
std::vector<IdentityReport> reports_from_csv(std::string_view text);
nlohmann::json reports_to_json(const std::vector<IdentityReport>& reports);
std::vector<IdentityReport> reports_from_json(const nlohmann::json& doc);

std::string scan_to_csv(const ScanResult& result);
ScanResult scan_from_csv(std::string_view text, double k_min, double k_max, double grid_step);
nlohmann::json scan_to_json(const ScanResult& result);
ScanResult scan_from_json(const nlohmann::json& doc);

/// Field-by-field equality treating NaN == NaN.
bool same_report(const IdentityReport& a, const IdentityReport& b);

}  // namespace ptscat
