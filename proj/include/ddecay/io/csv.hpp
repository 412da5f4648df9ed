#pragma once

#include <string>
#include <vector>

#include "ddecay/analysis/fit.hpp"
#include "ddecay/floquet/stabilization.hpp"
#include "ddecay/types.hpp"

namespace dd {

// UTF-8, ',' separator, header row, %.17g floats. Files are written to a temporary name and renamed.
inline constexpr const char* kThetaHeader = "t,re_theta,im_theta,abs2";
inline constexpr const char* kManifoldHeader = "a,omega,r_s,g0,N,residual";

std::string format_double(double v);
void write_text_atomic(const std::string& path, const std::string& content);

std::string theta_csv(const SurvivalTrace& tr);
void write_theta_csv(const std::string& path, const SurvivalTrace& tr);
// reads t, re, im columns; throws DomainError on a malformed file
SurvivalTrace read_theta_csv(const std::string& path);

std::string manifold_csv(const std::vector<StabilizationPoint>& pts);
void write_manifold_csv(const std::string& path, const std::vector<StabilizationPoint>& pts);

// generic table: header + rows of numbers
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

std::string fit_report_csv(const FitReport& f);

}  // namespace dd
