#ifndef HTMP_IO_HPP
#define HTMP_IO_HPP

#include <string>
#include <vector>

#include "htmp/applications.hpp"
#include "htmp/estimators.hpp"
#include "htmp/sampler.hpp"

namespace htmp::io {

// One float per line; tolerates an optional `value` header line, CRLF
// endings, and blank lines.
std::vector<double> read_values_csv(const std::string& path);

// temp-file + rename
void write_text_atomic(const std::string& path, const std::string& content);

void write_values_csv(const std::string& path,
                      const std::vector<double>& values);

// foo.csv -> foo.meta.json
std::string sidecar_path(const std::string& csv_path);

std::string sample_meta_json(const sampler::EigenSample& s);
std::string fit_report_json(const estimators::FitReport& r);
std::string kappa_estimate_json(const estimators::KappaEstimate& e);
std::string phase_report_json(const applications::PhaseReport& r);
std::string scaling_report_json(const applications::ScalingReport& r);
std::string gradtail_report_json(const applications::GradTailReport& r);

} // namespace htmp::io

#endif
