#include "htmp/io.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <format>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace htmp::io {

using nlohmann::json;

std::vector<double> read_values_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw contract_error("cannot open input file: " + path);
    std::vector<double> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        std::string tok = line.substr(start);
        if (first) {
            first = false;
            if (tok == "value" || tok == "Value" || tok == "VALUE") continue;
        }
        try {
            size_t used = 0;
            double v = std::stod(tok, &used);
            out.push_back(v);
        } catch (const std::exception&) {
            throw contract_error("non-numeric line in " + path + ": " + tok);
        }
    }
    return out;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += std::format(".tmp.{}", static_cast<unsigned>(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw contract_error("cannot open output file: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

void write_values_csv(const std::string& path,
                      const std::vector<double>& values) {
    std::string body = "value\n";
    for (double v : values) body += std::format("{}\n", v);
    write_text_atomic(path, body);
}

std::string sidecar_path(const std::string& csv_path) {
    namespace fs = std::filesystem;
    fs::path p(csv_path);
    p.replace_extension(".meta.json");
    return p.string();
}

std::string sample_meta_json(const sampler::EigenSample& s) {
    json j;
    j["seed"] = s.meta.seed;
    j["stream_id"] = s.meta.stream_id;
    j["N"] = s.values.size();
    j["params"] = s.meta.source;
    return j.dump(2) + "\n";
}

namespace {

json fit_params_json(const estimators::FitReport& r) {
    json p;
    if (r.law == "invgamma") {
        p["alpha"] = r.alpha_ig;
        p["beta"] = r.beta_ig;
    } else {
        p["gamma"] = r.gamma;
        if (std::isinf(r.kappa))
            p["kappa"] = nullptr;  // MP degenerate case
        else
            p["kappa"] = r.kappa;
        p["scale"] = r.scale;
    }
    return p;
}

} // namespace

std::string fit_report_json(const estimators::FitReport& r) {
    json j;
    j["law"] = r.law;
    j["params"] = fit_params_json(r);
    j["ks"] = r.ks;
    j["loglik"] = r.loglik;
    j["n_points"] = r.n_points;
    j["window"] = {r.window_lo, r.window_hi};
    j["refined"] = r.refined;
    return j.dump(2) + "\n";
}

std::string kappa_estimate_json(const estimators::KappaEstimate& e) {
    json j;
    j["kappa_star"] = e.kappa_star;
    j["beta_star"] = e.beta_star;
    j["iterations"] = e.iterations;
    j["stderr"] = e.stderr_boot;
    return j.dump(2) + "\n";
}

std::string phase_report_json(const applications::PhaseReport& r) {
    json j;
    j["label"] = applications::phase_name(r.label);
    if (std::isinf(r.fit.kappa))
        j["kappa"] = nullptr;
    else
        j["kappa"] = r.fit.kappa;
    j["gamma"] = r.fit.gamma;
    j["scale"] = r.fit.scale;
    j["ks"] = r.fit.ks;
    j["spikes"] = r.spikes;
    return j.dump(2) + "\n";
}

std::string scaling_report_json(const applications::ScalingReport& r) {
    json j;
    j["lambda_grid"] = r.lambda_grid;
    j["error_values"] = r.error_values;
    j["fitted_slope"] = r.fitted_slope;
    j["candidate_a"] = r.candidate_a;
    j["candidate_b"] = r.candidate_b;
    j["matched"] = r.matched;
    return j.dump(2) + "\n";
}

std::string gradtail_report_json(const applications::GradTailReport& r) {
    json j;
    j["ks"] = r.ks;
    j["lower_slope"] = r.lower_slope;
    j["upper_index"] = r.upper_index;
    j["n_samples"] = r.n_samples;
    return j.dump(2) + "\n";
}

} // namespace htmp::io
