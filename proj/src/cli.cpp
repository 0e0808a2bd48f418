#include "htmp/cli.hpp"

#include <cmath>
#include <format>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <json.hpp>

#include "htmp/applications.hpp"
#include "htmp/estimators.hpp"
#include "htmp/io.hpp"
#include "htmp/laws.hpp"
#include "htmp/sampler.hpp"

namespace htmp::cli {

namespace {

using nlohmann::json;

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        io::write_text_atomic(out_path, content);
}

std::shared_ptr<const laws::SpectralLaw> make_law(const std::string& law,
                                                  double gamma, double kappa,
                                                  double alpha, double beta) {
    if (law == "mp") return std::make_shared<laws::MpLaw>(laws::MPParams{gamma});
    if (law == "htmp")
        return std::make_shared<laws::HtmpLaw>(laws::HTMPParams{gamma, kappa});
    if (law == "inverse")
        return std::make_shared<laws::InverseLaw>(
            std::make_shared<laws::HtmpLaw>(laws::HTMPParams{gamma, kappa}));
    if (law == "invgamma")
        return std::make_shared<laws::InvGammaLaw>(laws::InvGammaParams{alpha, beta});
    throw contract_error("unknown law: " + law);
}

estimators::StructureSpec parse_structure(const std::string& name, int m, int n,
                                          int d) {
    estimators::StructureSpec s;
    s.m = m;
    s.n = n;
    s.d_free = d;
    using K = estimators::StructureKind;
    if (name == "diag") s.kind = K::Diagonal;
    else if (name == "comblock") s.kind = K::CommutingBlockDiagonal;
    else if (name == "symblock") s.kind = K::SymmetricBlockDiagonal;
    else if (name == "kron") s.kind = K::KroneckerLike;
    else if (name == "full") s.kind = K::FullSymmetric;
    else if (name == "free") s.kind = K::FreeEigenvectors;
    else throw contract_error("unknown structure: " + name);
    return s;
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"high-temperature Marchenko-Pastur laboratory"};
    app.require_subcommand(1);

    // ---- sample
    auto* sample = app.add_subcommand("sample", "draw an eigenvalue sample");
    std::string s_law = "htmp", s_out;
    double s_gamma = 0.5, s_kappa = 2.0, s_alpha = 0.0, s_beta = 1.0;
    int s_n = 1000;
    std::uint64_t s_seed = 42;
    sample->add_option("--law", s_law)->check(CLI::IsMember({"mp", "htmp", "inverse"}));
    sample->add_option("--gamma", s_gamma);
    sample->add_option("--kappa", s_kappa);
    sample->add_option("--alpha", s_alpha, "master-model alpha (inverse law)");
    sample->add_option("--beta", s_beta, "master-model beta (inverse law)");
    sample->add_option("--n", s_n)->check(CLI::PositiveNumber);
    sample->add_option("--seed", s_seed);
    sample->add_option("--out", s_out)->required();

    // ---- pdf
    auto* pdf = app.add_subcommand("pdf", "tabulate a density");
    std::string p_law = "htmp", p_out;
    double p_gamma = 0.5, p_kappa = 2.0, p_alpha = 2.0, p_beta = 1.0;
    double p_xmin = 0.0, p_xmax = 4.0;
    int p_points = 200;
    pdf->add_option("--law", p_law)
        ->check(CLI::IsMember({"mp", "htmp", "inverse", "invgamma"}));
    pdf->add_option("--gamma", p_gamma);
    pdf->add_option("--kappa", p_kappa);
    pdf->add_option("--alpha", p_alpha);
    pdf->add_option("--beta", p_beta);
    pdf->add_option("--xmin", p_xmin);
    pdf->add_option("--xmax", p_xmax);
    pdf->add_option("--points", p_points)->check(CLI::Range(2, 1000000));
    pdf->add_option("--out", p_out);

    // ---- fit
    auto* fit = app.add_subcommand("fit", "fit a spectrum file");
    std::string f_in, f_law = "htmp", f_out;
    double f_window = 1.0;
    fit->add_option("--in", f_in)->required();
    fit->add_option("--law", f_law)->check(CLI::IsMember({"htmp", "invgamma"}));
    fit->add_option("--window", f_window, "upper quantile cutoff (invgamma)");
    fit->add_option("--out", f_out);

    // ---- kappa
    auto* kap = app.add_subcommand("kappa", "estimate kappa* for a structure");
    std::string k_structure = "symblock", k_out;
    int k_m = 5, k_n = 20, k_d = 0, k_p = 50;
    double k_alpha = 2.0, k_tol = 0.0, k_step = 1.0, k_beta0 = 0.0;
    std::uint64_t k_seed = 42;
    kap->add_option("--structure", k_structure)
        ->check(CLI::IsMember({"diag", "comblock", "symblock", "kron", "full", "free"}));
    kap->add_option("--m", k_m)->check(CLI::PositiveNumber);
    kap->add_option("--n", k_n)->check(CLI::PositiveNumber);
    kap->add_option("--d", k_d);
    kap->add_option("--p", k_p)->check(CLI::Range(2, 1000000));
    kap->add_option("--alpha", k_alpha, "Laguerre weight shape");
    kap->add_option("--tol", k_tol, "stopping tolerance (default 1e-3/N)");
    kap->add_option("--step", k_step, "damping factor in (0,1]");
    kap->add_option("--beta0", k_beta0, "initial beta (default 5/N)");
    kap->add_option("--seed", k_seed);
    kap->add_option("--out", k_out);

    // ---- phases
    auto* phases = app.add_subcommand("phases", "classify a spectrum file");
    std::string ph_in, ph_out;
    phases->add_option("--in", ph_in)->required();
    phases->add_option("--out", ph_out);

    // ---- scaling
    auto* scaling = app.add_subcommand("scaling", "ridge error curve");
    std::string sc_out;
    double sc_gamma = 0.5, sc_kappa = 2.0, sc_lmin = 1e-4, sc_lmax = 1e-3;
    int sc_points = 25;
    scaling->add_option("--gamma", sc_gamma);
    scaling->add_option("--kappa", sc_kappa);
    scaling->add_option("--lmin", sc_lmin);
    scaling->add_option("--lmax", sc_lmax);
    scaling->add_option("--points", sc_points)->check(CLI::Range(2, 100000));
    scaling->add_option("--out", sc_out);

    // ---- gradtails
    auto* grad = app.add_subcommand("gradtails", "gradient-norm tail check");
    std::string g_out;
    int g_N = 10, g_d = 50, g_samples = 5000;
    std::uint64_t g_seed = 42;
    grad->add_option("--N", g_N)->check(CLI::PositiveNumber);
    grad->add_option("--d", g_d)->check(CLI::PositiveNumber);
    grad->add_option("--samples", g_samples)->check(CLI::PositiveNumber);
    grad->add_option("--seed", g_seed);
    grad->add_option("--out", g_out);

    // ---- convolve
    auto* conv = app.add_subcommand("convolve", "covariance conjugation");
    std::string c_in, c_sigma, c_out;
    std::uint64_t c_seed = 42;
    conv->add_option("--in", c_in)->required();
    conv->add_option("--sigma", c_sigma)->required();
    conv->add_option("--seed", c_seed);
    conv->add_option("--out", c_out)->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*sample) {
        sampler::EigenSample es;
        if (s_law == "mp") {
            es = sampler::sample_mp_esd(s_n, s_gamma, RngStream(s_seed));
        } else if (s_law == "htmp") {
            es = sampler::sample_htmp_esd(s_n, s_gamma, s_kappa, RngStream(s_seed));
        } else {
            double g = applications::gamma_from_master(s_alpha, s_kappa);
            es = sampler::sample_inverse_esd(s_n, g, s_kappa, s_alpha, s_beta,
                                             RngStream(s_seed));
        }
        io::write_values_csv(s_out, es.values);
        io::write_text_atomic(io::sidecar_path(s_out), io::sample_meta_json(es));
        return 0;
    }

    if (*pdf) {
        auto law = make_law(p_law, p_gamma, p_kappa, p_alpha, p_beta);
        if (!(p_xmax > p_xmin)) throw contract_error("pdf: xmax must exceed xmin");
        std::string body = "x,density\n";
        for (int i = 0; i < p_points; ++i) {
            double x = p_xmin + (p_xmax - p_xmin) * i / (p_points - 1.0);
            double lo = law->support_lo();
            double rho = (x < lo || (x <= 0.0 && lo >= 0.0 && p_law != "mp"))
                             ? 0.0
                             : law->pdf(std::max(x, lo));
            body += std::format("{},{}\n", x, rho);
        }
        emit(p_out, body);
        return 0;
    }

    if (*fit) {
        std::vector<double> v = io::read_values_csv(f_in);
        estimators::FitReport r;
        if (f_law == "invgamma") {
            r = estimators::invgamma_mle(
                v, f_window < 1.0 ? std::optional<double>(f_window) : std::nullopt);
        } else {
            r = estimators::fit_htmp(v);
        }
        emit(f_out, io::fit_report_json(r));
        return 0;
    }

    if (*kap) {
        auto s = parse_structure(k_structure, k_m, k_n, k_d);
        const int N = s.matrix_size();
        double tol = k_tol > 0.0 ? k_tol : 1e-3 / N;
        estimators::FixedPointOptions opt;
        opt.beta0 = k_beta0;
        auto est = estimators::estimate_kappa_fixed_point(
            s, k_alpha, k_p, k_step, tol, RngStream(k_seed), opt);
        emit(k_out, io::kappa_estimate_json(est));
        return 0;
    }

    if (*phases) {
        std::vector<double> v = io::read_values_csv(ph_in);
        auto r = applications::classify_phase(v);
        emit(ph_out, io::phase_report_json(r));
        return 0;
    }

    if (*scaling) {
        if (!(sc_lmin > 0.0 && sc_lmax > sc_lmin))
            throw contract_error("scaling: need 0 < lmin < lmax");
        std::vector<double> grid(sc_points);
        for (int i = 0; i < sc_points; ++i)
            grid[i] = sc_lmax * std::pow(sc_lmin / sc_lmax,
                                         i / (sc_points - 1.0));
        auto r = applications::scaling_error_curve(sc_gamma, sc_kappa, grid);
        emit(sc_out, io::scaling_report_json(r));
        return 0;
    }

    if (*grad) {
        auto r = applications::gradient_norm_tail_check(g_N, g_d, g_samples,
                                                        RngStream(g_seed));
        emit(g_out, io::gradtail_report_json(r));
        return 0;
    }

    if (*conv) {
        std::vector<double> v = io::read_values_csv(c_in);
        std::vector<double> sig = io::read_values_csv(c_sigma);
        sampler::EigenSample in;
        in.values = v;
        std::sort(in.values.begin(), in.values.end());
        in.meta.seed = c_seed;
        in.meta.source = c_in;
        auto out = sampler::conjugate_with_covariance(in, sig, RngStream(c_seed));
        io::write_values_csv(c_out, out.values);
        io::write_text_atomic(io::sidecar_path(c_out), io::sample_meta_json(out));
        return 0;
    }
    return 0;
}

} // namespace

int dispatch(const std::vector<std::string>& args) {
    try {
        return run(args);
    } catch (const contract_error& e) {
        std::cerr << "argument error: " << e.what() << "\nrun with --help for usage\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "argument error: " << e.what() << "\nrun with --help for usage\n";
        return 2;
    } catch (const precision_error& e) {
        json j;
        j["error"] = {{"type", "precision"}, {"message", e.what()}};
        std::cerr << j.dump() << "\n";
        return 3;
    } catch (const estimation_error& e) {
        json j;
        j["error"] = {{"type", "estimation"}, {"message", e.what()}};
        std::cerr << j.dump() << "\n";
        return 3;
    } catch (const std::exception& e) {
        json j;
        j["error"] = {{"type", "runtime"}, {"message", e.what()}};
        std::cerr << j.dump() << "\n";
        return 3;
    }
}

} // namespace htmp::cli
