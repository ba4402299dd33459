// homf — two-photon timing precision toolbox.
//
// Subcommands expose every computation as a scriptable command emitting CSV
// or JSON: qfi, hom-scan, fisher, figure {2|3|5}, time-resolved, montecarlo,
// jsa {export|import}. All flags are long-form; outputs are deterministic
// given the flags (plus the seed where one applies).
//
// Exit codes: 0 success, 2 validation error, 3 numerical-limit error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "homf/estimate.hpp"
#include "homf/figures.hpp"
#include "homf/hom.hpp"
#include "homf/metrology.hpp"
#include "homf/serialize.hpp"
#include "homf/timeresolved.hpp"

namespace {

using homf::Grid2D;
using homf::errc;
using json = nlohmann::ordered_json;
namespace spectra = homf::spectra;
namespace hom = homf::hom;
namespace metrology = homf::metrology;
namespace timeresolved = homf::timeresolved;
namespace estimate = homf::estimate;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int default_grid_points() {
    if (const char* env = std::getenv("HOMF_GRID_POINTS")) {
        const int n = std::atoi(env);
        if (n >= 2) return n;
    }
    return 257;
}

// Sink for either stdout or --output <path>.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) homf::fail(errc::io_error, "cannot open " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

struct ParamsFlags {
    double bw1 = 1.0, bw2 = 1.0, cov = 0.0, mean1 = 0.0, mean2 = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--bw1", bw1, "rms bandwidth of photon 1 (rad/s)");
        cmd->add_option("--bw2", bw2, "rms bandwidth of photon 2 (rad/s)");
        cmd->add_option("--cov", cov, "frequency covariance (rad^2/s^2)");
        cmd->add_option("--mean1", mean1, "mean frequency of photon 1 (rad/s)");
        cmd->add_option("--mean2", mean2, "mean frequency of photon 2 (rad/s)");
    }
    spectra::GaussianJsaParams params() const {
        spectra::GaussianJsaParams p;
        p.mean1 = mean1;
        p.mean2 = mean2;
        p.bw1 = bw1;
        p.bw2 = bw2;
        p.cov = cov;
        p.validate();
        return p;
    }
};

json params_json(const spectra::GaussianJsaParams& p) {
    return json{{"mean1", p.mean1}, {"mean2", p.mean2},
                {"bw1", p.bw1},     {"bw2", p.bw2},
                {"cov", p.cov}};
}

void emit_json(Output& out, const json& j) { out.stream() << j.dump(2) << "\n"; }

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// --- subcommand bodies -----------------------------------------------------

void run_qfi(const ParamsFlags& flags, std::uint64_t n, Output& out) {
    const auto p = flags.params();
    spectra::SpectralMoments m;
    m.mean1 = p.mean1;
    m.mean2 = p.mean2;
    m.bw1 = p.bw1;
    m.bw2 = p.bw2;
    m.cov = p.cov;
    const auto q = metrology::qfi_matrix(m);
    const auto eff = metrology::effective_qfi(m);

    json j;
    j["params"] = params_json(p);
    j["qfi_matrix"] = json{{"q_pp", q.q_pp}, {"q_mm", q.q_mm}, {"q_pm", q.q_pm}};
    j["q_eff_plus"] = eff.plus;
    j["q_eff_minus"] = eff.minus;
    j["n_trials"] = n;
    auto bound_json = [&](double q_eff) -> json {
        if (q_eff <= 0.0) return json{{"infinite", true}};
        const auto b = metrology::qcrb(q_eff, n);
        return json{{"variance_s2", b.variance_bound}, {"std_s", b.std_bound}};
    };
    j["qcrb_plus"] = bound_json(eff.plus);
    j["qcrb_minus"] = bound_json(eff.minus);
    emit_json(out, j);
}

void run_hom_scan(const ParamsFlags& flags, double eta, double tau_min,
                  double tau_max, int count, Output& out) {
    const auto p = flags.params();
    if (count < 2) homf::fail(errc::invalid_params, "--count must be >= 2");
    const auto dip = hom::hom_dip(p);
    if (tau_min == 0.0 && tau_max == 0.0) {
        tau_min = -5.0 * dip.width;
        tau_max = 5.0 * dip.width;
    }
    if (!(tau_max > tau_min))
        homf::fail(errc::invalid_params, "--tau-max must exceed --tau-min");

    auto& os = out.stream();
    os << "tau_minus_s,p_coincidence,cfi_paper_form_s-2\n";
    for (int k = 0; k < count; ++k) {
        const double tau = tau_min + (tau_max - tau_min) * k / (count - 1);
        const double pc = hom::coincidence_probability_gaussian(p, tau, eta);
        const double cfi = eta == 0.5 ? hom::cfi_from_dip(dip, tau) : 0.0;
        os << fmt(tau) << ',' << fmt(pc) << ',' << fmt(cfi) << '\n';
    }
}

void run_fisher(const ParamsFlags& flags, double tau_minus, std::uint64_t n,
                int grid_points, Output& out) {
    const auto p = flags.params();
    const auto dip = hom::hom_dip(p);
    const auto jsa = spectra::gaussian_jsa(p, spectra::default_grid(p, grid_points));
    const double h = dip.width / 1000.0;

    spectra::SpectralMoments m = spectra::moments(jsa);
    const auto eff = metrology::effective_qfi(m);

    json j;
    j["params"] = params_json(p);
    j["tau_minus_s"] = tau_minus;
    j["dip"] = json{{"visibility", dip.visibility},
                    {"width_s", dip.width},
                    {"baseline", dip.baseline}};
    j["optimal_operating_delay_s"] = hom::optimal_operating_delay(dip);
    j["cfi_closed_form"] = hom::cfi_from_dip(dip, tau_minus);
    try {
        j["cfi_numeric_paper"] =
            hom::cfi_numeric(jsa, tau_minus, {0.5}, h, hom::CfiForm::paper);
        j["cfi_numeric_binary"] =
            hom::cfi_numeric(jsa, tau_minus, {0.5}, h, hom::CfiForm::binary);
    } catch (const homf::error& e) {
        if (e.code() != errc::degenerate_probability) throw;
        j["cfi_numeric_paper"] = nullptr;
        j["cfi_numeric_binary"] = nullptr;
        j["cfi_numeric_note"] = "degenerate probability at this delay";
    }
    j["q_eff_minus"] = eff.minus;
    j["n_trials"] = n;
    if (eff.minus > 0.0)
        j["qcrb_minus_variance_s2"] = metrology::qcrb(eff.minus, n).variance_bound;
    emit_json(out, j);
}

void run_time_resolved(const ParamsFlags& flags, const timeresolved::DetectorConfig& det,
                       double tau_minus, double tau_plus, bool exact,
                       bool densities, int grid_points, Output& out) {
    const auto p = flags.params();
    const auto jsa = spectra::gaussian_jsa(p, spectra::transform_grid(p, grid_points));
    const auto jta = spectra::to_temporal(jsa);
    const auto dip = hom::hom_dip(p);

    const auto click =
        exact ? timeresolved::click_distribution_exact(jta, tau_minus, tau_plus, det)
              : timeresolved::click_distribution_slow(jta, tau_minus, tau_plus, det);
    const auto kernels = timeresolved::interference_kernels(jta, tau_minus, det.eta);

    timeresolved::TimeResolvedCfiOptions opts;
    opts.dip_width = dip.width;
    opts.use_exact = exact;
    const auto cfi = timeresolved::cfi_matrix_timeresolved(jta, tau_minus, tau_plus,
                                                           det, opts);

    json j;
    j["params"] = params_json(p);
    j["detector"] = json{{"theta", det.theta},
                         {"tau_res_s", det.tau_res},
                         {"tau_e_s", det.tau_e},
                         {"eta", det.eta},
                         {"effective_resolution_s", det.effective_resolution()}};
    j["tau_minus_s"] = tau_minus;
    j["tau_plus_s"] = tau_plus;
    j["form"] = exact ? "exact" : "slow";
    j["p0"] = click.p0;
    j["masses"] = json{{"p1", click.mass_p1()},
                       {"p2", click.mass_p2()},
                       {"p12", click.mass_p12()},
                       {"total", click.total()}};
    j["hom_kernel"] = kernels.coinc;
    j["cfi_matrix"] = json{{"f_pp", cfi.total.f_pp},
                           {"f_mm", cfi.total.f_mm},
                           {"f_pm", cfi.total.f_pm}};
    if (densities) j["distribution"] = homf::serialize::to_json(click);
    emit_json(out, j);
}

estimate::ExperimentConfig read_montecarlo_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) homf::fail(errc::io_error, "cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            homf::fail(errc::invalid_params,
                       "config line " + std::to_string(lineno) + " is not key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    estimate::ExperimentConfig cfg;
    auto take_double = [&](const std::string& key, double& dst) {
        if (auto it = kv.find(key); it != kv.end()) {
            dst = std::stod(it->second);
            kv.erase(it);
        }
    };
    auto take_u64 = [&](const std::string& key, std::uint64_t& dst) {
        if (auto it = kv.find(key); it != kv.end()) {
            dst = std::stoull(it->second);
            kv.erase(it);
        }
    };
    take_double("bw1", cfg.params.bw1);
    take_double("bw2", cfg.params.bw2);
    take_double("cov", cfg.params.cov);
    take_double("mean1", cfg.params.mean1);
    take_double("mean2", cfg.params.mean2);
    take_double("eta", cfg.eta);
    take_double("true_tau_minus", cfg.true_tau_minus);
    take_double("operating_offset", cfg.operating_offset);
    take_u64("n_trials", cfg.n_trials);
    take_u64("n_experiments", cfg.n_experiments);
    take_u64("seed", cfg.rng_seed);
    if (auto it = kv.find("branch"); it != kv.end()) {
        if (it->second == "positive")
            cfg.branch = estimate::Branch::positive;
        else if (it->second == "negative")
            cfg.branch = estimate::Branch::negative;
        else
            homf::fail(errc::invalid_params, "branch must be positive or negative");
        kv.erase(it);
    }
    if (!kv.empty())
        homf::fail(errc::invalid_params, "unknown config key: " + kv.begin()->first);
    return cfg;
}

json montecarlo_config_json(const estimate::ExperimentConfig& cfg) {
    json j = params_json(cfg.params);
    j["eta"] = cfg.eta;
    j["true_tau_minus"] = cfg.true_tau_minus;
    j["operating_offset"] = cfg.operating_offset;
    j["n_trials"] = cfg.n_trials;
    j["n_experiments"] = cfg.n_experiments;
    j["seed"] = cfg.rng_seed;
    j["branch"] = cfg.branch == estimate::Branch::positive ? "positive" : "negative";
    return j;
}

void run_montecarlo(const estimate::ExperimentConfig& cfg, const std::string& csv_path,
                    Output& out) {
    const auto report = estimate::run_experiment(cfg);

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) homf::fail(errc::io_error, "cannot open " + csv_path);
        csv << "experiment,coincidences,tau_minus_estimate_s,out_of_bracket\n";
        // Re-derives each row from its (seed, index) key; counter-based
        // streams make this identical to the loop inside run_experiment.
        for (std::uint64_t e = 0; e < cfg.n_experiments; ++e) {
            const auto k = estimate::simulate_counts(cfg, e);
            const auto est = estimate::mle_tau(k, cfg);
            csv << e << ',' << k << ','
                << fmt(est.tau - cfg.operating_offset) << ','
                << (est.out_of_bracket ? 1 : 0) << '\n';
        }
    }

    json j;
    j["config"] = montecarlo_config_json(cfg);
    j["report"] = json{{"mean_estimate_s", report.mean_estimate},
                       {"empirical_variance_s2", report.empirical_variance},
                       {"crb_variance_s2", report.crb_variance},
                       {"qcrb_variance_s2", report.qcrb_variance},
                       {"efficiency", report.efficiency},
                       {"out_of_bracket_fraction", report.out_of_bracket_fraction}};
    emit_json(out, j);
}

void run_jsa_export(const ParamsFlags& flags, int grid_points, double pad,
                    Output& out) {
    const auto p = flags.params();
    const auto jsa = spectra::gaussian_jsa(p, spectra::default_grid(p, grid_points, pad));
    emit_json(out, homf::serialize::to_json(jsa));
}

void run_jsa_import(const std::string& input, Output& out) {
    const auto ja = homf::serialize::amplitude_from_json(homf::serialize::load_json(input));
    json j;
    j["domain"] = ja.domain() == spectra::Domain::frequency ? "frequency" : "time";
    j["grid"] = json{{"start1", ja.grid().start1}, {"step1", ja.grid().step1},
                     {"n1", ja.grid().n1},         {"start2", ja.grid().start2},
                     {"step2", ja.grid().step2},   {"n2", ja.grid().n2}};
    j["norm_squared"] = ja.norm_squared();
    j["boundary_intensity_ratio"] = ja.boundary_intensity_ratio();
    if (ja.domain() == spectra::Domain::frequency) {
        try {
            const auto m = spectra::moments(ja);
            j["moments"] = json{{"mean1", m.mean1}, {"mean2", m.mean2},
                                {"bw1", m.bw1},     {"bw2", m.bw2},
                                {"cov", m.cov}};
        } catch (const homf::error& e) {
            j["moments"] = nullptr;
            j["moments_note"] = e.what();
        }
    }
    emit_json(out, j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"homf: precision limits of two-photon Hong-Ou-Mandel timing"};
    app.require_subcommand(1);

    std::string output_path;

    // qfi
    auto* qfi_cmd = app.add_subcommand("qfi", "quantum Fisher information and qCRBs");
    ParamsFlags qfi_flags;
    qfi_flags.attach(qfi_cmd);
    std::uint64_t qfi_n = 1;
    qfi_cmd->add_option("--n", qfi_n, "number of repeated trials");
    qfi_cmd->add_option("--output", output_path, "write to file instead of stdout");

    // hom-scan
    auto* scan_cmd = app.add_subcommand("hom-scan", "coincidence probability dip scan (CSV)");
    ParamsFlags scan_flags;
    scan_flags.attach(scan_cmd);
    double scan_eta = 0.5, scan_tau_min = 0.0, scan_tau_max = 0.0;
    int scan_count = 201;
    scan_cmd->add_option("--eta", scan_eta, "beamsplitter reflectance");
    scan_cmd->add_option("--tau-min", scan_tau_min, "start delay (s); default -5T");
    scan_cmd->add_option("--tau-max", scan_tau_max, "stop delay (s); default +5T");
    scan_cmd->add_option("--count", scan_count, "number of delay samples");
    scan_cmd->add_option("--output", output_path, "write to file instead of stdout");

    // fisher
    auto* fisher_cmd = app.add_subcommand("fisher", "classical Fisher information at a delay");
    ParamsFlags fisher_flags;
    fisher_flags.attach(fisher_cmd);
    double fisher_tau = 0.0;
    std::uint64_t fisher_n = 1;
    int fisher_grid = default_grid_points();
    fisher_cmd->add_option("--tau-minus", fisher_tau, "operating delay (s)");
    fisher_cmd->add_option("--n", fisher_n, "number of repeated trials");
    fisher_cmd->add_option("--grid-points", fisher_grid, "frequency grid points per axis");
    fisher_cmd->add_option("--output", output_path, "write to file instead of stdout");

    // figure
    auto* figure_cmd = app.add_subcommand("figure", "reference curve families (CSV)");
    int figure_which = 0;
    figure_cmd->add_option("which", figure_which, "figure id: 2, 3 or 5")->required();
    figure_cmd->add_option("--output", output_path, "write to file instead of stdout");

    // time-resolved
    auto* tr_cmd = app.add_subcommand("time-resolved", "time-resolving detector model");
    ParamsFlags tr_flags;
    tr_flags.attach(tr_cmd);
    timeresolved::DetectorConfig det;
    double tr_tau_minus = 0.0, tr_tau_plus = 0.0;
    bool tr_exact = false, tr_densities = false;
    int tr_grid = default_grid_points();
    tr_cmd->add_option("--theta", det.theta, "per-detector efficiency");
    tr_cmd->add_option("--tau-res", det.tau_res, "intrinsic time resolution (s)");
    tr_cmd->add_option("--tau-e", det.tau_e, "electronic response time (s)");
    tr_cmd->add_option("--eta", det.eta, "beamsplitter reflectance");
    tr_cmd->add_option("--tau-minus", tr_tau_minus, "relative delay (s)");
    tr_cmd->add_option("--tau-plus", tr_tau_plus, "mean delay (s)");
    tr_cmd->add_flag("--exact", tr_exact, "full convolution form instead of slow limit");
    tr_cmd->add_flag("--densities", tr_densities, "embed the full click densities");
    tr_cmd->add_option("--grid-points", tr_grid, "frequency grid points per axis");
    tr_cmd->add_option("--output", output_path, "write to file instead of stdout");

    // montecarlo
    auto* mc_cmd = app.add_subcommand("montecarlo", "Monte Carlo MLE saturation study");
    std::string mc_config_path, mc_csv_path;
    std::uint64_t mc_seed = 0;
    bool mc_seed_set = false;
    mc_cmd->add_option("--config", mc_config_path,
                       "flat key=value file: bw1 bw2 cov mean1 mean2 eta true_tau_minus "
                       "operating_offset n_trials n_experiments seed branch")
        ->required();
    mc_cmd->add_option("--seed", mc_seed, "override the config seed")
        ->each([&](const std::string&) { mc_seed_set = true; });
    mc_cmd->add_option("--csv", mc_csv_path, "also write one CSV row per experiment");
    mc_cmd->add_option("--output", output_path, "write to file instead of stdout");

    // jsa export/import
    auto* jsa_cmd = app.add_subcommand("jsa", "joint-amplitude file I/O");
    jsa_cmd->require_subcommand(1);
    auto* jsa_export = jsa_cmd->add_subcommand("export", "write a Gaussian JSA as JSON");
    ParamsFlags jsa_flags;
    jsa_flags.attach(jsa_export);
    int jsa_grid = default_grid_points();
    double jsa_pad = 6.0;
    jsa_export->add_option("--grid-points", jsa_grid, "grid points per axis");
    jsa_export->add_option("--pad", jsa_pad, "grid half-width in units of max bandwidth");
    jsa_export->add_option("--output", output_path, "write to file instead of stdout");
    auto* jsa_import = jsa_cmd->add_subcommand("import", "validate and summarize a JSA file");
    std::string jsa_input;
    jsa_import->add_option("--input", jsa_input, "joint-amplitude JSON file")->required();
    jsa_import->add_option("--output", output_path, "write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        Output out(output_path);
        if (*qfi_cmd) {
            run_qfi(qfi_flags, qfi_n, out);
        } else if (*scan_cmd) {
            run_hom_scan(scan_flags, scan_eta, scan_tau_min, scan_tau_max,
                         scan_count, out);
        } else if (*fisher_cmd) {
            run_fisher(fisher_flags, fisher_tau, fisher_n, fisher_grid, out);
        } else if (*figure_cmd) {
            homf::figures::write_figure(figure_which, out.stream());
        } else if (*tr_cmd) {
            run_time_resolved(tr_flags, det, tr_tau_minus, tr_tau_plus, tr_exact,
                              tr_densities, tr_grid, out);
        } else if (*mc_cmd) {
            auto cfg = read_montecarlo_config(mc_config_path);
            if (mc_seed_set) cfg.rng_seed = mc_seed;
            run_montecarlo(cfg, mc_csv_path, out);
        } else if (*jsa_export) {
            run_jsa_export(jsa_flags, jsa_grid, jsa_pad, out);
        } else if (*jsa_import) {
            run_jsa_import(jsa_input, out);
        }
    } catch (const homf::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return homf::is_validation_error(e.code()) ? kExitValidation : kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
