#include "cli_app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mrcmix/analytic.hpp"
#include "mrcmix/errors.hpp"
#include "mrcmix/montecarlo.hpp"
#include "mrcmix/params.hpp"

namespace mrcmix::cli {

namespace {

constexpr const char* kVersion = "mrcmix 0.1.0";

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::uint64_t generate_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Tag for a q^2 policy column name: 0.76 -> "0p76".
std::string q2_tag(double q2) {
    std::ostringstream os;
    os << q2;
    std::string tag = os.str();
    std::replace(tag.begin(), tag.end(), '.', 'p');
    return tag;
}

struct CommonOpts {
    SystemParams params;
    std::optional<double> intensity;
    int antennas = 4;
    double threshold_db = 1.0;
    SimConfig sim;
    std::optional<std::uint64_t> seed;
    std::string window = "auto";
    std::string out_path;
    std::string format = "csv";
    std::string config_path;
    bool seed_generated = false;

    void resolve() {
        if (intensity) {
            params.lambda = *intensity;
            params.p = 1.0;
        }
        if (window == "auto" || window == "AUTO") {
            sim.window_half_width.reset();
        } else {
            double half_width = 0.0;
            try {
                std::size_t pos = 0;
                half_width = std::stod(window, &pos);
                if (pos != window.size()) throw std::invalid_argument(window);
            } catch (const std::exception&) {
                throw CLI::ValidationError("--window", "expected 'auto' or a positive length");
            }
            sim.window_half_width = half_width;
        }
        if (!seed) {
            seed = generate_seed();
            seed_generated = true;
        }
        sim.master_seed = *seed;
        params.validate();
        sim.validate();
    }
};

void add_system_options(CLI::App* cmd, CommonOpts& opts) {
    auto* lambda = cmd->add_option("--lambda", opts.params.lambda,
                                   "transmitter density per m^2")->capture_default_str();
    auto* p = cmd->add_option("--p", opts.params.p, "ALOHA transmit probability")
                  ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    auto* intensity = cmd->add_option("--intensity", opts.intensity,
                                      "combined interferer intensity lambda*p per m^2 "
                                      "(alternative to --lambda/--p)");
    intensity->excludes(lambda)->excludes(p);
    cmd->add_option("--alpha", opts.params.alpha, "path-loss exponent (> 2)")
        ->capture_default_str();
    cmd->add_option("--d", opts.params.d, "serving-link distance in m")
        ->capture_default_str();
    cmd->add_option("--epsilon", opts.params.epsilon,
                    "path-loss regularizer (0 = singular path loss)")
        ->capture_default_str();
}

void add_sim_options(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--trials", opts.sim.trials, "Monte Carlo trials")
        ->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seed", opts.seed,
                    "master seed (generated and reported when omitted)");
    cmd->add_option("--workers", opts.sim.workers,
                    "worker threads (0 = hardware concurrency)")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd->add_option("--window", opts.window,
                    "simulation window half-width in m, or 'auto' for an average "
                    "of 1000 interferers")->capture_default_str();
}

void add_output_options(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--out", opts.out_path, "write results to a file instead of stdout");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "jsonl", "text"}))->capture_default_str();
    cmd->add_option("--config", opts.config_path,
                    "configuration file with key=value lines (flags take precedence)");
}

// The config file is expanded into synthetic tokens ahead of the user's
// flags; combined with take-last repeat handling this gives the
// precedence flags > config > built-in defaults.
std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw CLI::ValidationError("--config", "expects a file path");
            return args[i + 1];
        }
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> read_config_pairs(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw CLI::ValidationError("--config", "cannot open " + path);
    auto trim = [](std::string s) {
        const auto begin = s.find_first_not_of(" \t\r");
        const auto end = s.find_last_not_of(" \t\r");
        if (begin == std::string::npos) return std::string();
        return s.substr(begin, end - begin + 1);
    };
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    while (std::getline(file, line)) {
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--config", "expected key=value, got: " + stripped);
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                                  (value.front() == '\'' && value.back() == '\'')))
            value = value.substr(1, value.size() - 2);
        if (key.empty())
            throw CLI::ValidationError("--config", "empty key in line: " + stripped);
        pairs.emplace_back(std::move(key), std::move(value));
    }
    return pairs;
}

// Lets a later (command-line) occurrence override an earlier (config)
// one on every single-value option.
void allow_config_overrides(CLI::App& app) {
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
        for (CLI::Option* opt : sub->get_options()) {
            if (opt->get_expected_max() == 1)
                opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        }
    }
}

struct ResultRow {
    double t_db = 0.0, t_linear = 0.0;
    int antennas = 0;
    double alpha = 0.0, intensity = 0.0, d = 0.0;
    double q_tuned = std::numeric_limits<double>::quiet_NaN();
    double q2_tuned = std::numeric_limits<double>::quiet_NaN();
    double f_residual = std::numeric_limits<double>::quiet_NaN();
    double pout_tuned = std::numeric_limits<double>::quiet_NaN();
    double pout_q2_half = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> pout_extra;
    double pout_mc = std::numeric_limits<double>::quiet_NaN();
    double pout_mc_stderr = std::numeric_limits<double>::quiet_NaN();
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
    std::string status = "ok";
};

std::string config_comment(const CommonOpts& opts) {
    std::ostringstream os;
    os << "# config: lambda=" << format_double(opts.params.lambda)
       << " p=" << format_double(opts.params.p)
       << " intensity=" << format_double(opts.params.intensity())
       << " alpha=" << format_double(opts.params.alpha)
       << " d=" << format_double(opts.params.d)
       << " epsilon=" << format_double(opts.params.epsilon)
       << " trials=" << opts.sim.trials
       << " seed=" << *opts.seed << (opts.seed_generated ? " (generated)" : "")
       << " window=" << (opts.sim.window_half_width
                             ? format_double(*opts.sim.window_half_width)
                             : std::string("auto"))
       << " workers=" << opts.sim.workers;
    return os.str();
}

void write_rows_csv(std::ostream& out, const CommonOpts& opts,
                    const std::vector<double>& extra_q2, const std::vector<ResultRow>& rows) {
    out << "# " << kVersion << "\n" << config_comment(opts) << "\n";
    out << "T_dB,T_linear,N,alpha,intensity,d,q_tuned,q2_tuned,f_residual,"
           "pout_analytic_tuned,pout_analytic_q2_0p5,pout_mc,pout_mc_stderr,trials,seed";
    for (double q2 : extra_q2) out << ",pout_analytic_q2_" << q2_tag(q2);
    out << ",wall_ms,status\n";
    for (const ResultRow& r : rows) {
        out << format_double(r.t_db) << ',' << format_double(r.t_linear) << ','
            << r.antennas << ',' << format_double(r.alpha) << ','
            << format_double(r.intensity) << ',' << format_double(r.d) << ','
            << format_double(r.q_tuned) << ',' << format_double(r.q2_tuned) << ','
            << format_double(r.f_residual) << ',' << format_double(r.pout_tuned) << ','
            << format_double(r.pout_q2_half) << ',' << format_double(r.pout_mc) << ','
            << format_double(r.pout_mc_stderr) << ',' << r.trials << ',' << r.seed;
        for (double v : r.pout_extra) out << ',' << format_double(v);
        std::string status = r.status;
        std::replace(status.begin(), status.end(), ',', ';');
        out << ',' << format_double(r.wall_ms) << ',' << status << "\n";
    }
}

void write_rows_jsonl(std::ostream& out, const std::vector<double>& extra_q2,
                      const std::vector<ResultRow>& rows) {
    for (const ResultRow& r : rows) {
        nlohmann::json j{{"T_dB", r.t_db},
                         {"T_linear", r.t_linear},
                         {"N", r.antennas},
                         {"alpha", r.alpha},
                         {"intensity", r.intensity},
                         {"d", r.d},
                         {"q_tuned", r.q_tuned},
                         {"q2_tuned", r.q2_tuned},
                         {"f_residual", r.f_residual},
                         {"pout_analytic_tuned", r.pout_tuned},
                         {"pout_analytic_q2_0p5", r.pout_q2_half},
                         {"pout_mc", r.pout_mc},
                         {"pout_mc_stderr", r.pout_mc_stderr},
                         {"trials", r.trials},
                         {"seed", r.seed},
                         {"wall_ms", r.wall_ms},
                         {"status", r.status}};
        for (std::size_t i = 0; i < extra_q2.size(); ++i)
            j["pout_analytic_q2_" + q2_tag(extra_q2[i])] = r.pout_extra[i];
        out << j.dump() << "\n";
    }
}

// Writes to --out when given, otherwise to the provided stream.
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

// Analytic columns of one sweep row; MC columns are filled by the caller.
void fill_analytic_columns(ResultRow& row, const CommonOpts& opts,
                           const std::vector<double>& extra_q2) {
    const double t0 = now_ms();
    try {
        const double C = constant_C(opts.params.intensity(), opts.params.alpha);
        const double s_max = row.t_linear * std::pow(opts.params.d, opts.params.alpha);
        double q_for_tuned_column = 0.5;
        if (row.antennas > 1) {
            // A single antenna has identical joint CCDFs for every q, so
            // there is nothing to tune and the outage is q-invariant.
            const TuneResult tuned = tune_q(opts.params, row.antennas, row.t_linear);
            row.q_tuned = tuned.q;
            row.q2_tuned = tuned.q_squared;
            row.f_residual = tuned.residual;
            q_for_tuned_column = tuned.q;
        }
        const std::vector<double> w =
            mixture_w_values(row.antennas, s_max, C, opts.params.alpha);
        row.pout_tuned = combine_w_values(w, q_for_tuned_column);
        row.pout_q2_half = combine_w_values(w, std::sqrt(0.5));
        for (double q2 : extra_q2) row.pout_extra.push_back(combine_w_values(w, std::sqrt(q2)));
    } catch (const std::exception& e) {
        row.status = e.what();
        row.pout_extra.resize(extra_q2.size(), std::numeric_limits<double>::quiet_NaN());
    }
    row.wall_ms += now_ms() - t0;
}

int cmd_outage_sweep(CommonOpts& opts, const std::vector<double>& thresholds_db,
                     const std::vector<double>& extra_q2, std::ostream& out) {
    std::vector<double> t_db = thresholds_db;
    std::sort(t_db.begin(), t_db.end());
    std::vector<double> t_linear;
    for (double db : t_db) t_linear.push_back(db_to_linear(db));

    std::vector<ResultRow> rows(t_db.size());
    for (std::size_t i = 0; i < t_db.size(); ++i) {
        ResultRow& row = rows[i];
        row.t_db = t_db[i];
        row.t_linear = t_linear[i];
        row.antennas = opts.antennas;
        row.alpha = opts.params.alpha;
        row.intensity = opts.params.intensity();
        row.d = opts.params.d;
        row.trials = opts.sim.trials;
        row.seed = *opts.seed;
        fill_analytic_columns(row, opts, extra_q2);
    }

    // One Monte Carlo pass covers the whole threshold grid; each per-T
    // estimate is bit-identical to a single-threshold run with this seed.
    const double t0 = now_ms();
    const PppGridResult mc = simulate_ppp_grid(opts.params, opts.antennas, t_linear, opts.sim);
    const double mc_share = (now_ms() - t0) / static_cast<double>(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].pout_mc = mc.outage[i].mean;
        rows[i].pout_mc_stderr = mc.outage[i].std_error;
        rows[i].wall_ms += mc_share;
    }

    OutputTarget target(opts.out_path, out);
    if (opts.format == "jsonl")
        write_rows_jsonl(target.stream(), extra_q2, rows);
    else
        write_rows_csv(target.stream(), opts, extra_q2, rows);
    return kExitOk;
}

int cmd_antenna_sweep(CommonOpts& opts, const std::vector<int>& antenna_grid,
                      const std::vector<double>& extra_q2, std::ostream& out) {
    std::vector<int> grid = antenna_grid;
    std::sort(grid.begin(), grid.end());
    const double t_linear = db_to_linear(opts.threshold_db);

    std::vector<ResultRow> rows(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ResultRow& row = rows[i];
        row.t_db = opts.threshold_db;
        row.t_linear = t_linear;
        row.antennas = grid[i];
        row.alpha = opts.params.alpha;
        row.intensity = opts.params.intensity();
        row.d = opts.params.d;
        row.trials = opts.sim.trials;
        row.seed = *opts.seed;
        fill_analytic_columns(row, opts, extra_q2);

        const double t0 = now_ms();
        try {
            const EstimateCI mc =
                simulate_mrc_outage_ppp(opts.params, grid[i], t_linear, opts.sim);
            row.pout_mc = mc.mean;
            row.pout_mc_stderr = mc.std_error;
        } catch (const std::exception& e) {
            if (row.status == "ok") row.status = e.what();
        }
        row.wall_ms += now_ms() - t0;
    }

    OutputTarget target(opts.out_path, out);
    if (opts.format == "jsonl")
        write_rows_jsonl(target.stream(), extra_q2, rows);
    else
        write_rows_csv(target.stream(), opts, extra_q2, rows);
    return kExitOk;
}

int cmd_tune_q(CommonOpts& opts, std::ostream& out) {
    const double t_linear = db_to_linear(opts.threshold_db);
    const TuneResult result = tune_q(opts.params, opts.antennas, t_linear);
    OutputTarget target(opts.out_path, out);
    std::ostream& os = target.stream();
    if (opts.format == "jsonl") {
        nlohmann::json j{{"N", opts.antennas},
                         {"alpha", opts.params.alpha},
                         {"intensity", opts.params.intensity()},
                         {"d", opts.params.d},
                         {"T_dB", opts.threshold_db},
                         {"T_linear", t_linear},
                         {"B", result.B},
                         {"q_tuned", result.q},
                         {"q2_tuned", result.q_squared},
                         {"f_residual", result.residual},
                         {"sign_changes", result.sign_changes}};
        os << j.dump() << "\n";
    } else if (opts.format == "csv") {
        os << "# " << kVersion << "\n" << config_comment(opts) << "\n";
        os << "N,alpha,intensity,d,T_dB,T_linear,B,q_tuned,q2_tuned,f_residual\n";
        os << opts.antennas << ',' << format_double(opts.params.alpha) << ','
           << format_double(opts.params.intensity()) << ',' << format_double(opts.params.d)
           << ',' << format_double(opts.threshold_db) << ',' << format_double(t_linear) << ','
           << format_double(result.B) << ',' << format_double(result.q) << ','
           << format_double(result.q_squared) << ',' << format_double(result.residual) << "\n";
    } else {
        os << "N = " << opts.antennas << ", alpha = " << opts.params.alpha
           << ", intensity = " << opts.params.intensity() << " /m^2, d = " << opts.params.d
           << " m\n";
        os << "T = " << opts.threshold_db << " dB (linear " << format_double(t_linear)
           << "), B = " << format_double(result.B) << "\n";
        os << "tuned q  = " << format_double(result.q) << "\n";
        os << "tuned q^2 = " << format_double(result.q_squared) << "\n";
        os << "f(q) residual = " << format_double(result.residual) << "\n";
        if (result.sign_changes != 1)
            os << "sign changes on scan grid: " << result.sign_changes << "\n";
    }
    return kExitOk;
}

int cmd_correlations(CommonOpts& opts, const std::string& model_name,
                     std::optional<double> q, std::optional<double> q2, std::ostream& out) {
    const InterferenceModel model =
        model_name == "mixture" ? InterferenceModel::Mixture : InterferenceModel::Ppp;
    double q_value = 0.0;
    if (model == InterferenceModel::Mixture) {
        if (q2) q_value = std::sqrt(*q2);
        else if (q) q_value = *q;
        else q_value = std::sqrt(0.5);
    }
    const CorrelationReport report =
        estimate_correlations(opts.params, opts.sim, model, q_value);

    OutputTarget target(opts.out_path, out);
    std::ostream& os = target.stream();
    auto print_ci = [&](const char* name, const EstimateCI& e) {
        os << name << " = " << format_double(e.mean) << " +- " << format_double(e.std_error)
           << " (n = " << e.trials << ")\n";
    };
    if (opts.format == "jsonl") {
        auto ci = [](const EstimateCI& e) {
            return nlohmann::json{{"mean", e.mean}, {"stderr", e.std_error}, {"n", e.trials}};
        };
        nlohmann::json j{{"model", model_name},
                         {"q", q_value},
                         {"zeta", ci(report.zeta)},
                         {"zeta_inv", ci(report.zeta_inv)},
                         {"sir_corr", ci(report.sir_corr)},
                         {"var_I_inv_1", ci(report.var_I_inv[0])},
                         {"var_I_inv_2", ci(report.var_I_inv[1])},
                         {"var_hI_inv_1", ci(report.var_hI_inv[0])},
                         {"var_hI_inv_2", ci(report.var_hI_inv[1])},
                         {"recomposition_gap", ci(report.recomposition_gap)},
                         {"excluded_trials", report.excluded_trials},
                         {"valid_trials", report.valid_trials},
                         {"trials", report.trials},
                         {"seed", *opts.seed}};
        os << j.dump() << "\n";
    } else {
        os << "# " << kVersion << "\n" << config_comment(opts) << "\n";
        os << "model = " << model_name;
        if (model == InterferenceModel::Mixture) os << " (q = " << format_double(q_value) << ")";
        os << "\n";
        print_ci("zeta (Corr[I1, I2])", report.zeta);
        print_ci("zeta_inv (Corr[1/I1, 1/I2])", report.zeta_inv);
        print_ci("sir_corr (Corr[SIR1, SIR2])", report.sir_corr);
        print_ci("Var[1/I1]", report.var_I_inv[0]);
        print_ci("Var[1/I2]", report.var_I_inv[1]);
        print_ci("Var[h1/I1]", report.var_hI_inv[0]);
        print_ci("Var[h2/I2]", report.var_hI_inv[1]);
        print_ci("recomposition gap (direct - identity)", report.recomposition_gap);
        os << "excluded zero-interference trials = " << report.excluded_trials << " of "
           << report.trials << "\n";
    }
    return kExitOk;
}

int cmd_simulate(CommonOpts& opts, const std::string& model_name, const std::string& q_policy,
                 std::optional<double> q, std::optional<double> q2, std::ostream& out) {
    const double t_linear = db_to_linear(opts.threshold_db);
    EstimateCI estimate;
    double q_value = std::numeric_limits<double>::quiet_NaN();
    if (model_name == "mixture") {
        if (q_policy == "tuned")
            q_value = tune_q(opts.params, opts.antennas, t_linear).q;
        else if (q_policy == "corr-match")
            q_value = std::sqrt(0.5);
        else if (q2)
            q_value = std::sqrt(*q2);
        else if (q)
            q_value = *q;
        else
            q_value = std::sqrt(0.5);
        MixtureConfig cfg{opts.antennas, q_value};
        estimate = simulate_mrc_outage_mixture(opts.params, cfg, t_linear, opts.sim);
    } else {
        estimate = simulate_mrc_outage_ppp(opts.params, opts.antennas, t_linear, opts.sim);
    }

    OutputTarget target(opts.out_path, out);
    std::ostream& os = target.stream();
    if (opts.format == "jsonl") {
        nlohmann::json j{{"model", model_name},
                         {"N", opts.antennas},
                         {"T_dB", opts.threshold_db},
                         {"T_linear", t_linear},
                         {"alpha", opts.params.alpha},
                         {"intensity", opts.params.intensity()},
                         {"d", opts.params.d},
                         {"pout_mc", estimate.mean},
                         {"pout_mc_stderr", estimate.std_error},
                         {"trials", estimate.trials},
                         {"seed", *opts.seed}};
        if (model_name == "mixture") j["q"] = q_value;
        os << j.dump() << "\n";
    } else {
        os << "# " << kVersion << "\n" << config_comment(opts) << "\n";
        os << "model = " << model_name;
        if (model_name == "mixture") os << " (q = " << format_double(q_value) << ")";
        os << ", N = " << opts.antennas << ", T = " << opts.threshold_db << " dB\n";
        os << "outage = " << format_double(estimate.mean) << " +- "
           << format_double(estimate.std_error) << " (trials = " << estimate.trials
           << ", seed = " << *opts.seed << ")\n";
    }
    return kExitOk;
}

} // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Outage probability of an N-antenna interference-aware MRC receiver "
                 "under spatially correlated Poisson-field interference: mixture-based "
                 "analytic evaluation, joint-CCDF tuning of the mixture weight, and a "
                 "Monte Carlo ground-truth engine"};
    app.require_subcommand(1);

    CommonOpts opts;

    // outage-sweep
    auto* sweep = app.add_subcommand("outage-sweep",
                                     "sweep the SIR threshold at fixed antenna count");
    double t_start = -10.0, t_stop = 10.0, t_step = 2.0;
    std::vector<double> t_list;
    std::vector<double> extra_q2;
    add_system_options(sweep, opts);
    add_sim_options(sweep, opts);
    add_output_options(sweep, opts);
    sweep->add_option("--antennas", opts.antennas, "antenna count N")
        ->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--t-start", t_start, "first threshold in dB")->capture_default_str();
    sweep->add_option("--t-stop", t_stop, "last threshold in dB")->capture_default_str();
    sweep->add_option("--t-step", t_step, "threshold step in dB")
        ->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--thresholds-db", t_list,
                      "explicit threshold list in dB (overrides start/stop/step)");
    sweep->add_option("--extra-q2", extra_q2,
                      "additional fixed q^2 policies reported as extra columns");

    // antenna-sweep
    auto* asweep = app.add_subcommand("antenna-sweep",
                                      "sweep the antenna count at fixed threshold");
    int n_start = 1, n_stop = 8;
    std::vector<int> n_list;
    add_system_options(asweep, opts);
    add_sim_options(asweep, opts);
    add_output_options(asweep, opts);
    asweep->add_option("--threshold-db", opts.threshold_db, "SIR threshold in dB")
        ->capture_default_str();
    asweep->add_option("--n-start", n_start, "first antenna count")
        ->check(CLI::PositiveNumber)->capture_default_str();
    asweep->add_option("--n-stop", n_stop, "last antenna count")
        ->check(CLI::PositiveNumber)->capture_default_str();
    asweep->add_option("--antennas-list", n_list, "explicit antenna counts");
    asweep->add_option("--extra-q2", extra_q2,
                       "additional fixed q^2 policies reported as extra columns");

    // tune-q
    auto* tune = app.add_subcommand("tune-q", "solve the joint-CCDF matching equation for q");
    add_system_options(tune, opts);
    add_output_options(tune, opts);
    tune->add_option("--antennas", opts.antennas, "antenna count N")
        ->check(CLI::PositiveNumber)->capture_default_str();
    tune->add_option("--threshold-db", opts.threshold_db, "SIR threshold in dB")
        ->capture_default_str();

    // correlations
    auto* corr = app.add_subcommand("correlations",
                                    "estimate interference / SIR correlations by simulation");
    std::string corr_model = "ppp";
    std::optional<double> corr_q, corr_q2;
    add_system_options(corr, opts);
    add_sim_options(corr, opts);
    add_output_options(corr, opts);
    corr->add_option("--model", corr_model, "interference model")
        ->check(CLI::IsMember({"ppp", "mixture"}))->capture_default_str();
    corr->add_option("--q", corr_q, "mixture weight q")->check(CLI::Range(0.0, 1.0));
    corr->add_option("--q-squared", corr_q2, "mixture weight squared")
        ->check(CLI::Range(0.0, 1.0));

    // simulate
    auto* simulate = app.add_subcommand("simulate", "single-point Monte Carlo outage estimate");
    std::string sim_model = "ppp";
    std::string q_policy = "fixed";
    std::optional<double> sim_q, sim_q2;
    add_system_options(simulate, opts);
    add_sim_options(simulate, opts);
    add_output_options(simulate, opts);
    simulate->add_option("--antennas", opts.antennas, "antenna count N")
        ->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--threshold-db", opts.threshold_db, "SIR threshold in dB")
        ->capture_default_str();
    simulate->add_option("--model", sim_model, "interference model")
        ->check(CLI::IsMember({"ppp", "mixture"}))->capture_default_str();
    simulate->add_option("--q-policy", q_policy, "mixture weight policy")
        ->check(CLI::IsMember({"tuned", "corr-match", "fixed"}))->capture_default_str();
    simulate->add_option("--q", sim_q, "mixture weight q (fixed policy)")
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--q-squared", sim_q2, "mixture weight squared (fixed policy)")
        ->check(CLI::Range(0.0, 1.0));

    allow_config_overrides(app);

    std::vector<std::string> expanded;
    try {
        expanded = args;
        if (const auto config_path = find_config_path(args)) {
            std::vector<std::string> tokens;
            for (const auto& [key, value] : read_config_pairs(*config_path)) {
                tokens.push_back("--" + key);
                tokens.push_back(value);
            }
            // Right after the subcommand name, ahead of explicit flags.
            auto insert_at = expanded.begin();
            while (insert_at != expanded.end() && insert_at->rfind("-", 0) == 0) ++insert_at;
            if (insert_at != expanded.end()) ++insert_at;
            expanded.insert(insert_at, tokens.begin(), tokens.end());
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::vector<std::string> argv_storage;
    argv_storage.reserve(expanded.size() + 1);
    argv_storage.push_back("mrcmix");
    for (const std::string& a : expanded) argv_storage.push_back(a);
    std::vector<const char*> argv;
    for (const std::string& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        // dB thresholds must be finite; the linear value is then positive.
        if (!std::isfinite(opts.threshold_db)) {
            err << "error: threshold in dB must be finite\n";
            return kExitUsage;
        }
        opts.resolve();

        if (*sweep) {
            std::vector<double> grid = t_list;
            if (grid.empty()) {
                if (t_stop < t_start) {
                    err << "error: --t-stop must not be below --t-start\n";
                    return kExitUsage;
                }
                for (double t = t_start; t <= t_stop + 1e-12; t += t_step) grid.push_back(t);
            }
            for (double t : grid)
                if (!std::isfinite(t)) {
                    err << "error: thresholds in dB must be finite\n";
                    return kExitUsage;
                }
            return cmd_outage_sweep(opts, grid, extra_q2, out);
        }
        if (*asweep) {
            std::vector<int> grid = n_list;
            if (grid.empty()) {
                if (n_stop < n_start) {
                    err << "error: --n-stop must not be below --n-start\n";
                    return kExitUsage;
                }
                for (int n = n_start; n <= n_stop; ++n) grid.push_back(n);
            }
            return cmd_antenna_sweep(opts, grid, extra_q2, out);
        }
        if (*tune) return cmd_tune_q(opts, out);
        if (*corr) return cmd_correlations(opts, corr_model, corr_q, corr_q2, out);
        if (*simulate) return cmd_simulate(opts, sim_model, q_policy, sim_q, sim_q2, out);
        err << "error: no subcommand selected\n";
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const integration_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const no_bracket_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const degenerate_input_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const insufficient_data_error& e) {
        err << "insufficient data: " << e.what() << "\n";
        return kExitInsufficientData;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace mrcmix::cli
