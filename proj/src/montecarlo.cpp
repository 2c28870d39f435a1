#include "mrcmix/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mrcmix/errors.hpp"

namespace mrcmix {

namespace {

constexpr std::int64_t kChunkTrials = 8192;

struct PathLoss {
    double epsilon;
    double half_alpha;
    bool alpha_is_4;
};

inline double path_weight(const PathLoss& pl, double r2) {
    const double r_alpha = pl.alpha_is_4 ? r2 * r2 : std::pow(r2, pl.half_alpha);
    return 1.0 / (pl.epsilon + r_alpha);
}

// One PPP realization: Poisson count, uniform positions, independent
// unit-mean exponential fading per antenna on every point.
inline void add_ppp_interference(Xoshiro256pp& rng, double mean_count, double half_width,
                                 const PathLoss& pl, double* interference, int antennas) {
    const std::int64_t count = sample_poisson(rng, mean_count);
    for (std::int64_t k = 0; k < count; ++k) {
        const double x = half_width * (2.0 * rng.uniform01() - 1.0);
        const double y = half_width * (2.0 * rng.uniform01() - 1.0);
        const double w = path_weight(pl, x * x + y * y);
        for (int i = 0; i < antennas; ++i) interference[i] += rng.exponential() * w;
    }
}

// Runs body(chunk_index) over all chunks; scheduling never affects the
// result because every chunk writes only its own slots.
template <class Body>
void run_parallel(std::int64_t n_chunks, int workers, Body&& body) {
    if (workers <= 1 || n_chunks <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) body(c);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= n_chunks) return;
            body(c);
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(std::min<std::int64_t>(workers, n_chunks));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

EstimateCI bernoulli_estimate(std::int64_t successes, std::int64_t trials) {
    const double p = static_cast<double>(successes) / static_cast<double>(trials);
    double se = 0.0;
    if (trials > 1) se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials - 1));
    return {p, se, trials};
}

PathLoss make_path_loss(const SystemParams& params) {
    return {params.epsilon, 0.5 * params.alpha, params.alpha == 4.0};
}

void check_thresholds(std::span<const double> thresholds) {
    if (thresholds.empty())
        throw std::invalid_argument("threshold grid must not be empty");
    for (double t : thresholds)
        if (!(t > 0.0) || !std::isfinite(t))
            throw std::domain_error("linear SIR thresholds must be positive and finite");
}

} // namespace

std::vector<double> sample_ppp_interference(const SystemParams& params, int antennas,
                                            Xoshiro256pp& rng, double half_width) {
    params.validate();
    if (antennas < 1) throw std::domain_error("antenna count must be at least 1");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::domain_error("window half-width must be positive and finite");

    const PathLoss pl = make_path_loss(params);
    const double mean_count = params.intensity() * 4.0 * half_width * half_width;
    std::vector<double> interference(static_cast<std::size_t>(antennas), 0.0);
    add_ppp_interference(rng, mean_count, half_width, pl, interference.data(), antennas);
    return interference;
}

PppGridResult simulate_ppp_grid(const SystemParams& params, int antennas,
                                std::span<const double> thresholds, const SimConfig& sim) {
    params.validate();
    sim.validate();
    if (antennas < 1) throw std::domain_error("antenna count must be at least 1");
    check_thresholds(thresholds);

    const double lam_p = params.intensity();
    const double half_width = sim.resolved_half_width(lam_p);
    const double mean_count = lam_p * 4.0 * half_width * half_width;
    const PathLoss pl = make_path_loss(params);
    const double d_gain = std::pow(params.d, -params.alpha);
    const std::int64_t trials = sim.trials;
    const std::int64_t n_chunks = (trials + kChunkTrials - 1) / kChunkTrials;
    const std::size_t n_thr = thresholds.size();
    const std::size_t n_ant = static_cast<std::size_t>(antennas);

    // Integer per-chunk tallies: merging is exact in any order, so the
    // estimates cannot depend on the worker count.
    std::vector<std::int64_t> outage(static_cast<std::size_t>(n_chunks) * n_thr, 0);
    std::vector<std::int64_t> joint(static_cast<std::size_t>(n_chunks) * n_thr, 0);
    std::vector<std::int64_t> per_antenna(static_cast<std::size_t>(n_chunks) * n_thr * n_ant, 0);

    run_parallel(n_chunks, sim.resolved_workers(), [&](std::int64_t c) {
        std::vector<double> interference(n_ant);
        std::vector<double> sir(n_ant);
        const std::int64_t begin = c * kChunkTrials;
        const std::int64_t end = std::min(trials, begin + kChunkTrials);
        for (std::int64_t t = begin; t < end; ++t) {
            Xoshiro256pp rng = trial_stream(sim.master_seed, static_cast<std::uint64_t>(t));
            std::fill(interference.begin(), interference.end(), 0.0);
            add_ppp_interference(rng, mean_count, half_width, pl, interference.data(), antennas);
            double sir_mrc = 0.0;
            double sir_min = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n_ant; ++i) {
                const double h = rng.exponential();
                sir[i] = interference[i] == 0.0
                             ? std::numeric_limits<double>::infinity()
                             : h * d_gain / interference[i];
                sir_mrc += sir[i];
                sir_min = std::min(sir_min, sir[i]);
            }
            for (std::size_t ti = 0; ti < n_thr; ++ti) {
                const double thr = thresholds[ti];
                if (sir_mrc < thr) ++outage[static_cast<std::size_t>(c) * n_thr + ti];
                if (sir_min > thr) ++joint[static_cast<std::size_t>(c) * n_thr + ti];
                for (std::size_t i = 0; i < n_ant; ++i)
                    if (sir[i] < thr)
                        ++per_antenna[(static_cast<std::size_t>(c) * n_thr + ti) * n_ant + i];
            }
        }
    });

    PppGridResult result;
    result.outage.resize(n_thr);
    result.joint_ccdf.resize(n_thr);
    result.antenna_outage.assign(n_thr, std::vector<EstimateCI>(n_ant));
    for (std::size_t ti = 0; ti < n_thr; ++ti) {
        std::int64_t out_count = 0, joint_count = 0;
        std::vector<std::int64_t> ant_count(n_ant, 0);
        for (std::int64_t c = 0; c < n_chunks; ++c) {
            out_count += outage[static_cast<std::size_t>(c) * n_thr + ti];
            joint_count += joint[static_cast<std::size_t>(c) * n_thr + ti];
            for (std::size_t i = 0; i < n_ant; ++i)
                ant_count[i] += per_antenna[(static_cast<std::size_t>(c) * n_thr + ti) * n_ant + i];
        }
        result.outage[ti] = bernoulli_estimate(out_count, trials);
        result.joint_ccdf[ti] = bernoulli_estimate(joint_count, trials);
        for (std::size_t i = 0; i < n_ant; ++i)
            result.antenna_outage[ti][i] = bernoulli_estimate(ant_count[i], trials);
    }
    return result;
}

MixtureGridResult simulate_mixture_grid(const SystemParams& params, int antennas,
                                        std::span<const double> q_values,
                                        std::span<const double> thresholds,
                                        const SimConfig& sim) {
    params.validate();
    sim.validate();
    if (antennas < 1) throw std::domain_error("antenna count must be at least 1");
    if (q_values.empty()) throw std::invalid_argument("q grid must not be empty");
    for (double q : q_values)
        if (!(q >= 0.0 && q <= 1.0))
            throw std::domain_error("mixture weight q must lie in [0, 1]");
    check_thresholds(thresholds);

    const double lam_p = params.intensity();
    const double half_width = sim.resolved_half_width(lam_p);
    const double mean_count = lam_p * 4.0 * half_width * half_width;
    const PathLoss pl = make_path_loss(params);
    const double d_gain = std::pow(params.d, -params.alpha);
    const std::int64_t trials = sim.trials;
    const std::int64_t n_chunks = (trials + kChunkTrials - 1) / kChunkTrials;
    const std::size_t n_thr = thresholds.size();
    const std::size_t n_q = q_values.size();
    const std::size_t n_ant = static_cast<std::size_t>(antennas);

    std::vector<std::int64_t> outage(static_cast<std::size_t>(n_chunks) * n_q * n_thr, 0);
    std::vector<std::int64_t> joint(static_cast<std::size_t>(n_chunks) * n_q * n_thr, 0);

    run_parallel(n_chunks, sim.resolved_workers(), [&](std::int64_t c) {
        std::vector<double> shared_draws(n_ant + 1);  // J_0 .. J_N
        std::vector<double> selector(n_ant);
        std::vector<double> serving(n_ant);
        const std::int64_t begin = c * kChunkTrials;
        const std::int64_t end = std::min(trials, begin + kChunkTrials);
        for (std::int64_t t = begin; t < end; ++t) {
            Xoshiro256pp rng = trial_stream(sim.master_seed, static_cast<std::uint64_t>(t));
            // Fixed draw order (J's, selectors, serving gains) keeps every
            // (q, T) estimate bit-identical to a single-point run.
            for (std::size_t j = 0; j <= n_ant; ++j) {
                shared_draws[j] = 0.0;
                add_ppp_interference(rng, mean_count, half_width, pl, &shared_draws[j], 1);
            }
            for (std::size_t i = 0; i < n_ant; ++i) selector[i] = rng.uniform01();
            for (std::size_t i = 0; i < n_ant; ++i) serving[i] = rng.exponential();

            for (std::size_t qi = 0; qi < n_q; ++qi) {
                const double q = q_values[qi];
                double sir_mrc = 0.0;
                double sir_min = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < n_ant; ++i) {
                    const double interference =
                        selector[i] < q ? shared_draws[0] : shared_draws[i + 1];
                    const double sir = interference == 0.0
                                           ? std::numeric_limits<double>::infinity()
                                           : serving[i] * d_gain / interference;
                    sir_mrc += sir;
                    sir_min = std::min(sir_min, sir);
                }
                for (std::size_t ti = 0; ti < n_thr; ++ti) {
                    const std::size_t slot =
                        (static_cast<std::size_t>(c) * n_q + qi) * n_thr + ti;
                    if (sir_mrc < thresholds[ti]) ++outage[slot];
                    if (sir_min > thresholds[ti]) ++joint[slot];
                }
            }
        }
    });

    MixtureGridResult result;
    result.outage.assign(n_q, std::vector<EstimateCI>(n_thr));
    result.joint_ccdf.assign(n_q, std::vector<EstimateCI>(n_thr));
    for (std::size_t qi = 0; qi < n_q; ++qi) {
        for (std::size_t ti = 0; ti < n_thr; ++ti) {
            std::int64_t out_count = 0, joint_count = 0;
            for (std::int64_t c = 0; c < n_chunks; ++c) {
                const std::size_t slot = (static_cast<std::size_t>(c) * n_q + qi) * n_thr + ti;
                out_count += outage[slot];
                joint_count += joint[slot];
            }
            result.outage[qi][ti] = bernoulli_estimate(out_count, trials);
            result.joint_ccdf[qi][ti] = bernoulli_estimate(joint_count, trials);
        }
    }
    return result;
}

EstimateCI simulate_mrc_outage_ppp(const SystemParams& params, int antennas,
                                   double T_linear, const SimConfig& sim) {
    const double thresholds[1] = {T_linear};
    return simulate_ppp_grid(params, antennas, thresholds, sim).outage[0];
}

EstimateCI simulate_mrc_outage_mixture(const SystemParams& params, const MixtureConfig& cfg,
                                       double T_linear, const SimConfig& sim) {
    cfg.validate();
    const double thresholds[1] = {T_linear};
    const double qs[1] = {cfg.q};
    return simulate_mixture_grid(params, cfg.antennas, qs, thresholds, sim).outage[0][0];
}

EstimateCI estimate_joint_ccdf(const SystemParams& params, int antennas, double T_linear,
                               const SimConfig& sim, InterferenceModel model, double q) {
    const double thresholds[1] = {T_linear};
    if (model == InterferenceModel::Ppp)
        return simulate_ppp_grid(params, antennas, thresholds, sim).joint_ccdf[0];
    const double qs[1] = {q};
    return simulate_mixture_grid(params, antennas, qs, thresholds, sim).joint_ccdf[0][0];
}

namespace {

// Per-batch moment sums for the correlation estimators. The I-block uses
// every trial; the inverse blocks skip zero-interference trials.
struct BatchSums {
    long double n = 0;
    long double i1 = 0, i2 = 0, i11 = 0, i22 = 0, i12 = 0;
    long double valid = 0;
    long double x1 = 0, x2 = 0, x11 = 0, x22 = 0, x12 = 0;  // 1/I
    long double y1 = 0, y2 = 0, y11 = 0, y22 = 0, y12 = 0;  // h/I
    std::int64_t excluded = 0;
};

struct CorrStats {
    double corr_i = std::numeric_limits<double>::quiet_NaN();
    double corr_x = std::numeric_limits<double>::quiet_NaN();
    double corr_y = std::numeric_limits<double>::quiet_NaN();
    double var_x1 = std::numeric_limits<double>::quiet_NaN();
    double var_x2 = std::numeric_limits<double>::quiet_NaN();
    double var_y1 = std::numeric_limits<double>::quiet_NaN();
    double var_y2 = std::numeric_limits<double>::quiet_NaN();
    double gap = std::numeric_limits<double>::quiet_NaN();
};

double pair_corr(long double n, long double s1, long double s2, long double s11,
                 long double s22, long double s12) {
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const long double m1 = s1 / n, m2 = s2 / n;
    const long double v1 = s11 / n - m1 * m1;
    const long double v2 = s22 / n - m2 * m2;
    const long double cov = s12 / n - m1 * m2;
    if (v1 <= 0 || v2 <= 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(cov / std::sqrt(v1 * v2));
}

double sample_var(long double n, long double s, long double ss) {
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const long double mean = s / n;
    const long double v = (ss - n * mean * mean) / (n - 1);
    return static_cast<double>(v > 0 ? v : 0);
}

CorrStats stats_from_sums(const BatchSums& b) {
    CorrStats s;
    s.corr_i = pair_corr(b.n, b.i1, b.i2, b.i11, b.i22, b.i12);
    s.corr_x = pair_corr(b.valid, b.x1, b.x2, b.x11, b.x22, b.x12);
    s.corr_y = pair_corr(b.valid, b.y1, b.y2, b.y11, b.y22, b.y12);
    s.var_x1 = sample_var(b.valid, b.x1, b.x11);
    s.var_x2 = sample_var(b.valid, b.x2, b.x22);
    s.var_y1 = sample_var(b.valid, b.y1, b.y11);
    s.var_y2 = sample_var(b.valid, b.y2, b.y22);
    if (std::isfinite(s.corr_x) && s.var_x1 > 0 && s.var_x2 > 0 && s.var_y1 > 0 &&
        s.var_y2 > 0 && std::isfinite(s.corr_y)) {
        const double recomposed =
            s.corr_x * std::sqrt((s.var_x1 * s.var_x2) / (s.var_y1 * s.var_y2));
        s.gap = s.corr_y - recomposed;
    }
    return s;
}

EstimateCI batch_estimate(double pooled, const std::vector<double>& batch_values,
                          std::int64_t trials) {
    double mean = 0.0;
    std::int64_t n = 0;
    for (double v : batch_values)
        if (std::isfinite(v)) {
            mean += v;
            ++n;
        }
    if (n < 2) return {pooled, std::numeric_limits<double>::quiet_NaN(), trials};
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : batch_values)
        if (std::isfinite(v)) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return {pooled, sd / std::sqrt(static_cast<double>(n)), trials};
}

} // namespace

CorrelationReport estimate_correlations(const SystemParams& params, const SimConfig& sim,
                                        InterferenceModel model, double q) {
    params.validate();
    sim.validate();
    if (model == InterferenceModel::Mixture && !(q >= 0.0 && q <= 1.0))
        throw std::domain_error("mixture weight q must lie in [0, 1]");

    constexpr int kBatches = 100;
    const std::int64_t trials = sim.trials;
    if (trials < kBatches)
        throw insufficient_data_error("correlation estimation needs at least 100 trials");

    const double lam_p = params.intensity();
    const double half_width = sim.resolved_half_width(lam_p);
    const double mean_count = lam_p * 4.0 * half_width * half_width;
    const PathLoss pl = make_path_loss(params);
    const bool mixture = model == InterferenceModel::Mixture;

    std::vector<BatchSums> batches(kBatches);
    run_parallel(kBatches, sim.resolved_workers(), [&](std::int64_t b) {
        BatchSums& acc = batches[static_cast<std::size_t>(b)];
        const std::int64_t begin = b * trials / kBatches;
        const std::int64_t end = (b + 1) * trials / kBatches;
        double draws[3];
        for (std::int64_t t = begin; t < end; ++t) {
            Xoshiro256pp rng = trial_stream(sim.master_seed, static_cast<std::uint64_t>(t));
            double interference_1, interference_2;
            if (mixture) {
                for (int j = 0; j < 3; ++j) {
                    draws[j] = 0.0;
                    add_ppp_interference(rng, mean_count, half_width, pl, &draws[j], 1);
                }
                const double u1 = rng.uniform01();
                const double u2 = rng.uniform01();
                interference_1 = u1 < q ? draws[0] : draws[1];
                interference_2 = u2 < q ? draws[0] : draws[2];
            } else {
                double pair[2] = {0.0, 0.0};
                add_ppp_interference(rng, mean_count, half_width, pl, pair, 2);
                interference_1 = pair[0];
                interference_2 = pair[1];
            }
            const double h1 = rng.exponential();
            const double h2 = rng.exponential();

            acc.n += 1;
            acc.i1 += interference_1;
            acc.i2 += interference_2;
            acc.i11 += static_cast<long double>(interference_1) * interference_1;
            acc.i22 += static_cast<long double>(interference_2) * interference_2;
            acc.i12 += static_cast<long double>(interference_1) * interference_2;

            if (interference_1 == 0.0 || interference_2 == 0.0) {
                ++acc.excluded;
                continue;
            }
            const double x1 = 1.0 / interference_1, x2 = 1.0 / interference_2;
            const double y1 = h1 * x1, y2 = h2 * x2;
            acc.valid += 1;
            acc.x1 += x1;
            acc.x2 += x2;
            acc.x11 += static_cast<long double>(x1) * x1;
            acc.x22 += static_cast<long double>(x2) * x2;
            acc.x12 += static_cast<long double>(x1) * x2;
            acc.y1 += y1;
            acc.y2 += y2;
            acc.y11 += static_cast<long double>(y1) * y1;
            acc.y22 += static_cast<long double>(y2) * y2;
            acc.y12 += static_cast<long double>(y1) * y2;
        }
    });

    BatchSums total;
    std::vector<double> corr_i(kBatches), corr_x(kBatches), corr_y(kBatches);
    std::vector<double> var_x1(kBatches), var_x2(kBatches), var_y1(kBatches),
        var_y2(kBatches), gaps(kBatches);
    for (int b = 0; b < kBatches; ++b) {
        const BatchSums& acc = batches[static_cast<std::size_t>(b)];
        total.n += acc.n;
        total.i1 += acc.i1; total.i2 += acc.i2;
        total.i11 += acc.i11; total.i22 += acc.i22; total.i12 += acc.i12;
        total.valid += acc.valid;
        total.x1 += acc.x1; total.x2 += acc.x2;
        total.x11 += acc.x11; total.x22 += acc.x22; total.x12 += acc.x12;
        total.y1 += acc.y1; total.y2 += acc.y2;
        total.y11 += acc.y11; total.y22 += acc.y22; total.y12 += acc.y12;
        total.excluded += acc.excluded;
        const CorrStats s = stats_from_sums(acc);
        corr_i[static_cast<std::size_t>(b)] = s.corr_i;
        corr_x[static_cast<std::size_t>(b)] = s.corr_x;
        corr_y[static_cast<std::size_t>(b)] = s.corr_y;
        var_x1[static_cast<std::size_t>(b)] = s.var_x1;
        var_x2[static_cast<std::size_t>(b)] = s.var_x2;
        var_y1[static_cast<std::size_t>(b)] = s.var_y1;
        var_y2[static_cast<std::size_t>(b)] = s.var_y2;
        gaps[static_cast<std::size_t>(b)] = s.gap;
    }

    const std::int64_t valid = static_cast<std::int64_t>(total.valid);
    if (valid < 1000)
        throw insufficient_data_error(
            "only " + std::to_string(valid) +
            " trials had nonzero interference on both antennas (need 1000)");

    const CorrStats pooled = stats_from_sums(total);
    CorrelationReport report;
    report.trials = trials;
    report.valid_trials = valid;
    report.excluded_trials = total.excluded;
    report.zeta = batch_estimate(pooled.corr_i, corr_i, trials);
    report.zeta_inv = batch_estimate(pooled.corr_x, corr_x, valid);
    report.sir_corr = batch_estimate(pooled.corr_y, corr_y, valid);
    report.var_I_inv[0] = batch_estimate(pooled.var_x1, var_x1, valid);
    report.var_I_inv[1] = batch_estimate(pooled.var_x2, var_x2, valid);
    report.var_hI_inv[0] = batch_estimate(pooled.var_y1, var_y1, valid);
    report.var_hI_inv[1] = batch_estimate(pooled.var_y2, var_y2, valid);
    double gap_mean = 0.0;
    int gap_n = 0;
    for (double g : gaps)
        if (std::isfinite(g)) {
            gap_mean += g;
            ++gap_n;
        }
    report.recomposition_gap =
        batch_estimate(gap_n > 0 ? gap_mean / gap_n : std::numeric_limits<double>::quiet_NaN(),
                       gaps, gap_n);
    return report;
}

} // namespace mrcmix
