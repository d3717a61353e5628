#include "qlink/entangle.hpp"

#include "qlink/collection.hpp"
#include "qlink/errors.hpp"
#include "qlink/mirror_opt.hpp"
#include "qlink/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qlink {

double DetectionChain::effective_detection() const {
    return detector_qe * std::exp(-fiber_length_km / attenuation_length_km);
}

void DetectionChain::validate() const {
    if (!(detector_qe > 0.0) || detector_qe > 1.0) {
        throw std::invalid_argument("detector_qe must lie in (0, 1]");
    }
    if (fiber_length_km < 0.0 || !(attenuation_length_km > 0.0)) {
        throw std::invalid_argument("fiber lengths must be nonnegative");
    }
    if (bell_success != 0.5) {
        throw std::invalid_argument("bell_success is fixed at 1/2");
    }
}

void ProtocolTimings::validate() const {
    for (double v : {t_load, t_pump, t_pi, t_det, t_cool}) {
        if (!(v > 0.0)) {
            throw std::invalid_argument("protocol durations must be positive");
        }
    }
    if (n1 < 1) {
        throw std::invalid_argument("n1 must be at least 1");
    }
    if (p_loss_per_block < 0.0 || p_loss_per_block >= 1.0) {
        throw std::invalid_argument("p_loss_per_block must lie in [0, 1)");
    }
    if (!(background_lifetime > 0.0)) {
        throw std::invalid_argument("background_lifetime must be positive");
    }
}

double p_atom_atom(double eta_rb, const DetectionChain& chain) {
    chain.validate();
    if (eta_rb < 0.0 || eta_rb > 1.0) {
        throw std::invalid_argument("eta_rb must lie in [0, 1]");
    }
    const double detected = eta_rb * chain.effective_detection();
    return chain.bell_success * detected * detected;
}

double analytic_entanglement_time(double p_aa, const ProtocolTimings& timings,
                                  TimeConvention convention) {
    timings.validate();
    if (!(p_aa > 0.0) || p_aa > 1.0) {
        throw std::invalid_argument("p_aa must lie in (0, 1] (zero has unbounded time)");
    }
    if (convention == TimeConvention::epoch) {
        const double n_epoch = std::max(1.0, 1.0 / (p_aa * timings.n1));
        return n_epoch * timings.block_time();
    }
    const double q = 1.0 - p_aa;
    const double q_n = std::pow(q, timings.n1);
    // Expected completed failure blocks before the first success.
    const double blocks = q_n == 1.0 ? 0.0 : q_n / (1.0 - q_n);
    double t = timings.attempt_time() / p_aa + blocks * timings.t_cool;
    if (timings.cool_after_success) {
        t += timings.t_cool;
    }
    return t;
}

namespace {

struct TrialOutcome {
    double time = 0.0;
    std::uint32_t attempts = 0;
    std::uint32_t blocks = 0;
    std::uint32_t reloads = 0;
};

TrialOutcome run_trial(double p_aa, const ProtocolTimings& timings,
                       double p_pair_block, std::uint64_t seed,
                       std::uint64_t trial) {
    CounterRng rng(seed, trial);
    TrialOutcome out;
    const double attempt = timings.attempt_time();
    const double log_q = p_aa < 1.0 ? std::log1p(-p_aa) : 0.0;

    for (;;) {
        // Attempts to the next success; memoryless, so a reload restart just
        // resamples.
        std::uint64_t to_success = 1;
        if (p_aa < 1.0) {
            const double u = rng.next_double();
            to_success = 1 + static_cast<std::uint64_t>(std::log1p(-u) / log_q);
        }
        const std::uint64_t full_blocks = (to_success - 1) / timings.n1;

        bool lost = false;
        std::uint64_t survived = 0;
        for (; survived < full_blocks; ++survived) {
            out.time += timings.n1 * attempt + timings.t_cool;
            out.attempts += timings.n1;
            ++out.blocks;
            if (p_pair_block > 0.0 && rng.next_double() < p_pair_block) {
                lost = true;
                break;
            }
        }
        if (lost) {
            out.time += timings.t_load;
            ++out.reloads;
            continue;
        }
        const std::uint64_t remaining = to_success - survived * timings.n1;
        out.time += remaining * attempt;
        out.attempts += static_cast<std::uint32_t>(remaining);
        if (timings.cool_after_success) {
            out.time += timings.t_cool;
        }
        return out;
    }
}

} // namespace

McResult simulate(double p_aa, const ProtocolTimings& timings,
                  const DetectionChain& chain, std::uint64_t trials,
                  std::uint64_t seed, int workers) {
    timings.validate();
    chain.validate();
    if (!(p_aa > 0.0) || p_aa > 1.0) {
        throw std::invalid_argument("p_aa must lie in (0, 1]");
    }
    if (trials < 1) {
        throw std::invalid_argument("at least one trial required");
    }

    const double p_node =
        timings.p_loss_per_block + timings.block_time() / timings.background_lifetime;
    // Either node lost ends the block; the two nodes are independent.
    const double p_pair = 1.0 - (1.0 - p_node) * (1.0 - p_node);

    std::vector<TrialOutcome> outcomes(trials);
    int n_workers = workers > 0 ? workers
                                : static_cast<int>(std::thread::hardware_concurrency());
    n_workers = std::clamp<int>(n_workers, 1, 64);

    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            outcomes[t] = run_trial(p_aa, timings, p_pair, seed, t);
        }
    };
    if (n_workers == 1 || trials < 1024) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        const std::uint64_t chunk = (trials + n_workers - 1) / n_workers;
        for (int w = 0; w < n_workers; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, trials);
            if (begin >= end) {
                break;
            }
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    // Trial-ordered compensated reduction keeps the result independent of the
    // worker layout.
    auto kahan_sum = [&](auto&& term) {
        double sum = 0.0;
        double carry = 0.0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const double y = term(outcomes[t]) - carry;
            const double s = sum + y;
            carry = (s - sum) - y;
            sum = s;
        }
        return sum;
    };

    McResult result;
    const double n = static_cast<double>(trials);
    result.mean_time_to_entanglement = kahan_sum([](const TrialOutcome& o) { return o.time; }) / n;
    result.mean_attempts = kahan_sum([](const TrialOutcome& o) { return double(o.attempts); }) / n;
    result.mean_epochs = kahan_sum([](const TrialOutcome& o) { return double(o.blocks); }) / n;
    result.rate = 1.0 / result.mean_time_to_entanglement;
    std::uint64_t reloads = 0;
    for (const auto& o : outcomes) {
        reloads += o.reloads;
    }
    result.reload_events = reloads;

    const double mean = result.mean_time_to_entanglement;
    const double ss = kahan_sum([mean](const TrialOutcome& o) {
        const double d = o.time - mean;
        return d * d;
    });
    if (trials > 1) {
        const double variance = ss / (n - 1.0);
        result.confidence_halfwidth = 1.959963984540054 * std::sqrt(variance / n);
    }
    return result;
}

std::vector<RateRow> rate_sweep(const std::vector<LinkDesign>& designs,
                                const AtomLine& line,
                                const ProtocolTimings& timings,
                                const DetectionChain& chain) {
    std::vector<RateRow> rows;
    rows.reserve(designs.size());
    for (const auto& design : designs) {
        RateRow row;
        row.name = design.name;
        try {
            if (design.kind == LinkDesign::Kind::cavity) {
                const CavityGeometry geom =
                    CavityGeometry::from_critical_distance(design.mirror_roc, design.d_crit);
                const OptimizationResult opt = optimize_t_high(
                    geom, design.t_low, design.loss_rt, line, Objective::rb);
                const MirrorSet mirrors{opt.t_high_opt, design.t_low, design.loss_rt};
                row.eta_rb = rb_efficiency(cqed_params(geom, mirrors, line), mirrors, line);
            } else {
                row.eta_rb = rb_free_space_efficiency(design.na);
            }
            row.p_aa = p_atom_atom(row.eta_rb, chain);
            if (!(row.p_aa > 0.0)) {
                row.rate = 0.0;
                row.error = "zero entanglement probability";
                row.valid = false;
            } else {
                row.rate =
                    1.0 / analytic_entanglement_time(row.p_aa, timings, TimeConvention::epoch);
                row.valid = true;
            }
        } catch (const std::exception& e) {
            row.valid = false;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace qlink
