#include "gwr/protocols.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "gwr/numeric_text.hpp"
#include "gwr/replay.hpp"

namespace gwr {

const char* to_string(ProtocolKind kind) {
    return kind == ProtocolKind::batch ? "batch" : "incremental";
}

ProtocolKind parse_protocol(const std::string& text) {
    if (text == "batch") return ProtocolKind::batch;
    if (text == "incremental") return ProtocolKind::incremental;
    throw std::invalid_argument("unknown protocol '" + text + "' (expected batch|incremental)");
}

void ProtocolSpec::validate() const {
    hyper.validate();
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (kind == ProtocolKind::batch && epochs < 1)
        throw std::invalid_argument("batch protocol requires epochs >= 1");
    if (kind == ProtocolKind::incremental && epochs != 0)
        throw std::invalid_argument("incremental protocol trains one iteration per mini-batch; "
                                    "epochs must not be set");
    if (parallel_trials < 1) throw std::invalid_argument("parallel_trials must be >= 1");
}

std::vector<MetricsRecord> RunResult::records() const {
    std::vector<MetricsRecord> out;
    for (const auto& t : trials) out.insert(out.end(), t.records.begin(), t.records.end());
    return out;
}

std::uint64_t trial_seed(std::uint64_t master, int trial) {
    std::seed_seq seq{std::uint32_t(master), std::uint32_t(master >> 32), std::uint32_t(trial)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (std::uint64_t(words[0]) << 32) | words[1];
}

Evaluation evaluate(const Network& net, const LabelAssociations& labels, const Dataset& test,
                    const std::vector<std::string>& categories) {
    if (test.frame_count() == 0) throw std::invalid_argument("evaluate: empty test split");
    std::map<std::string, std::size_t> cat_index;
    for (std::size_t i = 0; i < categories.size(); ++i) cat_index[categories[i]] = i;

    Evaluation ev;
    ev.correct.assign(categories.size(), 0);
    ev.frames.assign(categories.size(), 0);
    std::size_t correct = 0;
    ContextState ctx = net.fresh_context();
    for (const auto& seq : test.sequences) {
        const auto truth = labels.find_label(seq.instance);
        const auto cat = cat_index.find(seq.category);
        ctx.reset();
        for (const auto& frame : seq.frames) {
            const auto predicted = classify_sample(net, labels, frame.features, ctx);
            const bool hit = predicted && truth && *predicted == *truth;
            correct += hit;
            if (cat != cat_index.end()) {
                ev.correct[cat->second] += hit;
                ++ev.frames[cat->second];
            }
        }
    }
    ev.overall = double(correct) / double(test.frame_count());
    ev.per_category.resize(categories.size());
    for (std::size_t i = 0; i < categories.size(); ++i)
        ev.per_category[i] = ev.frames[i] == 0 ? std::numeric_limits<double>::quiet_NaN()
                                               : double(ev.correct[i]) / double(ev.frames[i]);
    return ev;
}

std::vector<std::optional<double>> forgetting_metrics(const std::vector<MetricsRecord>& records) {
    if (records.empty()) return {};
    const std::size_t n = records.front().acc_category.size();
    std::vector<std::optional<double>> out(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::optional<double> peak;
        for (const auto& r : records)
            if (r.encountered[c] && !std::isnan(r.acc_category[c]))
                peak = std::max(peak.value_or(r.acc_category[c]), r.acc_category[c]);
        const auto& last = records.back();
        if (peak && last.encountered[c]) out[c] = *peak - last.acc_category[c];
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct TrialContext {
    const ProtocolSpec& spec;
    const Split& split;
    const std::vector<std::string>& categories;
    const StepObserver& observer;
    int trial;
};

/// Frames presented in order; the first two distinct ones seed a growing net.
std::pair<std::span<const double>, std::span<const double>> first_two_distinct(
    const std::vector<const Sequence*>& order) {
    std::span<const double> first;
    for (const Sequence* s : order)
        for (const auto& f : s->frames) {
            if (first.empty()) {
                first = f.features;
            } else if (!std::equal(first.begin(), first.end(), f.features.begin())) {
                return {first, f.features};
            }
        }
    if (first.empty()) throw std::invalid_argument("training split has no frames");
    return {first, first};
}

Network initial_network(const ProtocolSpec& spec, std::size_t dim,
                        const std::vector<const Sequence*>& first_batch, std::uint64_t seed) {
    if (spec.mode == Mode::growing) {
        const auto [a, b] = first_two_distinct(first_batch);
        return Network::growing(dim, spec.hyper, a, b);
    }
    // Uniform support: per-dimension range of the first mini-batch, widened by 5%.
    Vector low(dim, std::numeric_limits<double>::infinity());
    Vector high(dim, -std::numeric_limits<double>::infinity());
    for (const Sequence* s : first_batch)
        for (const auto& f : s->frames)
            for (std::size_t d = 0; d < dim; ++d) {
                low[d] = std::min(low[d], f.features[d]);
                high[d] = std::max(high[d], f.features[d]);
            }
    if (!std::isfinite(low[0])) throw std::invalid_argument("training split has no frames");
    for (std::size_t d = 0; d < dim; ++d) {
        const double pad = 0.05 * (high[d] - low[d]);
        low[d] -= pad;
        high[d] += pad;
    }
    return Network::fixed(dim, spec.hyper, low, high, seed);
}

void train_sequence(Network& net, SideTables& tables, const Sequence& seq, const TrialContext& tc) {
    net.reset_sequence();
    for (const auto& frame : seq.frames) {
        const StepOutcome out = step(net, Sample{frame.features, seq.instance}, tables);
        if (tc.observer) tc.observer(StepEvent{tc.trial, &net, &out});
    }
    net.reset_sequence();
}

MetricsRecord checkpoint(const TrialContext& tc, const Network& net, const SideTables& tables,
                         int index, const std::vector<bool>& encountered,
                         std::size_t replay_steps, Clock::time_point start,
                         const std::vector<MetricsRecord>& history) {
    const Evaluation ev = evaluate(net, tables.labels, tc.split.test, tc.categories);
    MetricsRecord r;
    r.trial = tc.trial;
    r.checkpoint = index;
    r.mode = tc.spec.mode;
    r.replay = tc.spec.replay;
    r.n_neurons = net.size();
    r.acc_overall = ev.overall;
    r.acc_category = ev.per_category;
    r.encountered = encountered;
    r.replay_steps = replay_steps;

    std::size_t seen_correct = 0, seen_frames = 0;
    for (std::size_t c = 0; c < encountered.size(); ++c)
        if (encountered[c]) {
            seen_correct += ev.correct[c];
            seen_frames += ev.frames[c];
        }
    r.acc_seen = seen_frames == 0 ? 0.0 : double(seen_correct) / double(seen_frames);

    std::vector<MetricsRecord> trace = history;
    trace.push_back(r);
    const auto forgetting = forgetting_metrics(trace);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& f : forgetting)
        if (f) {
            sum += *f;
            ++n;
        }
    r.forgetting_mean = n == 0 ? 0.0 : sum / double(n);
    if (tc.spec.record_timing)
        r.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return r;
}

TrialResult incremental_trial(const TrialContext& tc) {
    const auto start = Clock::now();
    const std::uint64_t seed = trial_seed(tc.spec.seed, tc.trial);
    std::mt19937_64 rng(seed);

    std::vector<std::size_t> cat_order(tc.categories.size());
    for (std::size_t i = 0; i < cat_order.size(); ++i) cat_order[i] = i;
    std::shuffle(cat_order.begin(), cat_order.end(), rng);
    std::vector<int> sessions = tc.split.train.sessions();
    std::shuffle(sessions.begin(), sessions.end(), rng);

    std::vector<std::vector<const Sequence*>> batches;
    for (std::size_t c : cat_order) {
        std::vector<const Sequence*> batch;
        for (int session : sessions)
            for (const auto& seq : tc.split.train.sequences)
                if (seq.session == session && seq.category == tc.categories[c])
                    batch.push_back(&seq);
        batches.push_back(std::move(batch));
    }

    Network net = initial_network(tc.spec, tc.split.train.dim, batches.front(), rng());
    SideTables tables;
    tables.sync(net);
    std::vector<bool> encountered(tc.categories.size(), false);
    std::vector<MetricsRecord> records;
    for (std::size_t b = 0; b < batches.size(); ++b) {
        for (const Sequence* seq : batches[b]) train_sequence(net, tables, *seq, tc);
        std::size_t replay_steps = 0;
        if (tc.spec.replay) replay_steps = replay_episode(net, tables).steps;
        encountered[cat_order[b]] = true;
        records.push_back(checkpoint(tc, net, tables, int(b) + 1, encountered, replay_steps,
                                     start, records));
    }
    return TrialResult{std::move(records), std::move(net), std::move(tables)};
}

TrialResult batch_trial(const TrialContext& tc) {
    const auto start = Clock::now();
    const std::uint64_t seed = trial_seed(tc.spec.seed, tc.trial);
    std::mt19937_64 rng(seed);

    std::vector<const Sequence*> all;
    for (const auto& seq : tc.split.train.sequences) all.push_back(&seq);
    std::vector<const Sequence*> order = all;
    std::shuffle(order.begin(), order.end(), rng);

    Network net = initial_network(tc.spec, tc.split.train.dim, order, rng());
    SideTables tables;
    tables.sync(net);
    const std::vector<bool> encountered(tc.categories.size(), true);
    std::vector<MetricsRecord> records;
    for (int epoch = 1; epoch <= tc.spec.epochs; ++epoch) {
        if (epoch > 1) std::shuffle(order.begin(), order.end(), rng);
        for (const Sequence* seq : order) train_sequence(net, tables, *seq, tc);
        std::size_t replay_steps = 0;
        if (tc.spec.replay) replay_steps = replay_episode(net, tables).steps;
        records.push_back(
            checkpoint(tc, net, tables, epoch, encountered, replay_steps, start, records));
    }
    return TrialResult{std::move(records), std::move(net), std::move(tables)};
}

RunResult run_trials(const ProtocolSpec& spec, const Split& split, const StepObserver& observer,
                     TrialResult (*trial_fn)(const TrialContext&)) {
    spec.validate();
    if (split.train.frame_count() == 0) throw std::invalid_argument("training split is empty");
    if (split.test.frame_count() == 0) throw std::invalid_argument("test split is empty");

    RunResult result;
    result.spec = spec;
    result.categories = split.train.categories();
    for (const auto& c : split.test.categories())
        if (std::find(result.categories.begin(), result.categories.end(), c) ==
            result.categories.end())
            result.categories.push_back(c);

    std::vector<std::optional<TrialResult>> slots(spec.trials);
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int t = next++; t < spec.trials; t = next++) {
            try {
                slots[t] = trial_fn(TrialContext{spec, split, result.categories, observer, t});
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int workers = std::min(spec.parallel_trials, spec.trials);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    for (auto& slot : slots) result.trials.push_back(std::move(*slot));
    return result;
}

}  // namespace

RunResult run_batch(const ProtocolSpec& spec, const Split& split, const StepObserver& observer) {
    if (spec.kind != ProtocolKind::batch) throw std::invalid_argument("run_batch: kind must be batch");
    return run_trials(spec, split, observer, &batch_trial);
}

RunResult run_incremental(const ProtocolSpec& spec, const Split& split,
                          const StepObserver& observer) {
    if (spec.kind != ProtocolKind::incremental)
        throw std::invalid_argument("run_incremental: kind must be incremental");
    return run_trials(spec, split, observer, &incremental_trial);
}

RunResult run_protocol(const ProtocolSpec& spec, const Split& split,
                       const StepObserver& observer) {
    return spec.kind == ProtocolKind::batch ? run_batch(spec, split, observer)
                                            : run_incremental(spec, split, observer);
}

std::vector<CheckpointSummary> summarize(const std::vector<MetricsRecord>& records) {
    std::map<int, std::vector<const MetricsRecord*>> by_checkpoint;
    for (const auto& r : records) by_checkpoint[r.checkpoint].push_back(&r);

    auto stats = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= double(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        const double sd = xs.size() > 1 ? std::sqrt(var / double(xs.size() - 1)) : 0.0;
        return std::pair(mean, sd);
    };

    std::vector<CheckpointSummary> out;
    for (const auto& [cp, rs] : by_checkpoint) {
        std::vector<double> overall, seen, neurons, forgetting, replay;
        for (const auto* r : rs) {
            overall.push_back(r->acc_overall);
            seen.push_back(r->acc_seen);
            neurons.push_back(double(r->n_neurons));
            forgetting.push_back(r->forgetting_mean);
            replay.push_back(double(r->replay_steps));
        }
        CheckpointSummary s;
        s.checkpoint = cp;
        s.trials = rs.size();
        std::tie(s.acc_overall_mean, s.acc_overall_std) = stats(overall);
        std::tie(s.acc_seen_mean, s.acc_seen_std) = stats(seen);
        std::tie(s.n_neurons_mean, s.n_neurons_std) = stats(neurons);
        std::tie(s.forgetting_mean, s.forgetting_std) = stats(forgetting);
        s.replay_steps_mean = stats(replay).first;
        out.push_back(s);
    }
    return out;
}

int checkpoints_to_fraction(const std::vector<double>& trace, double fraction) {
    if (trace.empty()) throw std::invalid_argument("checkpoints_to_fraction: empty trace");
    const double target = fraction * trace.back();
    for (std::size_t i = 0; i < trace.size(); ++i)
        if (trace[i] >= target) return int(i) + 1;
    return int(trace.size());
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& records,
                       const std::vector<std::string>& categories) {
    out << "trial,checkpoint,mode,replay,n_neurons,acc_overall,acc_seen,forgetting_mean,"
           "replay_steps,wall_ms";
    for (const auto& c : categories) out << ",acc_" << c;
    out << '\n';
    for (const auto& r : records) {
        out << r.trial << ',' << r.checkpoint << ',' << to_string(r.mode) << ','
            << (r.replay ? 1 : 0) << ',' << r.n_neurons << ',' << format_double(r.acc_overall)
            << ',' << format_double(r.acc_seen) << ',' << format_double(r.forgetting_mean) << ','
            << r.replay_steps << ',' << format_double(r.wall_ms);
        for (double a : r.acc_category) out << ',' << (std::isnan(a) ? "" : format_double(a));
        out << '\n';
    }
}

}  // namespace gwr
