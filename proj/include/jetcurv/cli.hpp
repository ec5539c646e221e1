/**
 * @file cli.hpp
 * @brief Run configuration, grid sweeps and the command implementations behind
 *        the jetcurv tool.
 */

#pragma once

#include "jetcurv/chern.hpp"
#include "jetcurv/develop.hpp"
#include "jetcurv/gauge.hpp"
#include "jetcurv/jet_hermitian.hpp"
#include "jetcurv/kahler.hpp"
#include "jetcurv/registry.hpp"
#include "jetcurv/report.hpp"
#include "jetcurv/spec_io.hpp"
#include "jetcurv/wirtinger.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace jetcurv {

/// One real axis of the sample grid: count equally spaced values in [min, max].
struct AxisRange {
    double min = 0.0;
    double max = 0.0;
    int count = 1;

    double at(int i) const { return count == 1 ? min : min + (max - min) * i / (count - 1); }
};

struct RunConfig {
    std::string command;
    std::string potential = "builtin:fubini_study";
    int n = 2;
    double epsilon = 0.1;
    std::optional<double> kappa;
    std::optional<FormKind> form;
    std::string grid = "-0.3:0.3:3";
    double flat_tol = 1e-4;
    double chsc_tol = 1e-6;
    double transport_rtol = 1e-6;
    double fd_step = 1e-3;
    std::uint64_t seed = 42;
    std::string out;
    std::string format = "json";
    bool normalize = true;
};

/**
 * "min:max:count" for Re z1 and Im z1, or a ';'-separated list of per-axis
 * entries in the order Re z1, Im z1, Re z2, ... . A bare number is a fixed
 * axis value. Unlisted axes are held at 0.
 */
inline std::vector<AxisRange> parse_grid(const std::string& text, int n) {
    auto parse_axis = [](const std::string& item) {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : item) {
            if (c == ':') {
                parts.push_back(cur);
                cur.clear();
            } else if (c != ' ') {
                cur += c;
            }
        }
        parts.push_back(cur);
        AxisRange r;
        try {
            std::size_t used = 0;
            auto num = [&](const std::string& s) {
                const double v = std::stod(s, &used);
                if (used != s.size()) throw std::invalid_argument(s);
                return v;
            };
            if (parts.size() == 1) {
                r.min = r.max = num(parts[0]);
            } else if (parts.size() == 3) {
                r.min = num(parts[0]);
                r.max = num(parts[1]);
                const long count = std::stol(parts[2], &used);
                if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
                if (count < 1 || count > 1000) throw Error(ErrorKind::Config, "grid counts must lie in [1, 1000]");
                r.count = static_cast<int>(count);
            } else {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::Config, "malformed grid axis: '" + item + "'");
        }
        return r;
    };

    std::vector<std::string> items;
    std::string cur;
    for (char c : text) {
        if (c == ';') {
            items.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    items.push_back(cur);
    if (text.find_first_not_of(" ") == std::string::npos) throw Error(ErrorKind::Config, "empty grid");

    std::vector<AxisRange> axes(static_cast<std::size_t>(2 * n));
    if (items.size() == 1) {
        axes[0] = axes[1] = parse_axis(items[0]);
    } else {
        if (items.size() > axes.size()) throw Error(ErrorKind::Config, "grid has more axes than 2n");
        for (std::size_t i = 0; i < items.size(); ++i) axes[i] = parse_axis(items[i]);
    }
    return axes;
}

inline std::vector<Point> grid_points(const std::vector<AxisRange>& axes) {
    const int n = static_cast<int>(axes.size() / 2);
    std::size_t total = 1;
    for (const auto& a : axes) total *= static_cast<std::size_t>(a.count);
    if (total > 100000) throw Error(ErrorKind::Config, "grid too large");
    std::vector<Point> pts;
    pts.reserve(total);
    std::vector<int> idx(axes.size(), 0);
    for (std::size_t t = 0; t < total; ++t) {
        Point z(n);
        for (int k = 0; k < n; ++k) z(k) = Complex(axes[2 * k].at(idx[2 * k]), axes[2 * k + 1].at(idx[2 * k + 1]));
        pts.push_back(z);
        for (std::size_t a = 0; a < idx.size(); ++a) {
            if (++idx[a] < axes[a].count) break;
            idx[a] = 0;
        }
    }
    return pts;
}

inline void validate(const RunConfig& cfg) {
    if (cfg.n < 1 || cfg.n > kMaxDimension) throw Error(ErrorKind::Config, "n out of range");
    for (double t : {cfg.flat_tol, cfg.chsc_tol, cfg.transport_rtol, cfg.fd_step}) {
        if (!(t > 0.0)) throw Error(ErrorKind::Config, "tolerances and fd step must be positive");
    }
    if (cfg.format != "json" && cfg.format != "csv") throw Error(ErrorKind::Config, "format must be json or csv");
}

/// Canonical echo of the configuration; the output path is not part of it.
inline nlohmann::json config_json(const RunConfig& cfg) {
    nlohmann::json j = {{"command", cfg.command},     {"potential", cfg.potential},
                        {"n", cfg.n},                 {"epsilon", cfg.epsilon},
                        {"grid", cfg.grid},           {"flat_tol", cfg.flat_tol},
                        {"chsc_tol", cfg.chsc_tol},   {"transport_rtol", cfg.transport_rtol},
                        {"fd_step", cfg.fd_step},     {"seed", cfg.seed},
                        {"format", cfg.format},       {"normalize", cfg.normalize}};
    j["kappa"] = cfg.kappa ? nlohmann::json(*cfg.kappa) : nlohmann::json(nullptr);
    j["form"] = cfg.form ? nlohmann::json(to_string(*cfg.form)) : nlohmann::json(nullptr);
    return j;
}

inline std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(config_json(cfg).dump()); }

/// "builtin:NAME" or a JSON spec file.
inline PotentialSpec resolve_potential(const RunConfig& cfg) {
    const std::string prefix = "builtin:";
    try {
        if (cfg.potential.rfind(prefix, 0) == 0) {
            PotentialSpec spec = builtin(cfg.potential.substr(prefix.size()), cfg.n, cfg.seed, cfg.epsilon);
            validate(spec);
            return spec;
        }
    } catch (const Error& e) {
        throw Error(ErrorKind::Config, e.what());
    }
    return load_spec(cfg.potential);
}

/// Grid points for a potential; every point must lie in its domain.
inline std::vector<Point> config_points(const RunConfig& cfg, const PotentialSpec& spec) {
    const auto pts = grid_points(parse_grid(cfg.grid, spec.n));
    for (const auto& z : pts) {
        if (!in_domain(spec, z)) {
            std::ostringstream os;
            os << "grid point outside the domain of " << to_string(spec.kind);
            throw Error(ErrorKind::Config, os.str());
        }
    }
    return pts;
}

inline FormKind default_form(PotentialKind kind) {
    return kind == PotentialKind::Hyperbolic || kind == PotentialKind::U1nPullbackCh ? FormKind::K : FormKind::H;
}

/// Worker count: hardware concurrency, capped by JETCURV_THREADS when set.
inline unsigned worker_count(std::size_t tasks) {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("JETCURV_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
    }
    return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(tasks, 1)));
}

/// Runs fn(i) for i in [0, count) on a worker pool. The first exception is rethrown.
template <typename F>
void parallel_for(std::size_t count, F&& fn) {
    const unsigned workers = worker_count(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

namespace detail {

inline std::vector<Complex> to_vector(const Point& z) { return {z.data(), z.data() + z.size()}; }

inline Report start_report(const RunConfig& cfg) {
    Report r;
    r.command = cfg.command;
    r.config_hash = config_hash(cfg);
    r.seed = cfg.seed;
    r.config = config_json(cfg);
    return r;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline Verdict flatness_verdict(double norm, double flat_tol) {
    switch (classify(norm, {flat_tol, 1e-2})) {
    case Flatness::Flat: return Verdict::Pass;
    case Flatness::NotFlat: return Verdict::Fail;
    case Flatness::Inconclusive: return Verdict::Inconclusive;
    }
    return Verdict::Inconclusive;
}

} // namespace detail

/// chsc residual and coordinate-direction hsc at each grid point.
inline Report cmd_curvature(RunConfig cfg) {
    cfg.command = "curvature";
    validate(cfg);
    const detail::Stopwatch clock;
    const PotentialSpec spec = resolve_potential(cfg);
    if (!cfg.kappa) {
        const double expected = expected_kappa(spec.kind);
        cfg.kappa = std::isnan(expected) ? 2.0 : expected;
    }
    const auto pts = config_points(cfg, spec);
    Report report = detail::start_report(cfg);
    report.records.resize(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        const WirtingerJet jet = eval_jet(spec, pts[i], 4);
        Record& rec = report.records[i];
        rec.z = detail::to_vector(pts[i]);
        rec.residual = chsc_residual(jet, *cfg.kappa);
        rec.values["chsc_residual"] = rec.residual;
        double lo = 0.0;
        double hi = 0.0;
        for (int k = 0; k < spec.n; ++k) {
            CVector v = CVector::Zero(spec.n);
            v(k) = 1.0;
            const double hsc = hsc_of_direction(jet, v);
            lo = k == 0 ? hsc : std::min(lo, hsc);
            hi = k == 0 ? hsc : std::max(hi, hsc);
        }
        rec.values["hsc_min"] = lo;
        rec.values["hsc_max"] = hi;
        rec.verdict = rec.residual < cfg.chsc_tol ? Verdict::Pass : Verdict::Fail;
    });
    report.finalize();
    report.summary.runtime_seconds = clock.seconds();
    return report;
}

/// Chern curvature norm of the H or K field at each grid point.
inline Report cmd_flatness(RunConfig cfg) {
    cfg.command = "flatness";
    validate(cfg);
    const detail::Stopwatch clock;
    const PotentialSpec spec = resolve_potential(cfg);
    if (!cfg.form) cfg.form = default_form(spec.kind);
    const auto pts = config_points(cfg, spec);
    const MatrixField field = jet_form_field(spec, *cfg.form);
    Report report = detail::start_report(cfg);
    report.records.resize(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        Record& rec = report.records[i];
        rec.z = detail::to_vector(pts[i]);
        rec.residual = flatness_norm(field, pts[i], cfg.fd_step);
        rec.values["flatness_norm"] = rec.residual;
        rec.verdict = detail::flatness_verdict(rec.residual, cfg.flat_tol);
    });
    report.finalize();
    report.summary.runtime_seconds = clock.seconds();
    return report;
}

/// Gauge identities for H and K at each grid point.
inline Report cmd_claims(RunConfig cfg) {
    cfg.command = "claims";
    validate(cfg);
    const detail::Stopwatch clock;
    const PotentialSpec spec = resolve_potential(cfg);
    const auto pts = config_points(cfg, spec);
    ClaimOptions opt;
    opt.normalize = cfg.normalize;
    opt.fd_step = cfg.fd_step;
    opt.fd_tolerance = cfg.flat_tol;
    Report report = detail::start_report(cfg);
    report.records.resize(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        const ClaimReport claims = verify_claims(spec, pts[i], opt);
        Record& rec = report.records[i];
        rec.z = detail::to_vector(pts[i]);
        for (const auto& c : claims.checks) rec.values[c.name] = c.value;
        for (const auto& [k, v] : claims.values) rec.values[k] = v;
        rec.residual = claims.max_residual();
        rec.verdict = claims.all_pass() ? Verdict::Pass : Verdict::Fail;
    });
    report.finalize();
    report.summary.runtime_seconds = clock.seconds();
    return report;
}

/// Columns of the develop CSV after the point coordinates.
inline std::vector<std::string> develop_csv_columns(int n) {
    std::vector<std::string> cols;
    for (int a = 0; a <= n; ++a) {
        cols.push_back("re_w" + std::to_string(a));
        cols.push_back("im_w" + std::to_string(a));
    }
    cols.push_back("pullback_residual");
    return cols;
}

/**
 * Developing map at each grid point with pullback residual, Gram constancy,
 * holomorphy and a path-independence spot check. A non-flat connection ends
 * the run with a failing report and the reason in `message`.
 */
inline Report cmd_develop(RunConfig cfg) {
    cfg.command = "develop";
    validate(cfg);
    const detail::Stopwatch clock;
    const PotentialSpec spec = resolve_potential(cfg);
    if (!cfg.form) cfg.form = default_form(spec.kind);
    const FormKind kind = *cfg.form;
    const auto pts = config_points(cfg, spec);
    DevelopOptions opt;
    opt.flat_tol = cfg.flat_tol;
    opt.transport.rtol = cfg.transport_rtol;
    opt.transport.fd_step = cfg.fd_step;
    Report report = detail::start_report(cfg);
    report.records.resize(pts.size());
    try {
        parallel_for(pts.size(), [&](std::size_t i) {
            const Point& z = pts[i];
            const DevelopingMapSample sample = developing_map(spec, kind, z, opt);
            const ParallelFrame frame = orthonormal_parallel_frame(spec, kind, z, opt);
            Record& rec = report.records[i];
            rec.z = detail::to_vector(z);
            for (int a = 0; a <= spec.n; ++a) {
                rec.values["re_w" + std::to_string(a)] = sample.w(a).real();
                rec.values["im_w" + std::to_string(a)] = sample.w(a).imag();
            }
            const double pullback = pullback_residual(spec, kind, z, opt);
            const double paths = path_independence(spec, kind, real_first_path(z), imaginary_first_path(z), opt);
            rec.values["pullback_residual"] = pullback;
            rec.values["path_independence"] = paths;
            rec.values["gram_residual"] = frame.gram_residual;
            rec.values["holomorphy_residual"] = sample.holomorphy_residual;
            rec.values["form_value"] = sample.form_value;
            rec.residual = std::max(pullback, paths);
            const bool ok = pullback < cfg.flat_tol && paths < cfg.flat_tol && frame.gram_residual < 1e-5 &&
                            sample.holomorphy_residual < cfg.flat_tol;
            rec.verdict = ok ? Verdict::Pass : Verdict::Fail;
        });
        report.finalize();
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotFlat && e.kind() != ErrorKind::LeftPositiveCone &&
            e.kind() != ErrorKind::TransportAccuracy) {
            throw;
        }
        report.records.clear();
        report.finalize();
        report.summary.verdict = Verdict::Fail;
        report.message = e.what();
    }
    report.summary.runtime_seconds = clock.seconds();
    return report;
}

/// Expected flat/chsc pattern of a registry family: {H flat, K flat}.
inline std::pair<bool, bool> expected_flatness(PotentialKind kind) {
    const double kappa = expected_kappa(kind);
    return {kappa == 2.0, kappa == -2.0};
}

/**
 * Every registry family at every grid point: chsc residuals for kappa = +-2,
 * H and K flatness, K signature, quotient identity and gauge claims. A record
 * passes when flatness of H (K) agrees with chsc +2 (-2), the pattern matches
 * the family, and the identities that hold for any potential hold.
 */
inline Report cmd_verify_all(RunConfig cfg) {
    cfg.command = "verify-all";
    validate(cfg);
    const detail::Stopwatch clock;
    const auto specs = registry(cfg.n, cfg.seed);
    std::vector<std::pair<std::size_t, Point>> tasks;
    for (std::size_t s = 0; s < specs.size(); ++s) {
        PotentialSpec spec = specs[s];
        if (spec.kind == PotentialKind::PerturbedFs) spec.epsilon = cfg.epsilon;
        for (const auto& z : config_points(cfg, spec)) tasks.emplace_back(s, z);
    }
    ClaimOptions claim_opt;
    claim_opt.fd_step = cfg.fd_step;
    claim_opt.fd_tolerance = cfg.flat_tol;
    claim_opt.normalize = cfg.normalize;

    Report report = detail::start_report(cfg);
    report.records.resize(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t i) {
        PotentialSpec spec = specs[tasks[i].first];
        if (spec.kind == PotentialKind::PerturbedFs) spec.epsilon = cfg.epsilon;
        const Point& z = tasks[i].second;
        Record& rec = report.records[i];
        rec.label = to_string(spec.kind);
        rec.z = detail::to_vector(z);

        const WirtingerJet jet = eval_jet(spec, z, 4);
        const double chsc_pos = chsc_residual(jet, 2.0);
        const double chsc_neg = chsc_residual(jet, -2.0);
        const double flat_h = flatness_norm(jet_form_field(spec, FormKind::H), z, cfg.fd_step);
        const double flat_k = flatness_norm(jet_form_field(spec, FormKind::K), z, cfg.fd_step);
        const auto [pos, neg] = signature_of(k_matrix_at(jet));
        const QuotientResidual quotient = quotient_identity_residual(jet);
        const ClaimReport claims = verify_claims(spec, z, claim_opt);

        rec.values["chsc_residual_plus2"] = chsc_pos;
        rec.values["chsc_residual_minus2"] = chsc_neg;
        rec.values["flatness_H"] = flat_h;
        rec.values["flatness_K"] = flat_k;
        rec.values["signature_K_pos"] = pos;
        rec.values["signature_K_neg"] = neg;
        rec.values["quotient_h_slot"] = quotient.h_slot;
        rec.values["quotient_k_slot"] = quotient.k_slot;
        rec.values["claims_max_residual"] = claims.max_residual();
        rec.values["claims_pass"] = claims.all_pass() ? 1.0 : 0.0;

        const Flatness fh = classify(flat_h, {cfg.flat_tol, 1e-2});
        const Flatness fk = classify(flat_k, {cfg.flat_tol, 1e-2});
        Verdict v = Verdict::Pass;
        if (fh == Flatness::Inconclusive || fk == Flatness::Inconclusive) v = Verdict::Inconclusive;
        const bool h_flat = fh == Flatness::Flat;
        const bool k_flat = fk == Flatness::Flat;
        const bool chsc_plus = chsc_pos < cfg.chsc_tol;
        const bool chsc_minus = chsc_neg < cfg.chsc_tol;
        const auto [want_h, want_k] = expected_flatness(spec.kind);
        const bool biconditional = h_flat == chsc_plus && k_flat == chsc_minus;
        const bool pattern = h_flat == want_h && k_flat == want_k;
        const bool identities = pos == 1 && neg == spec.n && quotient.h_slot < 1e-9 && quotient.k_slot < 1e-9 &&
                                claims.all_pass();
        rec.values["biconditional"] = biconditional ? 1.0 : 0.0;
        rec.values["pattern"] = pattern ? 1.0 : 0.0;
        if (!identities || (v == Verdict::Pass && (!biconditional || !pattern))) v = Verdict::Fail;
        rec.verdict = v;
        rec.residual = std::max({quotient.h_slot, quotient.k_slot, claims.max_residual()});
    });
    report.finalize();
    report.summary.runtime_seconds = clock.seconds();
    return report;
}

inline Report run_command(const RunConfig& cfg) {
    if (cfg.command == "curvature") return cmd_curvature(cfg);
    if (cfg.command == "flatness") return cmd_flatness(cfg);
    if (cfg.command == "claims") return cmd_claims(cfg);
    if (cfg.command == "develop") return cmd_develop(cfg);
    if (cfg.command == "verify-all") return cmd_verify_all(cfg);
    throw Error(ErrorKind::Config, "unknown command: " + cfg.command);
}

} // namespace jetcurv
