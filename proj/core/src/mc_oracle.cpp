#include "fptqv/mc_oracle.hpp"

#include "fptqv/errors.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace fptqv {

namespace {

// xoshiro256++ with splitmix64 seeding; one independent stream per path.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

struct Xoshiro256pp {
    std::array<std::uint64_t, 4> s;

    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 sm{seed ^ (stream + 1) * 0x9e3779b97f4a7c15ULL};
        for (auto& w : s) w = sm.next();
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    double uniform01() { // in (0, 1]
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }
};

struct NormalSource {
    Xoshiro256pp rng;
    double spare = 0.0;
    bool have_spare = false;

    explicit NormalSource(Xoshiro256pp r) : rng(r) {}

    double next() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double u1 = rng.uniform01();
        const double u2 = rng.uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare = r * std::sin(a);
        have_spare = true;
        return r * std::cos(a);
    }
};

// Bridge crossing probabilities below exp(-40) are treated as zero; no
// uniform is drawn for them.
constexpr double bridge_log_cutoff = 40.0;

struct Crossing {
    double variation = 0.0;
    bool crossed = false;
    bool upper = false;
};

// Walks one path on the variation clock up to total variation V.
template <typename StepCheck>
Crossing walk_path(NormalSource& normals, double total_variation, std::int64_t steps,
                   StepCheck check) {
    const double dv = total_variation / static_cast<double>(steps);
    const double sd = std::sqrt(dv);
    double x = 0.0;
    for (std::int64_t i = 0; i < steps; ++i) {
        const double x1 = x + sd * normals.next();
        Crossing c = check(x, x1, dv, static_cast<double>(i) * dv);
        if (c.crossed) return c;
        x = x1;
    }
    return {};
}

void validate(const SimConfig& cfg, const QuadraticVariationPath& path) {
    if (cfg.n_paths < 1) throw validation_error("sim: n_paths must be >= 1");
    if (cfg.clock_steps < 1) throw validation_error("sim: clock_steps must be >= 1");
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon))
        throw validation_error("sim: horizon must be finite and positive");
    if (cfg.horizon > path.domain_end())
        throw domain_error("sim: horizon beyond the clock's domain");
}

double map_to_time(const QuadraticVariationPath& path, double variation,
                   double total_variation, double horizon) {
    if (variation >= total_variation) return horizon;
    return path.generalized_inverse(variation);
}

std::int64_t step_count(double total_variation, std::int64_t clock_steps) {
    return std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(total_variation * static_cast<double>(clock_steps))));
}

// Runs per-path simulation in blocks across threads; per-path determinism
// comes from seeding each stream with the global path index.
template <typename PathFn>
EmpiricalCdf run_paths(const SimConfig& cfg, int n_threads, double horizon, PathFn body) {
    const std::int64_t n = cfg.n_paths;
    unsigned hw = n_threads > 0 ? static_cast<unsigned>(n_threads)
                                : std::max(1u, std::thread::hardware_concurrency());
    const std::int64_t block = 8192;
    const std::int64_t n_blocks = (n + block - 1) / block;
    hw = static_cast<unsigned>(std::min<std::int64_t>(hw, n_blocks));

    std::vector<std::vector<double>> times(static_cast<std::size_t>(n_blocks));
    std::vector<std::int64_t> censored(static_cast<std::size_t>(n_blocks), 0);
    std::vector<std::int64_t> upper(static_cast<std::size_t>(n_blocks), 0);

    std::atomic<std::int64_t> next_block{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t blk = next_block.fetch_add(1);
            if (blk >= n_blocks) return;
            auto& out = times[static_cast<std::size_t>(blk)];
            const std::int64_t lo = blk * block, hi = std::min(n, lo + block);
            out.reserve(static_cast<std::size_t>(hi - lo));
            for (std::int64_t p = lo; p < hi; ++p) {
                NormalSource normals(Xoshiro256pp(cfg.seed, static_cast<std::uint64_t>(p)));
                Crossing c = body(normals);
                if (!c.crossed) {
                    ++censored[static_cast<std::size_t>(blk)];
                } else {
                    out.push_back(c.variation); // variation stash; mapped below
                    if (c.upper) ++upper[static_cast<std::size_t>(blk)];
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < hw; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    EmpiricalCdf out;
    out.n_paths = n;
    out.horizon = horizon;
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        const auto& blk = times[static_cast<std::size_t>(b)];
        out.times.insert(out.times.end(), blk.begin(), blk.end());
        out.censored_count += censored[static_cast<std::size_t>(b)];
        out.upper_crossings += upper[static_cast<std::size_t>(b)];
    }
    std::sort(out.times.begin(), out.times.end());
    return out;
}

} // namespace

double EmpiricalCdf::value(double t) const {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    return static_cast<double>(it - times.begin()) / static_cast<double>(n_paths);
}

EmpiricalCdf simulate_one_sided(const QuadraticVariationPath& path, const OneSidedBoundary& b,
                                const SimConfig& cfg, int n_threads) {
    validate(cfg, path);
    const double V = path.value(cfg.horizon);
    const double g = b.g;
    EmpiricalCdf out;
    if (V <= 0.0) {
        out.n_paths = cfg.n_paths;
        out.censored_count = cfg.n_paths;
        out.horizon = cfg.horizon;
        return out;
    }
    const std::int64_t steps = step_count(V, cfg.clock_steps);

    out = run_paths(cfg, n_threads, cfg.horizon, [&](NormalSource& normals) {
        return walk_path(normals, V, steps, [&](double x0, double x1, double dv, double v0) {
            if (x1 >= g) {
                const double theta = (g - x0) / (x1 - x0);
                return Crossing{v0 + theta * dv, true, true};
            }
            if (cfg.bridge_correction) {
                const double e = 2.0 * (g - x0) * (g - x1);
                if (e < bridge_log_cutoff * dv &&
                    normals.rng.uniform01() < std::exp(-e / dv)) {
                    const double theta = (g - x0) / ((g - x0) + (g - x1));
                    return Crossing{v0 + theta * dv, true, true};
                }
            }
            return Crossing{};
        });
    });
    for (auto& v : out.times) v = map_to_time(path, v, V, cfg.horizon);
    std::sort(out.times.begin(), out.times.end());
    return out;
}

EmpiricalCdf simulate_two_sided(const QuadraticVariationPath& path, const TwoSidedBoundary& b,
                                const SimConfig& cfg, int n_threads) {
    validate(cfg, path);
    const double V = path.value(cfg.horizon);
    const double g = b.g, h = b.h;
    EmpiricalCdf out;
    if (V <= 0.0) {
        out.n_paths = cfg.n_paths;
        out.censored_count = cfg.n_paths;
        out.horizon = cfg.horizon;
        return out;
    }
    const std::int64_t steps = step_count(V, cfg.clock_steps);

    out = run_paths(cfg, n_threads, cfg.horizon, [&](NormalSource& normals) {
        return walk_path(normals, V, steps, [&](double x0, double x1, double dv, double v0) {
            if (x1 >= g) {
                const double theta = (g - x0) / (x1 - x0);
                return Crossing{v0 + theta * dv, true, true};
            }
            if (x1 <= h) {
                const double theta = (x0 - h) / (x0 - x1);
                return Crossing{v0 + theta * dv, true, false};
            }
            if (cfg.bridge_correction) {
                const double eg = 2.0 * (g - x0) * (g - x1);
                const double eh = 2.0 * (x0 - h) * (x1 - h);
                const double pg = eg < bridge_log_cutoff * dv ? std::exp(-eg / dv) : 0.0;
                const double ph = eh < bridge_log_cutoff * dv ? std::exp(-eh / dv) : 0.0;
                if (pg > 0.0 || ph > 0.0) {
                    const double pu = pg + ph - pg * ph;
                    const double u = normals.rng.uniform01();
                    if (u < pu) {
                        // Attribute the side proportionally to the one-barrier masses.
                        const bool up = u < pu * (pg / (pg + ph));
                        const double theta =
                            up ? (g - x0) / ((g - x0) + (g - x1))
                               : (x0 - h) / ((x0 - h) + (x1 - h));
                        return Crossing{v0 + theta * dv, true, up};
                    }
                }
            }
            return Crossing{};
        });
    });
    for (auto& v : out.times) v = map_to_time(path, v, V, cfg.horizon);
    std::sort(out.times.begin(), out.times.end());
    return out;
}

EmpiricalCdf simulate_mixture(const ScenarioSet& set, const SimConfig& cfg, int n_threads) {
    const auto& scenarios = set.scenarios();
    for (const auto& s : scenarios) validate(cfg, s.clock);

    struct Prepared {
        const Scenario* s;
        double total_variation;
        std::int64_t steps;
        double cum_weight;
    };
    std::vector<Prepared> prep;
    prep.reserve(scenarios.size());
    double cum = 0.0;
    for (const auto& s : scenarios) {
        cum += s.weight;
        const double V = s.clock.value(cfg.horizon);
        prep.push_back({&s, V, V > 0.0 ? step_count(V, cfg.clock_steps) : 0, cum});
    }

    auto simulate_under = [&](const Prepared& pr, NormalSource& normals) -> Crossing {
        if (pr.total_variation <= 0.0) return {};
        if (const auto* one = std::get_if<OneSidedBoundary>(&pr.s->boundary)) {
            const double g = one->g;
            return walk_path(normals, pr.total_variation, pr.steps,
                             [&](double x0, double x1, double dv, double v0) {
                                 if (x1 >= g)
                                     return Crossing{v0 + (g - x0) / (x1 - x0) * dv, true, true};
                                 if (cfg.bridge_correction) {
                                     const double e = 2.0 * (g - x0) * (g - x1);
                                     if (e < bridge_log_cutoff * dv &&
                                         normals.rng.uniform01() < std::exp(-e / dv))
                                         return Crossing{
                                             v0 + (g - x0) / ((g - x0) + (g - x1)) * dv, true,
                                             true};
                                 }
                                 return Crossing{};
                             });
        }
        const auto& two = std::get<TwoSidedBoundary>(pr.s->boundary);
        const double g = two.g, h = two.h;
        return walk_path(normals, pr.total_variation, pr.steps,
                         [&](double x0, double x1, double dv, double v0) {
                             if (x1 >= g)
                                 return Crossing{v0 + (g - x0) / (x1 - x0) * dv, true, true};
                             if (x1 <= h)
                                 return Crossing{v0 + (x0 - h) / (x0 - x1) * dv, true, false};
                             if (cfg.bridge_correction) {
                                 const double eg = 2.0 * (g - x0) * (g - x1);
                                 const double eh = 2.0 * (x0 - h) * (x1 - h);
                                 const double pg =
                                     eg < bridge_log_cutoff * dv ? std::exp(-eg / dv) : 0.0;
                                 const double ph =
                                     eh < bridge_log_cutoff * dv ? std::exp(-eh / dv) : 0.0;
                                 if (pg > 0.0 || ph > 0.0) {
                                     const double pu = pg + ph - pg * ph;
                                     const double u = normals.rng.uniform01();
                                     if (u < pu) {
                                         const bool up = u < pu * (pg / (pg + ph));
                                         const double theta =
                                             up ? (g - x0) / ((g - x0) + (g - x1))
                                                : (x0 - h) / ((x0 - h) + (x1 - h));
                                         return Crossing{v0 + theta * dv, true, up};
                                     }
                                 }
                             }
                             return Crossing{};
                         });
    };

    EmpiricalCdf out = run_paths(cfg, n_threads, cfg.horizon, [&](NormalSource& normals) {
        const Prepared* pr = &prep.front();
        if (prep.size() > 1) {
            const double u = normals.rng.uniform01();
            for (const auto& candidate : prep) {
                pr = &candidate;
                if (u <= candidate.cum_weight) break;
            }
        }
        Crossing c = simulate_under(*pr, normals);
        if (c.crossed)
            c.variation = map_to_time(pr->s->clock, c.variation, pr->total_variation,
                                      cfg.horizon);
        return c;
    });
    // run_paths stashed already-mapped times for the mixture case.
    std::sort(out.times.begin(), out.times.end());
    return out;
}

double ks_distance(const EmpiricalCdf& emp, const std::function<double(double)>& analytic_cdf) {
    if (emp.n_paths <= 0) throw validation_error("ks_distance: empty sample");
    const double n = static_cast<double>(emp.n_paths);
    double d = 0.0;
    for (std::size_t i = 0; i < emp.times.size(); ++i) {
        const double F = analytic_cdf(emp.times[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(F - lo, hi - F));
    }
    const double at_end = static_cast<double>(emp.times.size()) / n;
    d = std::max(d, std::abs(at_end - analytic_cdf(emp.horizon)));
    return d;
}

} // namespace fptqv
