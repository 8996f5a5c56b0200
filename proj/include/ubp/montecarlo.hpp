#pragma once

// Monte Carlo experiments on the torus: percolation-probability curves,
// critical-probability bisection, and infection-time scaling. Every random
// decision comes from a counter generator keyed by (seed, trial, site), so
// any trial can be reproduced in isolation and the output is byte-identical
// regardless of worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "ubp/engine.hpp"
#include "ubp/errors.hpp"
#include "ubp/family.hpp"

namespace ubp {

namespace detail {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix3(std::uint64_t seed, std::uint64_t trial,
                          std::uint64_t site) {
  return splitmix(splitmix(splitmix(seed) ^ trial) ^ site);
}

inline double unit_uniform(std::uint64_t seed, std::uint64_t trial,
                           std::uint64_t site) {
  return static_cast<double>(mix3(seed, trial, site) >> 11) * 0x1.0p-53;
}

/// Runs f(0..count-1) across workers; f must only touch its own slot.
template <typename F>
void parallel_trials(long long count, int workers, F&& f) {
  const int w = std::max(1, workers);
  if (w == 1 || count < 2) {
    for (long long i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  for (int k = 0; k < w; ++k)
    pool.emplace_back([&] {
      for (;;) {
        const long long i = next.fetch_add(1);
        if (i >= count) return;
        f(i);
      }
    });
  for (std::thread& t : pool) t.join();
}

}  // namespace detail

struct Interval {
  double lo = 0, hi = 1;
};

/// Wilson 95% score interval.
inline Interval wilson(long long successes, long long trials) {
  if (trials <= 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = phat + z2 / (2.0 * n);
  const double spread =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return {(center - spread) / denom, (center + spread) / denom};
}

inline Lattice sample_initial(int n, double p, std::uint64_t seed,
                              std::uint64_t trial) {
  if (!(p >= 0.0 && p <= 1.0))
    throw PreconditionError("p must lie in [0, 1]");
  Lattice lat = Lattice::torus(n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const std::uint64_t idx =
          static_cast<std::uint64_t>(y) * static_cast<std::uint64_t>(n) + x;
      if (detail::unit_uniform(seed, trial, idx) < p) lat.grid.set(x, y, true);
    }
  return lat;
}

struct ExperimentConfig {
  std::string family_name = "family";
  int n = 64;
  std::vector<double> p_grid;
  double p_lo = 0.0, p_hi = 0.0;  // bisection bracket
  long long trials = 400;
  std::uint64_t seed = 1;
  long long max_steps = -1;  // <= 0: engine default budget
  int workers = 1;
};

struct EstimateRow {
  std::string family;
  int n = 0;
  double p = 0;
  long long trials = 0;
  long long successes = 0;
  double phat = 0, wilson_lo = 0, wilson_hi = 1;
  std::optional<double> tau_median, tau_mean;
};

inline const char* csv_header() {
  return "family,n,p,trials,successes,phat,wilson_lo,wilson_hi,tau_median,"
         "tau_mean";
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace detail

inline std::string to_csv(const EstimateRow& r) {
  std::string out = r.family;
  out += ',';
  out += std::to_string(r.n);
  out += ',';
  out += detail::fmt_double(r.p);
  out += ',';
  out += std::to_string(r.trials);
  out += ',';
  out += std::to_string(r.successes);
  out += ',';
  out += detail::fmt_double(r.phat);
  out += ',';
  out += detail::fmt_double(r.wilson_lo);
  out += ',';
  out += detail::fmt_double(r.wilson_hi);
  out += ',';
  if (r.tau_median) out += detail::fmt_double(*r.tau_median);
  out += ',';
  if (r.tau_mean) out += detail::fmt_double(*r.tau_mean);
  return out;
}

inline void write_csv(std::ostream& os, const std::vector<EstimateRow>& rows) {
  os << csv_header() << '\n';
  for (const EstimateRow& r : rows) os << to_csv(r) << '\n';
}

namespace detail {

inline void validate_config(const UpdateFamily& fam,
                            const ExperimentConfig& cfg) {
  if (cfg.n < 4 * fam.range)
    throw PreconditionError("lattice size below four times the family range");
  if (cfg.trials < 1) throw PreconditionError("at least one trial required");
}

/// Percolation successes among `trials` trials at density p. Trial keys are
/// offset by `key_base` so distinct experiment points never share a stream.
inline long long count_percolating(const UpdateFamily& fam,
                                   const ExperimentConfig& cfg, double p,
                                   std::uint64_t key_base, long long trials) {
  const CompiledFamily cf = CompiledFamily::compile(fam);
  std::vector<char> hit(static_cast<std::size_t>(trials), 0);
  parallel_trials(trials, cfg.workers, [&](long long i) {
    Lattice lat = sample_initial(cfg.n, p, cfg.seed,
                                 key_base + static_cast<std::uint64_t>(i));
    hit[static_cast<std::size_t>(i)] = percolates(std::move(lat), cf) ? 1 : 0;
  });
  long long s = 0;
  for (char c : hit) s += c;
  return s;
}

inline EstimateRow make_row(const ExperimentConfig& cfg, double p,
                            long long trials, long long successes) {
  EstimateRow row;
  row.family = cfg.family_name;
  row.n = cfg.n;
  row.p = p;
  row.trials = trials;
  row.successes = successes;
  row.phat = trials > 0 ? static_cast<double>(successes) / trials : 0.0;
  if (p <= 0.0 || p >= 1.0) {
    row.wilson_lo = row.wilson_hi = row.phat;
  } else {
    const Interval w = wilson(successes, trials);
    row.wilson_lo = w.lo;
    row.wilson_hi = w.hi;
  }
  return row;
}

}  // namespace detail

inline std::vector<EstimateRow> percolation_probability(
    const UpdateFamily& fam, const ExperimentConfig& cfg) {
  detail::validate_config(fam, cfg);
  if (cfg.p_grid.empty()) throw PreconditionError("empty p grid");
  std::vector<EstimateRow> rows;
  for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
    const double p = cfg.p_grid[pi];
    const std::uint64_t base =
        static_cast<std::uint64_t>(pi) * static_cast<std::uint64_t>(cfg.trials);
    const long long s =
        detail::count_percolating(fam, cfg, p, base, cfg.trials);
    rows.push_back(detail::make_row(cfg, p, cfg.trials, s));
  }
  return rows;
}

struct PcResult {
  double lo = 0, hi = 0;
  EstimateRow probe_lo, probe_hi;
  std::vector<EstimateRow> trace;
};

/// Bisects the percolation threshold between cfg.p_lo and cfg.p_hi until the
/// bracket's relative width drops below 2^-10. At each midpoint, trials run
/// in fixed batches until the Wilson interval excludes 1/2 or the budget is
/// spent; the side is then chosen by the point estimate.
inline PcResult estimate_pc(const UpdateFamily& fam,
                            const ExperimentConfig& cfg) {
  detail::validate_config(fam, cfg);
  if (!(cfg.p_lo > 0.0 && cfg.p_lo < cfg.p_hi && cfg.p_hi < 1.0))
    throw PreconditionError("bisection bounds must satisfy 0 < lo < hi < 1");

  PcResult out;
  std::uint64_t point = 0;
  const auto key_of = [&](std::uint64_t pt) {
    return pt * static_cast<std::uint64_t>(cfg.trials);
  };

  const long long s_lo =
      detail::count_percolating(fam, cfg, cfg.p_lo, key_of(point), cfg.trials);
  out.probe_lo = detail::make_row(cfg, cfg.p_lo, cfg.trials, s_lo);
  ++point;
  const long long s_hi =
      detail::count_percolating(fam, cfg, cfg.p_hi, key_of(point), cfg.trials);
  out.probe_hi = detail::make_row(cfg, cfg.p_hi, cfg.trials, s_hi);
  ++point;
  if (!(out.probe_lo.phat < 0.5 && out.probe_hi.phat >= 0.5))
    throw PreconditionError(
        "non-bracketing bounds: P(" + detail::fmt_double(cfg.p_lo) + ") = " +
        detail::fmt_double(out.probe_lo.phat) + ", P(" +
        detail::fmt_double(cfg.p_hi) + ") = " +
        detail::fmt_double(out.probe_hi.phat));

  double lo = cfg.p_lo, hi = cfg.p_hi;
  constexpr long long kBatch = 32;
  while (hi - lo >= hi * 0x1.0p-10) {
    const double mid = 0.5 * (lo + hi);
    long long done = 0, succ = 0;
    while (done < cfg.trials) {
      const long long batch = std::min(kBatch, cfg.trials - done);
      succ += detail::count_percolating(fam, cfg, mid, key_of(point) + done,
                                        batch);
      done += batch;
      const Interval w = wilson(succ, done);
      if (w.lo > 0.5 || w.hi < 0.5) break;
    }
    ++point;
    EstimateRow row = detail::make_row(cfg, mid, done, succ);
    out.trace.push_back(row);
    if (row.phat >= 0.5)
      hi = mid;
    else
      lo = mid;
  }
  out.lo = lo;
  out.hi = hi;
  return out;
}

struct TauRow {
  double p = 0;
  long long trials = 0;
  long long measured = 0;   // tau observed and within the wrap guard
  long long discarded = 0;  // tau observed but beyond n/4
  long long exhausted = 0;  // budget or fixpoint without origin infection
  double tau_median = 0, tau_mean = 0;
  bool aborted = false;
};

struct TauScalingResult {
  std::vector<TauRow> rows;
  // log(median tau) against log(1/p): supercritical diagnostic.
  double slope_super = 0, se_super = 0;
  // log(log(median tau)) against log(1/p): critical diagnostic.
  double slope_crit = 0, se_crit = 0;
};

struct LineFit {
  double slope = 0, intercept = 0;
};

inline LineFit fit_line(const std::vector<double>& x,
                        const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return {};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double d = n * sxx - sx * sx;
  if (d == 0) return {};
  LineFit f;
  f.slope = (n * sxy - sx * sy) / d;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

namespace detail {

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace detail

inline TauScalingResult tau_scaling(const UpdateFamily& fam,
                                    const ExperimentConfig& cfg) {
  detail::validate_config(fam, cfg);
  if (cfg.p_grid.empty()) throw PreconditionError("empty p grid");
  const CompiledFamily cf = CompiledFamily::compile(fam);
  const long long budget =
      cfg.max_steps > 0 ? cfg.max_steps
                        : 2LL * cfg.n * static_cast<long long>(cfg.n);
  const long long guard = cfg.n / 4;

  TauScalingResult out;
  std::vector<std::vector<double>> kept_per_p;
  for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
    const double p = cfg.p_grid[pi];
    const std::uint64_t base =
        static_cast<std::uint64_t>(pi) * static_cast<std::uint64_t>(cfg.trials);
    std::vector<long long> taus(static_cast<std::size_t>(cfg.trials), -1);
    detail::parallel_trials(cfg.trials, cfg.workers, [&](long long i) {
      Lattice lat = sample_initial(cfg.n, p, cfg.seed,
                                   base + static_cast<std::uint64_t>(i));
      const std::optional<long long> t = tau(std::move(lat), cf, budget);
      taus[static_cast<std::size_t>(i)] = t ? *t : -1;
    });

    TauRow row;
    row.p = p;
    row.trials = cfg.trials;
    std::vector<double> kept;
    for (long long t : taus) {
      if (t < 0)
        ++row.exhausted;
      else if (t > guard)
        ++row.discarded;
      else {
        ++row.measured;
        kept.push_back(static_cast<double>(t));
      }
    }
    row.aborted = 5 * row.exhausted > row.trials;  // exhaustion rate > 20%
    if (!kept.empty()) {
      row.tau_median = detail::median_of(kept);
      double s = 0;
      for (double t : kept) s += t;
      row.tau_mean = s / static_cast<double>(kept.size());
    }
    out.rows.push_back(row);
    kept_per_p.push_back(std::move(kept));
  }

  // Regressions over non-aborted rows with positive medians.
  std::vector<double> xs, ys_super, ys_crit;
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const TauRow& r = out.rows[i];
    if (r.aborted || r.measured == 0 || r.tau_median <= 1.0) continue;
    xs.push_back(std::log(1.0 / r.p));
    ys_super.push_back(std::log(r.tau_median));
    ys_crit.push_back(std::log(std::log(r.tau_median)));
    used.push_back(i);
  }
  out.slope_super = fit_line(xs, ys_super).slope;
  out.slope_crit = fit_line(xs, ys_crit).slope;

  // Bootstrap standard errors over per-p resamples of the kept tau values.
  if (used.size() >= 2) {
    std::uint64_t ctr = 0;
    constexpr int kBoot = 200;
    std::vector<double> bs_super, bs_crit;
    for (int b = 0; b < kBoot; ++b) {
      std::vector<double> yb_s, yb_c, xb;
      bool ok = true;
      for (std::size_t ui : used) {
        const std::vector<double>& pool = kept_per_p[ui];
        std::vector<double> sample(pool.size());
        for (std::size_t s = 0; s < pool.size(); ++s) {
          const std::uint64_t r = detail::mix3(cfg.seed ^ 0xb007ULL, ctr++, s);
          sample[s] = pool[r % pool.size()];
        }
        const double med = detail::median_of(sample);
        if (med <= 1.0) {
          ok = false;
          break;
        }
        xb.push_back(std::log(1.0 / out.rows[ui].p));
        yb_s.push_back(std::log(med));
        yb_c.push_back(std::log(std::log(med)));
      }
      if (!ok) continue;
      bs_super.push_back(fit_line(xb, yb_s).slope);
      bs_crit.push_back(fit_line(xb, yb_c).slope);
    }
    const auto sd = [](const std::vector<double>& v) {
      if (v.size() < 2) return 0.0;
      double m = 0;
      for (double a : v) m += a;
      m /= static_cast<double>(v.size());
      double q = 0;
      for (double a : v) q += (a - m) * (a - m);
      return std::sqrt(q / static_cast<double>(v.size() - 1));
    };
    out.se_super = sd(bs_super);
    out.se_crit = sd(bs_crit);
  }
  return out;
}

/// CSV rows for a tau-scaling run (successes = measured tau count).
inline std::vector<EstimateRow> tau_rows_to_estimates(
    const ExperimentConfig& cfg, const TauScalingResult& res) {
  std::vector<EstimateRow> rows;
  for (const TauRow& r : res.rows) {
    EstimateRow row = detail::make_row(cfg, r.p, r.trials, r.measured);
    if (r.measured > 0) {
      row.tau_median = r.tau_median;
      row.tau_mean = r.tau_mean;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ubp
