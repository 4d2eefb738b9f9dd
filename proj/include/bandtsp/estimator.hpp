#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "bandtsp/crossover.hpp"
#include "bandtsp/sampling.hpp"
#include "bandtsp/tuple_geometry.hpp"

namespace bandtsp {

enum class Method { tuple, crossover };

inline const char* to_string(Method m) {
  return m == Method::tuple ? "tuple" : "crossover";
}

inline Method method_from_string(const std::string& s) {
  if (s == "tuple") return Method::tuple;
  if (s == "crossover") return Method::crossover;
  throw std::invalid_argument("unknown method: " + s);
}

struct EstimateConfig {
  Method method = Method::tuple;
  int k = 4;
  double h2 = 3.75;
  std::uint64_t replicates = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t chunks = 1;

  void validate() const {
    BandParams{h2, k}.validate();
    if (replicates < 1)
      throw std::invalid_argument("EstimateConfig: replicates must be >= 1");
    if (chunks < 1 || chunks > replicates)
      throw std::invalid_argument(
          "EstimateConfig: chunks must be in [1, replicates]");
  }
};

// Mean and standard error of the per-replicate statistic length/(k*h).
struct EstimateResult {
  EstimateConfig config;
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t count = 0;
  double wall_seconds = 0.0;
};

namespace detail {

// One-pass mean/M2 accumulator (Welford), mergeable in fixed chunk order so
// the reduction is identical no matter how many threads ran the chunks.
struct RunningMoments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const RunningMoments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double d = o.mean - mean;
    const std::uint64_t total = n + o.n;
    mean += d * static_cast<double>(o.n) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(n) *
                     static_cast<double>(o.n) / static_cast<double>(total);
    n = total;
  }
};

// Replicate g draws from its own stream (seed, g); chunks only group the
// replicate range for scheduling, so every chunk layout sees identical
// samples and a tuple run and a crossover run at equal seed are exactly
// sample-paired.
inline RunningMoments run_chunk(const EstimateConfig& cfg, std::uint64_t lo,
                                std::uint64_t hi) {
  const BandParams params{cfg.h2, cfg.k};
  const double scale = 1.0 / (static_cast<double>(cfg.k) * params.h());
  RunningMoments acc;
  PathWorkspace& ws = tls_path_workspace();
  const bool use_dp = prefer_dp(cfg.k);
  CrossSample cross;
  for (std::uint64_t g = lo; g < hi; ++g) {
    SplitStream stream(StreamKey{cfg.seed, g});
    double length = 0.0;
    if (cfg.method == Method::tuple) {
      sample_tuple_into(stream, cfg.k, cross.tuple);
      fill_scaled_distances(cross.tuple, params, ws);
      length = min_path_length_filled(cfg.k, -1, use_dp, ws);
    } else {
      sample_cross_into(stream, cfg.k, cross);
      length = crossover_value(cross, params).length;
    }
    acc.add(length * scale);
  }
  return acc;
}

inline unsigned resolve_threads(unsigned threads, std::uint64_t jobs) {
  unsigned t = threads != 0 ? threads : std::thread::hardware_concurrency();
  if (t == 0) t = 1;
  return static_cast<unsigned>(
      std::min<std::uint64_t>(t, jobs > 0 ? jobs : 1));
}

}  // namespace detail

// Monte Carlo estimate of the chosen band statistic. Replicates are split
// over `config.chunks` ranges (even split, remainder to low indices), chunk
// results are merged in chunk-index order, and per-replicate streams make
// the numbers independent of the worker count.
inline EstimateResult estimate(const EstimateConfig& config,
                               unsigned threads = 0) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const std::uint64_t chunks = config.chunks;
  const std::uint64_t per = config.replicates / chunks;
  const std::uint64_t rem = config.replicates % chunks;
  std::vector<detail::RunningMoments> partial(chunks);

  std::atomic<std::uint64_t> next{0};
  const auto worker = [&] {
    for (std::uint64_t c = next.fetch_add(1); c < chunks;
         c = next.fetch_add(1)) {
      const std::uint64_t lo = c * per + std::min<std::uint64_t>(c, rem);
      const std::uint64_t hi = lo + per + (c < rem ? 1 : 0);
      partial[c] = detail::run_chunk(config, lo, hi);
    }
  };

  const unsigned nthreads = detail::resolve_threads(threads, chunks);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  detail::RunningMoments total;
  for (const auto& p : partial) total.merge(p);

  EstimateResult out;
  out.config = config;
  out.count = total.n;
  out.mean = total.mean;
  out.std_err = total.n > 1
                    ? std::sqrt(total.m2 / static_cast<double>(total.n - 1) /
                                static_cast<double>(total.n))
                    : 0.0;
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

// Paired improvement (tuple mean minus crossover mean) for a (k, h2) cell
// present with both methods in a sweep.
struct SweepImprovement {
  int k = 0;
  double h2 = 0.0;
  double delta = 0.0;
};

struct SweepResult {
  std::vector<EstimateResult> results;  // 1:1 with the input configs
  std::vector<std::string> errors;      // non-empty where a config failed
  std::vector<SweepImprovement> improvements;
};

// Runs every config in order; per-config failures are recorded, not fatal.
inline SweepResult sweep(std::span<const EstimateConfig> configs,
                         unsigned threads = 0) {
  if (configs.empty()) throw std::invalid_argument("sweep: empty config list");
  SweepResult out;
  out.results.resize(configs.size());
  out.errors.resize(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    try {
      out.results[i] = estimate(configs[i], threads);
    } catch (const std::exception& e) {
      out.errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (!out.errors[i].empty() || configs[i].method != Method::tuple) continue;
    for (std::size_t j = 0; j < configs.size(); ++j) {
      if (!out.errors[j].empty() || configs[j].method != Method::crossover)
        continue;
      if (configs[j].k == configs[i].k && configs[j].h2 == configs[i].h2) {
        out.improvements.push_back(
            {configs[i].k, configs[i].h2,
             out.results[i].mean - out.results[j].mean});
        break;
      }
    }
  }
  return out;
}

inline nlohmann::json to_json(const EstimateResult& r) {
  return {{"method", to_string(r.config.method)},
          {"k", r.config.k},
          {"h2", r.config.h2},
          {"M", r.config.replicates},
          {"seed", r.config.seed},
          {"chunks", r.config.chunks},
          {"mean", r.mean},
          {"std_err", r.std_err},
          {"wall_seconds", r.wall_seconds}};
}

inline EstimateConfig config_from_json(const nlohmann::json& j) {
  EstimateConfig c;
  c.method = method_from_string(j.at("method").get<std::string>());
  c.k = j.at("k").get<int>();
  c.h2 = j.at("h2").get<double>();
  c.replicates = j.at("M").get<std::uint64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.chunks = j.at("chunks").get<std::uint64_t>();
  return c;
}

inline std::string csv_header() {
  return "method,k,h2,M,seed,chunks,mean,std_err,wall_seconds";
}

inline std::string to_csv_row(const EstimateResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%llu,%llu,%llu,%.17g,%.17g,%.6g",
                to_string(r.config.method), r.config.k, r.config.h2,
                static_cast<unsigned long long>(r.config.replicates),
                static_cast<unsigned long long>(r.config.seed),
                static_cast<unsigned long long>(r.config.chunks), r.mean,
                r.std_err, r.wall_seconds);
  return buf;
}

}  // namespace bandtsp
