#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "epik/kem.hpp"

namespace epik {

struct BenchSample {
  uint32_t size_bytes;
  double encrypt_us;  // median over trials
  double decrypt_us;
  uint32_t trials;
};

struct LinearFit {
  double slope_us_per_byte;
  double intercept_us;
  double r_squared;
};

struct BenchReport {
  LinearFit encrypt_fit;
  LinearFit decrypt_fit;
  double dec_to_enc_ratio;
  std::vector<BenchSample> samples;
};

struct ChainSimRow {
  uint32_t size_bytes;
  double total_ms;
  double compute_ms;
  double compute_share;  // compute / total
};

// Ordinary least squares y = m x + c; r^2 = 1 - SSres/SStot.
inline LinearFit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3) {
    throw std::invalid_argument("ols_fit: need at least 3 samples");
  }
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("ols_fit: degenerate x values");
  double m = (n * sxy - sx * sy) / denom;
  double c = (sy - m * sx) / n;
  double mean_y = sy / n;
  double ss_res = 0, ss_tot = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (m * xs[i] + c);
    ss_res += e * e;
    double d = ys[i] - mean_y;
    ss_tot += d * d;
  }
  double r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return LinearFit{m, c, r2};
}

namespace detail {

// Median wall time per call in microseconds.  Each trial times a batch long
// enough to swamp clock granularity; the median over trials rejects
// scheduler noise.
template <typename Fn>
double median_time_us(Fn&& fn, uint32_t trials, double target_batch_us = 2000.0) {
  using clock = std::chrono::steady_clock;
  auto once = [&]() {
    auto t0 = clock::now();
    fn();
    auto t1 = clock::now();
    return std::chrono::duration<double, std::micro>(t1 - t0).count();
  };
  double est = once();  // warm-up + calibration
  uint32_t reps = 1;
  if (est < target_batch_us) {
    reps = static_cast<uint32_t>(std::min(10000.0, std::ceil(target_batch_us / std::max(est, 0.01))));
  }
  std::vector<double> times;
  times.reserve(trials);
  for (uint32_t t = 0; t < trials; ++t) {
    auto t0 = clock::now();
    for (uint32_t i = 0; i < reps; ++i) fn();
    auto t1 = clock::now();
    times.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count() / reps);
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

}  // namespace detail

// Times pke_encrypt / pke_decrypt per message size.  Medians over at least
// 11 trials; each trial times one batch per size, and trials cycle through
// the sizes round-robin so clock drift lands evenly instead of on contiguous
// size blocks.
inline std::vector<BenchSample> run_sweep(const ParamSet& params,
                                          const std::vector<uint32_t>& sizes,
                                          uint32_t trials, RandomSource& rng) {
  using clock = std::chrono::steady_clock;
  constexpr double kBatchUs = 3000.0;
  trials = std::max<uint32_t>(trials, 11);
  auto [pk, sk] = keygen(params, rng);

  struct Task {
    std::vector<uint8_t> message;
    Ciphertext ct;
    uint32_t enc_reps = 1, dec_reps = 1;
    std::vector<double> enc_us, dec_us;
  };
  std::vector<Task> tasks;
  tasks.reserve(sizes.size());
  for (uint32_t size : sizes) {
    std::vector<uint8_t> message = rng.bytes(size);
    // pin the ephemeral chain length for the timed ciphertexts so decrypt
    // cost varies only with message size
    FixedSequence ct_rng({0});
    Ciphertext ct = pke_encrypt(pk, message, ct_rng);
    tasks.push_back(Task{std::move(message), std::move(ct), 1, 1, {}, {}});
  }

  auto time_us = [](auto&& fn) {
    auto t0 = clock::now();
    fn();
    auto t1 = clock::now();
    return std::chrono::duration<double, std::micro>(t1 - t0).count();
  };
  auto reps_for = [](double once_us) {
    return static_cast<uint32_t>(
        std::min(20000.0, std::ceil(kBatchUs / std::max(once_us, 0.01))));
  };
  for (Task& task : tasks) {  // warm-up + batch calibration
    task.enc_reps = reps_for(time_us([&]() { (void)pke_encrypt(pk, task.message, rng); }));
    task.dec_reps = reps_for(time_us([&]() { (void)pke_decrypt(sk, task.ct); }));
  }

  for (uint32_t t = 0; t < trials; ++t) {
    for (Task& task : tasks) {
      task.enc_us.push_back(time_us([&]() {
                              for (uint32_t i = 0; i < task.enc_reps; ++i) {
                                (void)pke_encrypt(pk, task.message, rng);
                              }
                            }) /
                            task.enc_reps);
      task.dec_us.push_back(time_us([&]() {
                              for (uint32_t i = 0; i < task.dec_reps; ++i) {
                                (void)pke_decrypt(sk, task.ct);
                              }
                            }) /
                            task.dec_reps);
    }
  }

  std::vector<BenchSample> samples;
  samples.reserve(sizes.size());
  for (size_t i = 0; i < sizes.size(); ++i) {
    std::sort(tasks[i].enc_us.begin(), tasks[i].enc_us.end());
    std::sort(tasks[i].dec_us.begin(), tasks[i].dec_us.end());
    samples.push_back(BenchSample{sizes[i], tasks[i].enc_us[trials / 2],
                                  tasks[i].dec_us[trials / 2], trials});
  }
  return samples;
}

// Least-squares timing model per operation, plus the decrypt/encrypt ratio
// (recorded, not asserted).
inline BenchReport fit_linear(const std::vector<BenchSample>& samples) {
  if (samples.size() < 3) throw std::invalid_argument("fit_linear: need at least 3 samples");
  std::vector<double> xs, enc, dec;
  double enc_sum = 0, dec_sum = 0;
  for (const BenchSample& s : samples) {
    xs.push_back(static_cast<double>(s.size_bytes));
    enc.push_back(s.encrypt_us);
    dec.push_back(s.decrypt_us);
    enc_sum += s.encrypt_us;
    dec_sum += s.decrypt_us;
  }
  return BenchReport{ols_fit(xs, enc), ols_fit(xs, dec),
                     enc_sum == 0 ? 0.0 : dec_sum / enc_sum, samples};
}

// Sequential multi-hop chain model: every node spends a constant per-hop
// latency plus its local encrypt+decrypt time.  With realistic latencies the
// computation share is small.
inline std::vector<ChainSimRow> chain_sim(const ParamSet& params, double latency_ms,
                                          const std::vector<uint32_t>& sizes,
                                          uint32_t nodes, uint32_t trials,
                                          RandomSource& rng) {
  if (nodes == 0) throw std::invalid_argument("chain_sim: need at least one node");
  if (latency_ms < 0) throw std::invalid_argument("chain_sim: negative latency");
  std::vector<BenchSample> samples = run_sweep(params, sizes, trials, rng);
  std::vector<ChainSimRow> rows;
  rows.reserve(samples.size());
  for (const BenchSample& s : samples) {
    double compute_ms = nodes * (s.encrypt_us + s.decrypt_us) / 1000.0;
    double total_ms = nodes * latency_ms + compute_ms;
    rows.push_back(ChainSimRow{s.size_bytes, total_ms, compute_ms,
                               total_ms == 0 ? 0.0 : compute_ms / total_ms});
  }
  return rows;
}

// CSV: fixed header, one row per sample, then the fitted model as '#'
// comment lines.
inline void write_csv(std::ostream& out, const BenchReport& report) {
  char buf[256];
  out << "size_bytes,encrypt_us,decrypt_us,trials\n";
  for (const BenchSample& s : report.samples) {
    std::snprintf(buf, sizeof(buf), "%u,%.17g,%.17g,%u\n", s.size_bytes, s.encrypt_us,
                  s.decrypt_us, s.trials);
    out << buf;
  }
  auto fit_line = [&](const char* op, const LinearFit& f) {
    std::snprintf(buf, sizeof(buf), "# %s_slope_us_per_byte=%.17g\n# %s_intercept_us=%.17g\n# %s_r_squared=%.17g\n",
                  op, f.slope_us_per_byte, op, f.intercept_us, op, f.r_squared);
    out << buf;
  };
  fit_line("encrypt", report.encrypt_fit);
  fit_line("decrypt", report.decrypt_fit);
  std::snprintf(buf, sizeof(buf), "# dec_to_enc_ratio=%.17g\n", report.dec_to_enc_ratio);
  out << buf;
}

inline BenchReport read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "size_bytes,encrypt_us,decrypt_us,trials") {
    throw std::invalid_argument("read_csv: bad header");
  }
  BenchReport report{{0, 0, 0}, {0, 0, 0}, 0, {}};
  auto comment_value = [&](const std::string& l) {
    size_t eq = l.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("read_csv: bad comment line");
    return std::stod(l.substr(eq + 1));
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("encrypt_slope") != std::string::npos) report.encrypt_fit.slope_us_per_byte = comment_value(line);
      else if (line.find("encrypt_intercept") != std::string::npos) report.encrypt_fit.intercept_us = comment_value(line);
      else if (line.find("encrypt_r_squared") != std::string::npos) report.encrypt_fit.r_squared = comment_value(line);
      else if (line.find("decrypt_slope") != std::string::npos) report.decrypt_fit.slope_us_per_byte = comment_value(line);
      else if (line.find("decrypt_intercept") != std::string::npos) report.decrypt_fit.intercept_us = comment_value(line);
      else if (line.find("decrypt_r_squared") != std::string::npos) report.decrypt_fit.r_squared = comment_value(line);
      else if (line.find("dec_to_enc_ratio") != std::string::npos) report.dec_to_enc_ratio = comment_value(line);
      continue;
    }
    BenchSample s{0, 0, 0, 0};
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) throw std::invalid_argument("read_csv: bad row");
    s.size_bytes = static_cast<uint32_t>(std::stoul(cell));
    if (!std::getline(row, cell, ',')) throw std::invalid_argument("read_csv: bad row");
    s.encrypt_us = std::stod(cell);
    if (!std::getline(row, cell, ',')) throw std::invalid_argument("read_csv: bad row");
    s.decrypt_us = std::stod(cell);
    if (!std::getline(row, cell, ',')) throw std::invalid_argument("read_csv: bad row");
    s.trials = static_cast<uint32_t>(std::stoul(cell));
    report.samples.push_back(s);
  }
  return report;
}

}  // namespace epik
