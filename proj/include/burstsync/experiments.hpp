#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asymptotics.hpp"
#include "brun.hpp"
#include "deletion_model.hpp"
#include "exact_entropy.hpp"
#include "monte_carlo.hpp"
#include "sync_demo.hpp"

namespace burstsync {

enum class Command { exact, mc, asym, bruns, typicality, syncdemo, sweep };

inline constexpr std::string_view command_name(Command c) {
  switch (c) {
    case Command::exact: return "exact";
    case Command::mc: return "mc";
    case Command::asym: return "asym";
    case Command::bruns: return "bruns";
    case Command::typicality: return "typicality";
    case Command::syncdemo: return "syncdemo";
    case Command::sweep: return "sweep";
  }
  return "?";
}

inline Command parse_command(std::string_view name) {
  for (Command c : {Command::exact, Command::mc, Command::asym, Command::bruns, Command::typicality,
                    Command::syncdemo, Command::sweep})
    if (command_name(c) == name) return c;
  throw std::invalid_argument("unknown command '" + std::string(name) + "'");
}

inline bool is_stochastic(Command c) { return c != Command::exact && c != Command::asym; }

/// Invalid experiment settings; the CLI maps this to exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  Command command = Command::exact;
  double alpha = 0.5;
  double beta = 0.2;
  std::vector<double> betas;  // overrides beta when non-empty
  std::string n_spec = "8";
  std::size_t samples = 100000;
  std::optional<std::uint64_t> seed;
  std::string output;  // empty: stdout
  std::size_t cap = 12;
  unsigned workers = 1;
  std::vector<double> rates{0.25, 0.5, 0.75, 1.0};
  std::size_t trials = 200;
  std::vector<std::size_t> bs{1, 2, 3};
  double tolerance = 1e-10;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// "a..b" (inclusive), "a,b,c", or a single value.
inline std::vector<std::size_t> parse_n_list(std::string_view spec) {
  auto to_size = [&](std::string_view s) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos)
      throw UsageError("invalid block length list '" + std::string(spec) + "'");
    return std::stoull(std::string(s));
  };
  std::vector<std::size_t> out;
  if (const auto dots = spec.find(".."); dots != std::string_view::npos) {
    const std::size_t first = to_size(spec.substr(0, dots));
    const std::size_t last = to_size(spec.substr(dots + 2));
    if (last < first) throw UsageError("empty block length range '" + std::string(spec) + "'");
    for (std::size_t n = first; n <= last; ++n) out.push_back(n);
  } else {
    std::size_t start = 0;
    while (start <= spec.size()) {
      const auto comma = spec.find(',', start);
      const auto end = comma == std::string_view::npos ? spec.size() : comma;
      out.push_back(to_size(spec.substr(start, end - start)));
      start = end + 1;
    }
  }
  for (std::size_t n : out)
    if (n < 1) throw UsageError("block lengths must be at least 1");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<double> beta_list(const ExperimentConfig& cfg) {
  std::vector<double> out = cfg.betas.empty() ? std::vector<double>{cfg.beta} : cfg.betas;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline void validate(const ExperimentConfig& cfg) {
  auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open_unit(cfg.alpha)) throw UsageError("--alpha must lie in (0,1)");
  for (double b : beta_list(cfg))
    if (!open_unit(b)) throw UsageError("every beta must lie in (0,1)");
  if (cfg.samples < 1) throw UsageError("--samples must be at least 1");
  if (cfg.trials < 1) throw UsageError("--trials must be at least 1");
  if (cfg.workers < 1) throw UsageError("--workers must be at least 1");
  if (!(cfg.tolerance > 0.0)) throw UsageError("--tolerance must be positive");
  for (double r : cfg.rates)
    if (!(r > 0.0 && r <= 1.0)) throw UsageError("every rate must lie in (0,1]");
  for (std::size_t b : cfg.bs)
    if (b < 1) throw UsageError("every b must be at least 1");
  if (is_stochastic(cfg.command) && !cfg.seed)
    throw UsageError("--seed is required for '" + std::string(command_name(cfg.command)) + "'");
  parse_n_list(cfg.n_spec);
}

/// Fixed 12-significant-digit rendering used for every CSV number.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string_view> names) {
    bool first = true;
    for (auto name : names) {
      if (!first) out_ << ',';
      out_ << name;
      first = false;
    }
    out_ << '\n';
  }

  CsvWriter& cell(double v) { return raw(format_number(v)); }
  CsvWriter& cell(std::size_t v) { return raw(std::to_string(v)); }
  CsvWriter& cell(std::string_view v) { return raw(v); }
  CsvWriter& empty() { return raw(""); }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }

 private:
  CsvWriter& raw(std::string_view v) {
    if (!first_) out_ << ',';
    out_ << v;
    first_ = false;
    return *this;
  }

  std::ostream& out_;
  bool first_ = true;
};

namespace detail {

inline void run_exact(const ExperimentConfig& cfg, CsvWriter& csv, std::ostream& summary) {
  const DeletionParams p(cfg.alpha, cfg.beta);
  const auto ns = parse_n_list(cfg.n_spec);
  const ExactOptions opts{cfg.cap, cfg.workers};
  if (ns.back() > cfg.cap) throw EnumerationCapExceeded(ns.back(), cfg.cap);
  csv.header({"n", "R_n", "J_n", "E_n", "H_D1_D0", "H_D1_D0_Dn1", "identity_residual"});
  double worst = 0.0;
  for (std::size_t n : ns) {
    const EntropyReport r = entropy_report(p, n, opts);
    csv.cell(n).cell(r.rate).cell(r.j_rate).cell(r.secret).cell(r.h_d1_given_d0).cell(r.h_d1_given_d0_dn1);
    if (r.identity_residual) {
      csv.cell(*r.identity_residual);
      worst = std::max(worst, *r.identity_residual);
    } else {
      csv.empty();
    }
    csv.end_row();
  }
  summary << "exact: alpha=" << cfg.alpha << " beta=" << cfg.beta << " n=" << ns.front() << ".." << ns.back()
          << " worst identity residual " << format_number(worst) << '\n';
}

inline void run_mc(const ExperimentConfig& cfg, CsvWriter& csv, std::ostream& summary) {
  const McOptions opts{cfg.workers};
  csv.header({"n", "beta", "quantity", "mean", "stderr", "samples", "seed"});
  for (std::size_t n : parse_n_list(cfg.n_spec)) {
    for (double beta : beta_list(cfg)) {
      const DeletionParams p(cfg.alpha, beta);
      const auto en = estimate_en(p, n, cfg.samples, *cfg.seed, opts);
      const auto jn = estimate_jn(p, n, cfg.samples, *cfg.seed, opts);
      EstimateWithError rmin = en;
      rmin.mean = stationary_rate(p) + h_d1_given_d0(p) - en.mean;
      const std::pair<std::string_view, EstimateWithError> rows[] = {{"E_n", en}, {"J_n", jn}, {"R_min_upper", rmin}};
      for (const auto& [name, e] : rows)
        csv.cell(n).cell(beta).cell(name).cell(e.mean).cell(e.std_error).cell(e.samples).cell(std::to_string(e.seed)).end_row();
      summary << "mc: n=" << n << " beta=" << beta << " E_n=" << format_number(en.mean) << " +- "
              << format_number(en.std_error) << '\n';
    }
  }
}

inline void run_asym(const ExperimentConfig& cfg, CsvWriter& csv, std::ostream& summary) {
  const CertifiedValue c = constant_c(cfg.tolerance);
  csv.header({"beta", "C", "rmin_expansion", "d_term", "entropy_rate_term", "secret_term", "channel_mi_expansion",
              "iid_expansion", "case1_rate"});
  for (double beta : beta_list(cfg)) {
    const DeletionParams p(cfg.alpha, beta);
    const ComponentExpansions parts = component_expansions(p);
    csv.cell(beta)
        .cell(c.value)
        .cell(rmin_expansion(p))
        .cell(parts.d_term)
        .cell(parts.entropy_rate_term)
        .cell(parts.secret_term)
        .cell(channel_mi_expansion(p))
        .cell(iid_expansion(beta))
        .cell(case1_rate(p))
        .end_row();
  }
  summary << "asym: C=" << format_number(c.value) << " (" << c.terms << " terms, tail <= "
          << format_number(c.tail_bound) << "), linear coefficient at alpha=" << cfg.alpha << ": "
          << format_number(rate_expansion_terms(cfg.alpha).linear) << '\n';
}

inline void run_bruns(const ExperimentConfig& cfg, CsvWriter& csv, std::ostream& summary) {
  constexpr std::size_t kMaxExtent = 6;
  csv.header({"b", "l", "empirical_pmf", "geometric_pmf", "uncensored_samples"});
  std::vector<std::size_t> bs = cfg.bs;
  std::sort(bs.begin(), bs.end());
  for (std::size_t b : bs) {
    const ExtentHistogram h = extent_histogram(b, cfg.samples, *cfg.seed + b);
    for (std::size_t l = 1; l <= kMaxExtent; ++l)
      csv.cell(b).cell(l).cell(h.pmf(l)).cell(std::ldexp(1.0, -static_cast<int>(l))).cell(h.uncensored()).end_row();
  }
  summary << "bruns: burst-deletion invariance violations over " << cfg.trials << " generated b-runs: "
          << brun_invariance_violations(cfg.trials, *cfg.seed) << '\n';
}

inline void run_typicality(const ExperimentConfig& cfg, CsvWriter& csv, std::ostream& summary) {
  csv.header({"beta", "k", "window", "ones_cap", "violation_rate", "stderr", "samples"});
  std::vector<double> log_beta, log_rate;
  for (double beta : beta_list(cfg)) {
    const DeletionParams p(cfg.alpha, beta);
    const TypicalityConfig t = TypicalityConfig::from(p);
    const auto e = typicality_violation_rate(p, cfg.samples, *cfg.seed, {cfg.workers});
    csv.cell(beta).cell(t.k).cell(t.window).cell(t.ones_cap).cell(e.mean).cell(e.std_error).cell(e.samples).end_row();
    if (e.mean > 0.0) {
      log_beta.push_back(std::log(beta));
      log_rate.push_back(std::log(e.mean));
    }
  }
  if (log_beta.size() >= 2)
    summary << "typicality: log-log slope " << format_number(least_squares_slope(log_beta, log_rate)) << '\n';
}

inline void run_syncdemo(const ExperimentConfig& cfg, CsvWriter& csv, std::ostream& summary) {
  csv.header({"n", "beta", "rate", "message_bits", "trials", "errors", "error_rate", "stderr", "redraws"});
  std::vector<double> rates = cfg.rates;
  std::sort(rates.begin(), rates.end());
  for (std::size_t n : parse_n_list(cfg.n_spec)) {
    if (n > 64) throw UsageError("syncdemo: n must be at most 64");
    for (double beta : beta_list(cfg)) {
      const DeletionParams p(cfg.alpha, beta);
      for (double rate : rates) {
        const SyncStats s = error_rate(p, n, rate, cfg.trials, *cfg.seed, {cfg.workers});
        csv.cell(n).cell(beta).cell(rate).cell(BinCode(n, rate, 0).message_bits()).cell(s.trials).cell(s.errors);
        csv.cell(s.error_rate).cell(s.std_error).cell(s.redraws).end_row();
        summary << "syncdemo: n=" << n << " beta=" << beta << " rate=" << rate << " error "
                << format_number(s.error_rate) << '\n';
      }
    }
  }
}

}  // namespace detail

struct CoefficientRow {
  std::size_t n = 0;
  double beta = 0.0;
  EstimateWithError rate;
  double expansion = 0.0;
  double beta_log_beta = 0.0;
  double g_hat = 0.0;
  double g_std_error = 0.0;
  double target = 0.0;
};

/// Estimates the minimum rate per beta and compares the linear-coefficient
/// diagnostic (R + beta log2 beta) / beta with its predicted value.
inline std::vector<CoefficientRow> coefficient_report(double alpha, std::vector<double> betas, std::size_t n,
                                                std::size_t samples, std::uint64_t seed, const McOptions& opts = {}) {
  std::sort(betas.begin(), betas.end());
  const double target = rate_expansion_terms(alpha).linear;
  std::vector<CoefficientRow> rows;
  for (double beta : betas) {
    const DeletionParams p(alpha, beta);
    CoefficientRow r;
    r.n = n;
    r.beta = beta;
    r.rate = estimate_rmin(p, n, samples, seed, opts).estimate;
    r.expansion = rmin_expansion(p);
    r.beta_log_beta = beta * std::log2(beta);
    r.g_hat = linear_coefficient_diagnostic(r.rate.mean, beta);
    r.g_std_error = r.rate.std_error / beta;
    r.target = target;
    rows.push_back(r);
  }
  return rows;
}

namespace detail {

inline void run_sweep(const ExperimentConfig& cfg, CsvWriter& csv, std::ostream& summary) {
  csv.header({"n", "beta", "R_hat", "stderr", "rmin_expansion", "beta_log2_beta", "g_hat", "g_stderr", "target"});
  for (std::size_t n : parse_n_list(cfg.n_spec)) {
    for (const CoefficientRow& r : coefficient_report(cfg.alpha, beta_list(cfg), n, cfg.samples, *cfg.seed, {cfg.workers})) {
      csv.cell(r.n).cell(r.beta).cell(r.rate.mean).cell(r.rate.std_error).cell(r.expansion).cell(r.beta_log_beta);
      csv.cell(r.g_hat).cell(r.g_std_error).cell(r.target).end_row();
      summary << "sweep: n=" << r.n << " beta=" << r.beta << " g_hat=" << format_number(r.g_hat) << " +- "
              << format_number(r.g_std_error) << " target " << format_number(r.target) << '\n';
    }
  }
}

}  // namespace detail

/// Validates the configuration and writes the command's CSV to `csv`.
/// Throws UsageError or EnumerationCapExceeded.
inline void run(const ExperimentConfig& cfg, std::ostream& csv_out, std::ostream& summary) {
  validate(cfg);
  CsvWriter csv(csv_out);
  switch (cfg.command) {
    case Command::exact: detail::run_exact(cfg, csv, summary); break;
    case Command::mc: detail::run_mc(cfg, csv, summary); break;
    case Command::asym: detail::run_asym(cfg, csv, summary); break;
    case Command::bruns: detail::run_bruns(cfg, csv, summary); break;
    case Command::typicality: detail::run_typicality(cfg, csv, summary); break;
    case Command::syncdemo: detail::run_syncdemo(cfg, csv, summary); break;
    case Command::sweep: detail::run_sweep(cfg, csv, summary); break;
  }
}

inline std::string run_to_string(const ExperimentConfig& cfg) {
  std::ostringstream csv, summary;
  run(cfg, csv, summary);
  return csv.str();
}

}  // namespace burstsync
