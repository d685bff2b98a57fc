#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deletion_model.hpp"
#include "numerics.hpp"
#include "parallel.hpp"

namespace burstsync {

/// Thrown when an exhaustive computation is asked for a block length above
/// its enumeration cap.
class EnumerationCapExceeded : public std::length_error {
 public:
  EnumerationCapExceeded(std::size_t n, std::size_t cap)
      : std::length_error("block length " + std::to_string(n) + " exceeds enumeration cap " + std::to_string(cap)),
        n_(n),
        cap_(cap) {}
  std::size_t n() const noexcept { return n_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t n_;
  std::size_t cap_;
};

struct ExactOptions {
  std::size_t cap = 12;
  unsigned workers = 1;
};

/// Exact conditional entropies at one block length, all in bits.
struct ExactQuantities {
  std::size_t n = 0;
  double rate = 0.0;                  // R_n = H(X^n | Y, D_0, D_{n+1}) / n
  double j_rate = 0.0;                // J_n = d + H(Y | X^n, D_0, D_{n+1}) / n
  double secret = 0.0;                // E_n = H(D_1 | D_0, X^n, Y, D_{n+1})
  double h_y_given_x = 0.0;           // H(Y | X^n, D_0, D_{n+1})
  double h_y = 0.0;                   // H(Y | D_0, D_{n+1})
  double expected_length = 0.0;       // E[L_y], by enumeration
};

struct EntropyReport {
  std::size_t n = 0;
  DeletionParams params{0.5, 0.5};
  double rate = 0.0;
  double j_rate = 0.0;
  double secret = 0.0;
  double h_d1_given_d0 = 0.0;
  double h_d1_given_d0_dn1 = 0.0;
  /// |[H(D_1|D_0,D_{n+1}) - E_n] - [n(J_n - J_{n-1}) + J_{n-1} - d]|, n >= 2.
  std::optional<double> identity_residual;
};

/// H(D_1 | D_0) = d h2(alpha) + (1 - d) h2(beta).
inline double h_d1_given_d0(const DeletionParams& p) {
  const double d = stationary_rate(p);
  return d * h2(p.alpha()) + (1.0 - d) * h2(p.beta());
}

/// H(D_1 | D_0, D_{n+1}) from the exact law of (D_0, D_1, D_{n+1}).
inline double h_d1_given_d0_dn1(const DeletionParams& p, std::size_t n) {
  if (n < 1) throw std::invalid_argument("h_d1_given_d0_dn1: n must be at least 1");
  const double d = stationary_rate(p);
  double joint3 = 0.0;
  double joint2 = 0.0;
  for (int d0 = 0; d0 < 2; ++d0) {
    const double p0 = d0 == 1 ? d : 1.0 - d;
    for (int dn = 0; dn < 2; ++dn) {
      double pair = 0.0;
      for (int d1 = 0; d1 < 2; ++d1) {
        const double w = p0 * transition_prob(p, d0, d1) * kernel_power(p, n, d1, dn);
        joint3 += entropy_term(w);
        pair += w;
      }
      joint2 += entropy_term(pair);
    }
  }
  return joint3 - joint2;
}

/// E[L_y] = n (1 - d).
inline double expected_side_info_length(const DeletionParams& p, std::size_t n) {
  return static_cast<double>(n) * (1.0 - stationary_rate(p));
}

namespace detail {

/// Side-information strings are keyed by code = (1 << length) | bits, with
/// y_1 in the highest of the `length` bits. Codes of strings of length <= n
/// fill [1, 2^{n+1}).
struct SubsequenceLaw {
  // slot = code * 4 + last * 2 + d1
  std::vector<double> weight;
  std::vector<std::uint32_t> active;
  std::vector<char> touched;

  explicit SubsequenceLaw(std::size_t n)
      : weight((std::size_t{1} << (n + 1)) * 4, 0.0), touched(std::size_t{1} << (n + 1), 0) {}

  void add(std::uint32_t code, int last, int d1, double w) {
    if (!touched[code]) {
      touched[code] = 1;
      active.push_back(code);
    }
    weight[code * 4 + last * 2 + d1] += w;
  }

  void clear() {
    for (std::uint32_t c : active) {
      touched[c] = 0;
      for (int s = 0; s < 4; ++s) weight[c * 4 + s] = 0.0;
    }
    active.clear();
  }
};

/// Per-chunk partial sums; merged in chunk order.
struct EntropyPartial {
  std::array<KahanSum, 4> h_y_given_x;  // per boundary, already weighted by 2^-n
  std::array<KahanSum, 4> secret;
  std::array<KahanSum, 4> length;
  std::array<std::vector<double>, 4> y_law;  // p(y | B) contributions, indexed by code
};

inline std::size_t code_length(std::uint32_t code) {
  std::size_t len = 0;
  while (code > 1) {
    code >>= 1;
    ++len;
  }
  return len;
}

}  // namespace detail

/// Exhaustive enumeration over all 2^n sources and, per source, a
/// subsequence-level dynamic program that merges deletion patterns producing
/// the same side-information string.
inline ExactQuantities exact_quantities(const DeletionParams& p, std::size_t n, const ExactOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("exact_quantities: n must be at least 1");
  if (n > opts.cap) throw EnumerationCapExceeded(n, opts.cap);
  if (n > 24) throw EnumerationCapExceeded(n, 24);

  const double d = stationary_rate(p);
  const double kernel[2][2] = {{1.0 - p.beta(), p.beta()}, {p.alpha(), 1.0 - p.alpha()}};
  const std::size_t sources = std::size_t{1} << n;
  const std::size_t codes = std::size_t{1} << (n + 1);
  const double source_prob = std::ldexp(1.0, -static_cast<int>(n));
  double boundary_law[2][2];
  for (int d0 = 0; d0 < 2; ++d0)
    for (int dn = 0; dn < 2; ++dn) boundary_law[d0][dn] = kernel_power(p, n + 1, d0, dn);

  const std::size_t chunks = std::min<std::size_t>(sources, 16);
  std::vector<detail::EntropyPartial> partials(chunks);

  parallel_tasks(chunks, opts.workers, [&](std::size_t chunk) {
    auto& part = partials[chunk];
    for (auto& law : part.y_law) law.assign(codes, 0.0);
    detail::SubsequenceLaw cur(n), next(n);
    const std::size_t first = sources * chunk / chunks;
    const std::size_t last = sources * (chunk + 1) / chunks;
    for (std::size_t word = first; word < last; ++word) {
      for (int d0 = 0; d0 < 2; ++d0) {
        cur.clear();
        cur.add(1u, d0, 0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
          const std::uint32_t xi = static_cast<std::uint32_t>((word >> i) & 1u);
          next.clear();
          for (std::uint32_t c : cur.active) {
            for (int s = 0; s < 2; ++s) {
              for (int d1 = 0; d1 < 2; ++d1) {
                const double w = cur.weight[c * 4 + s * 2 + d1];
                if (w == 0.0) continue;
                next.add(c * 2 + xi, 0, i == 0 ? 0 : d1, w * kernel[s][0]);
                next.add(c, 1, i == 0 ? 1 : d1, w * kernel[s][1]);
              }
            }
          }
          std::swap(cur, next);
        }
        for (int dn = 0; dn < 2; ++dn) {
          const int b = d0 * 2 + dn;
          const double norm = boundary_law[d0][dn];
          KahanSum hy, sec, len;
          for (std::uint32_t c : cur.active) {
            double by_d1[2];
            for (int d1 = 0; d1 < 2; ++d1)
              by_d1[d1] = (cur.weight[c * 4 + 0 * 2 + d1] * kernel[0][dn] +
                           cur.weight[c * 4 + 1 * 2 + d1] * kernel[1][dn]) /
                          norm;
            const double py = by_d1[0] + by_d1[1];
            if (py <= 0.0) continue;
            hy += entropy_term(py);
            sec += py * h2(by_d1[1] / py);
            len += py * static_cast<double>(detail::code_length(c));
            part.y_law[b][c] += source_prob * py;
          }
          part.h_y_given_x[b] += source_prob * hy.value();
          part.secret[b] += source_prob * sec.value();
          part.length[b] += source_prob * len.value();
        }
      }
    }
  });

  ExactQuantities q;
  q.n = n;
  KahanSum h_y_given_x, h_y, secret, length;
  for (int b = 0; b < 4; ++b) {
    const double weight = (b / 2 == 1 ? d : 1.0 - d) * boundary_law[b / 2][b % 2];
    KahanSum hyx, sec, len;
    std::vector<double> law(codes, 0.0);
    for (const auto& part : partials) {
      hyx += part.h_y_given_x[b].value();
      sec += part.secret[b].value();
      len += part.length[b].value();
      for (std::size_t c = 0; c < codes; ++c) law[c] += part.y_law[b][c];
    }
    KahanSum hy;
    for (double v : law) hy += entropy_term(v);
    h_y_given_x += weight * hyx.value();
    secret += weight * sec.value();
    length += weight * len.value();
    h_y += weight * hy.value();
  }
  const double nd = static_cast<double>(n);
  q.h_y_given_x = h_y_given_x.value();
  q.h_y = h_y.value();
  q.secret = secret.value();
  q.expected_length = length.value();
  // H(X | Y, B) = H(X | B) + H(Y | X, B) - H(Y | B), with H(X | B) = n.
  q.rate = (nd + q.h_y_given_x - q.h_y) / nd;
  q.j_rate = d + q.h_y_given_x / nd;
  return q;
}

inline double exact_rn(const DeletionParams& p, std::size_t n, const ExactOptions& opts = {}) {
  return exact_quantities(p, n, opts).rate;
}
inline double exact_jn(const DeletionParams& p, std::size_t n, const ExactOptions& opts = {}) {
  return exact_quantities(p, n, opts).j_rate;
}
inline double exact_en(const DeletionParams& p, std::size_t n, const ExactOptions& opts = {}) {
  return exact_quantities(p, n, opts).secret;
}

/// Residual of the exact relation
///   H(D_1|D_0,D_{n+1}) - E_n = n (J_n - J_{n-1}) + J_{n-1} - d
/// given the quantities at n and n - 1.
inline double identity_residual(const DeletionParams& p, const ExactQuantities& at_n, const ExactQuantities& at_prev) {
  const double nd = static_cast<double>(at_n.n);
  const double lhs = h_d1_given_d0_dn1(p, at_n.n) - at_n.secret;
  const double rhs = nd * (at_n.j_rate - at_prev.j_rate) + at_prev.j_rate - stationary_rate(p);
  return std::abs(lhs - rhs);
}

inline double identity_residual(const DeletionParams& p, std::size_t n, const ExactOptions& opts = {}) {
  if (n < 2) throw std::invalid_argument("identity_residual: n must be at least 2");
  return identity_residual(p, exact_quantities(p, n, opts), exact_quantities(p, n - 1, opts));
}

/// Reports for n = first..last, sharing the exact computation between
/// neighbouring block lengths.
inline std::vector<EntropyReport> entropy_reports(const DeletionParams& p, std::size_t first, std::size_t last,
                                                  const ExactOptions& opts = {}) {
  if (first < 1 || last < first) throw std::invalid_argument("entropy_reports: need 1 <= first <= last");
  if (last > opts.cap) throw EnumerationCapExceeded(last, opts.cap);
  std::vector<EntropyReport> out;
  std::optional<ExactQuantities> prev;
  if (first >= 2) prev = exact_quantities(p, first - 1, opts);
  for (std::size_t n = first; n <= last; ++n) {
    const ExactQuantities q = exact_quantities(p, n, opts);
    EntropyReport r{n, p, q.rate, q.j_rate, q.secret, h_d1_given_d0(p), h_d1_given_d0_dn1(p, n), std::nullopt};
    if (prev) r.identity_residual = identity_residual(p, q, *prev);
    out.push_back(r);
    prev = q;
  }
  return out;
}

inline EntropyReport entropy_report(const DeletionParams& p, std::size_t n, const ExactOptions& opts = {}) {
  return entropy_reports(p, n, n, opts).front();
}

/// min over m < n <= n_max of n R_n - m R_m - (n - m) R_{n-m}; superadditivity
/// of {n R_n} means the result is non-negative.
inline double superadditivity_check(const DeletionParams& p, std::size_t n_max, const ExactOptions& opts = {}) {
  if (n_max < 2) throw std::invalid_argument("superadditivity_check: n_max must be at least 2");
  if (n_max > opts.cap) throw EnumerationCapExceeded(n_max, opts.cap);
  std::vector<double> total(n_max + 1, 0.0);  // n R_n
  for (std::size_t n = 1; n <= n_max; ++n) total[n] = static_cast<double>(n) * exact_rn(p, n, opts);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t n = 2; n <= n_max; ++n)
    for (std::size_t m = 1; m < n; ++m) worst = std::min(worst, total[n] - total[m] - total[n - m]);
  return worst;
}

/// |R_n - (d + H(D_1|D_0) - E_n)|; shrinks as n grows.
inline double decomposition_gap(const EntropyReport& r) {
  return std::abs(r.rate - (stationary_rate(r.params) + r.h_d1_given_d0 - r.secret));
}

}  // namespace burstsync
