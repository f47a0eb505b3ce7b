#include "bmshift/chains.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#include <omp.h>

#include "bmshift/errors.hpp"

namespace bmshift {

std::ostream& operator<<(std::ostream& os, const ChainClass& c) {
  switch (c.tag) {
    case ChainClass::Tag::not_head:
      return os << "NotHead";
    case ChainClass::Tag::a1:
      return os << "A1";
    case ChainClass::Tag::finite:
      return os << "Finite(" << c.length << ")";
    case ChainClass::Tag::infinity_candidate:
      return os << "InfinityCandidate(" << c.length << ")";
    case ChainClass::Tag::residual:
      return os << "Residual";
  }
  return os;
}

std::uint16_t encode(const ChainClass& c) {
  switch (c.tag) {
    case ChainClass::Tag::not_head:
      return code::not_head;
    case ChainClass::Tag::a1:
      return code::a1;
    case ChainClass::Tag::finite:
      return static_cast<std::uint16_t>(c.length);
    case ChainClass::Tag::infinity_candidate:
      return code::infinity;
    case ChainClass::Tag::residual:
      return code::residual;
  }
  return code::not_head;
}

ChainClass decode(std::uint16_t c, std::int64_t horizon) {
  switch (c) {
    case code::not_head:
      return {ChainClass::Tag::not_head, 0};
    case code::a1:
      return {ChainClass::Tag::a1, 1};
    case code::residual:
      return {ChainClass::Tag::residual, 0};
    case code::infinity:
      return {ChainClass::Tag::infinity_candidate, horizon};
    default:
      return ChainClass::finite_of(c);
  }
}

std::int64_t default_horizon(const ParamTuple& p, std::int64_t n) {
  const double steps = std::log(10.0 * static_cast<double>(std::max<std::int64_t>(n, 1))) /
                       std::log(p.ratio_approx());
  return std::min<std::int64_t>(static_cast<std::int64_t>(std::ceil(steps)) + 8,
                                code::max_horizon);
}

ChainClass classify_head(std::int64_t x, const ParamTuple& p, std::int64_t horizon) {
  if (x < 1) throw ValidationError("head candidate must be >= 1");
  if (horizon < 1 || horizon > code::max_horizon) {
    throw ValidationError("horizon must lie in [1, " + std::to_string(code::max_horizon) + "]");
  }
  const auto& source = p.source();
  const auto& target = p.target();
  if (target.contains(x)) return {ChainClass::Tag::not_head, 0};
  auto k = source.index_of(x);
  if (!k) return {ChainClass::Tag::a1, 1};
  const std::int64_t k_limit = target.max_safe_index();
  for (std::int64_t step = 1; step <= horizon; ++step) {
    if (*k > k_limit) return {ChainClass::Tag::infinity_candidate, step - 1};
    const std::int64_t y = target.at(*k);
    if (y < 1) return {ChainClass::Tag::residual, 0};
    k = source.index_of(y);
    if (!k) return ChainClass::finite_of(step + 1);
  }
  return {ChainClass::Tag::infinity_candidate, horizon};
}

std::vector<std::uint16_t> classify_range_serial(const ParamTuple& p, std::int64_t lo,
                                                 std::int64_t hi, std::int64_t horizon) {
  std::vector<std::uint16_t> out;
  if (hi < lo) return out;
  out.resize(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t x = lo; x <= hi; ++x) {
    out[static_cast<std::size_t>(x - lo)] = encode(classify_head(x, p, horizon));
  }
  return out;
}

std::vector<std::uint16_t> classify_range_parallel(const ParamTuple& p, std::int64_t lo,
                                                   std::int64_t hi, std::int64_t horizon) {
  std::vector<std::uint16_t> out;
  if (hi < lo) return out;
  out.resize(static_cast<std::size_t>(hi - lo + 1));
  constexpr std::int64_t block = 1 << 14;
  const std::int64_t blocks = (hi - lo + block) / block;
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < blocks; ++b) {
    try {
      const std::int64_t first = lo + b * block;
      const std::int64_t last = std::min(hi, first + block - 1);
      for (std::int64_t x = first; x <= last; ++x) {
        out[static_cast<std::size_t>(x - lo)] = encode(classify_head(x, p, horizon));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

// Past this value every step of f strictly increases its argument.
double monotone_threshold(const ParamTuple& p) {
  const double gap = p.gamma().to_double() - p.alpha().to_double();
  const double k = std::floor((p.beta().to_double() - p.delta().to_double() + 1.0) / gap) + 2.0;
  return p.alpha().to_double() * std::max(k, 1.0) + std::abs(p.beta().to_double()) + 2.0;
}

}  // namespace

ChainDecomposition decompose(const ParamTuple& p, std::int64_t n, std::int64_t horizon,
                             bool parallel) {
  if (n < 1) throw ValidationError("decomposition window must have n >= 1");
  if (horizon <= 0) horizon = default_horizon(p, n);
  const auto codes = parallel ? classify_range_parallel(p, 1, n, horizon)
                              : classify_range_serial(p, 1, n, horizon);
  ChainDecomposition dec;
  dec.n = n;
  dec.horizon = horizon;
  std::vector<char> covered(static_cast<std::size_t>(n) + 1, 0);
  const double stop_above = std::max(static_cast<double>(n), monotone_threshold(p));
  const auto& source = p.source();
  const auto& target = p.target();

  for (std::int64_t x = 1; x <= n; ++x) {
    const ChainClass cls = decode(codes[static_cast<std::size_t>(x - 1)], horizon);
    if (!cls.is_head()) continue;
    dec.heads.push_back(x);
    dec.classes.push_back(cls);
    dec.members.push_back({x, 0});
    covered[static_cast<std::size_t>(x)] = 1;
    std::int64_t visible = 1;
    if (cls.tag != ChainClass::Tag::a1) {
      const std::int64_t max_steps =
          cls.tag == ChainClass::Tag::finite ? cls.length - 1 : cls.length;
      std::int64_t y = x;
      for (std::int64_t step = 1; step <= max_steps; ++step) {
        const auto k = source.index_of(y);
        if (!k || *k > target.max_safe_index()) break;
        y = target.at(*k);
        if (y <= n) {
          dec.members.push_back({y, step});
          covered[static_cast<std::size_t>(y)] = 1;
          ++visible;
        }
        if (cls.tag == ChainClass::Tag::infinity_candidate &&
            static_cast<double>(y) > stop_above) {
          break;
        }
      }
    }
    dec.offsets.push_back(dec.members.size());
    if (cls.tag == ChainClass::Tag::a1) {
      ++dec.counts[{1, 1}];
    } else if (cls.tag == ChainClass::Tag::finite) {
      ++dec.counts[{cls.length, visible}];
    }
  }
  for (std::int64_t x = 1; x <= n; ++x) {
    if (!covered[static_cast<std::size_t>(x)]) dec.residual.push_back(x);
  }
  return dec;
}

void write_decomposition_csv(std::ostream& os, const ChainDecomposition& dec) {
  struct Row {
    std::int64_t chain = -1;
    std::int64_t position = 0;
  };
  std::vector<Row> rows(static_cast<std::size_t>(dec.n) + 1);
  for (std::size_t c = 0; c < dec.chain_count(); ++c) {
    auto [first, last] = dec.chain(c);
    for (auto it = first; it != last; ++it) {
      rows[static_cast<std::size_t>(it->value)] = {static_cast<std::int64_t>(c), it->position};
    }
  }
  os << "x,class,chain_id,position_in_chain\n";
  for (std::int64_t x = 1; x <= dec.n; ++x) {
    const Row& r = rows[static_cast<std::size_t>(x)];
    os << x << ',';
    if (r.chain < 0) {
      os << "R";
    } else {
      const ChainClass& cls = dec.classes[static_cast<std::size_t>(r.chain)];
      switch (cls.tag) {
        case ChainClass::Tag::a1:
          os << "A1";
          break;
        case ChainClass::Tag::finite:
          os << 'A' << cls.length;
          break;
        default:
          os << "Ainf";
          break;
      }
    }
    os << ',' << r.chain << ',' << r.position << '\n';
  }
}

namespace {

struct WindowTally {
  std::vector<std::int64_t> finite;  // finite[i - 1]
  std::int64_t infinity = 0;
  std::int64_t beyond_k = 0;
};

WindowTally tally(const std::vector<std::uint16_t>& codes, std::int64_t base, std::int64_t n1,
                  std::int64_t n2, std::size_t K) {
  WindowTally t;
  t.finite.assign(K, 0);
  for (std::int64_t x = n1; x <= n2; ++x) {
    const std::uint16_t c = codes[static_cast<std::size_t>(x - base)];
    if (c == code::not_head || c == code::residual) continue;
    if (c == code::infinity) {
      ++t.infinity;
    } else if (c <= K) {
      ++t.finite[c - 1];
    } else {
      ++t.beyond_k;
    }
  }
  return t;
}

}  // namespace

DensityVector empirical_densities(const ParamTuple& p,
                                  const std::vector<std::pair<std::int64_t, std::int64_t>>& windows,
                                  const EmpiricalOptions& options) {
  if (windows.empty()) throw ValidationError("at least one window is required");
  if (options.K < 2) throw ValidationError("K must be at least 2");
  std::int64_t lo = windows.front().first;
  std::int64_t hi = windows.front().second;
  for (const auto& [n1, n2] : windows) {
    if (n1 < 1 || n2 <= n1) throw ValidationError("windows need 1 <= n1 < n2");
    lo = std::min(lo, n1);
    hi = std::max(hi, n2);
  }
  const std::int64_t horizon = options.horizon > 0 ? options.horizon : default_horizon(p, hi);
  const auto codes = options.parallel ? classify_range_parallel(p, lo, hi, horizon)
                                      : classify_range_serial(p, lo, hi, horizon);

  const auto [n1, n2] = windows.back();
  const auto span = n2 - n1;

  // Re-run the survivors with twice the horizon.
  std::int64_t moved = 0;
  const std::int64_t long_horizon = std::min(2 * horizon, code::max_horizon);
  for (std::int64_t x = n1; x <= n2; ++x) {
    if (codes[static_cast<std::size_t>(x - lo)] != code::infinity) continue;
    if (classify_head(x, p, long_horizon).tag != ChainClass::Tag::infinity_candidate) ++moved;
  }
  const double shift = static_cast<double>(moved) / static_cast<double>(span);
  if (shift > options.stability_threshold) {
    throw HorizonTooSmall("infinity-candidate mass moved by " + std::to_string(shift) +
                          " when the horizon was doubled from " + std::to_string(horizon));
  }

  const WindowTally last = tally(codes, lo, n1, n2, options.K);
  DensityVector d;
  d.finite.reserve(options.K);
  for (auto c : last.finite) d.finite.emplace_back(Rational(c, span));
  d.d_inf = Rational(last.infinity, span);
  d.tail_mass = Rational(last.beyond_k, span);

  EmpiricalSource src;
  src.windows = windows;
  src.horizon = horizon;
  src.horizon_shift = shift;
  if (windows.size() >= 2) {
    const auto [m1, m2] = windows[windows.size() - 2];
    const WindowTally prev = tally(codes, lo, m1, m2, options.K);
    const double a = static_cast<double>(m2 - m1);
    const double b = static_cast<double>(span);
    double diag = std::abs(static_cast<double>(prev.infinity) / a -
                           static_cast<double>(last.infinity) / b);
    diag = std::max(diag, std::abs(static_cast<double>(prev.beyond_k) / a -
                                   static_cast<double>(last.beyond_k) / b));
    for (std::size_t i = 0; i < options.K; ++i) {
      diag = std::max(diag, std::abs(static_cast<double>(prev.finite[i]) / a -
                                     static_cast<double>(last.finite[i]) / b));
    }
    src.diagnostic = diag;
  }
  d.source = std::move(src);
  return d;
}

DensityVector empirical_densities(const ParamTuple& p, std::int64_t n,
                                  const EmpiricalOptions& options) {
  if (n < 4) throw ValidationError("empirical window needs n >= 4");
  return empirical_densities(p, {{1, n / 2}, {1, n}}, options);
}

}  // namespace bmshift
