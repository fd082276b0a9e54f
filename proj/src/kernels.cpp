#include "qtate/kernels.hpp"

#include <omp.h>

#include <map>

namespace qtate::kernels {

namespace {

// Per-call q-power cache; negative exponents go through one shared inverse.
class QPow {
 public:
  explicit QPow(const Scalar& q) : q_(q) {}
  const Scalar& operator()(long k) {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    Scalar v = q_.pow(k);
    return cache_.emplace(k, std::move(v)).first->second;
  }

 private:
  const Scalar& q_;
  std::map<long, Scalar> cache_;
};

inline bool keep_exponent(const Exponent& e, const MulOptions& opts) {
  if (opts.degree_bound && degree_abs(e) > *opts.degree_bound) return false;
  if (opts.min_exp_sum) {
    long s = 0;
    for (int v : e) s += v;
    if (s < *opts.min_exp_sum) return false;
  }
  return true;
}

void accumulate(TwistedElement::Terms& acc, Exponent e, Scalar c) {
  auto it = acc.find(e);
  if (it == acc.end()) {
    acc.emplace(std::move(e), std::move(c));
  } else {
    it->second = it->second + c;
  }
}

void prune_zeros(TwistedElement::Terms& acc) {
  for (auto it = acc.begin(); it != acc.end();) {
    if (it->second.is_zero())
      it = acc.erase(it);
    else
      ++it;
  }
}

TwistedElement::Terms convolve_range(const std::vector<const TwistedElement::Terms::value_type*>& f,
                                     size_t lo, size_t hi, const TwistedElement::Terms& g,
                                     const TwistForm& twist, QPow& qpow, const MulOptions& opts) {
  TwistedElement::Terms acc;
  Exponent e(static_cast<size_t>(twist.dim));
  for (size_t i = lo; i < hi; ++i) {
    const auto& [la, ca] = *f[i];
    for (const auto& [mu, cb] : g) {
      for (size_t k = 0; k < e.size(); ++k) e[k] = la[k] + mu[k];
      if (!keep_exponent(e, opts)) continue;
      const long w = twist.apply(la, mu);
      accumulate(acc, e, ca * cb * qpow(w));
    }
  }
  return acc;
}

}  // namespace

TwistedElement::Terms multiply_serial(const TwistedElement::Terms& f,
                                      const TwistedElement::Terms& g, const TwistForm& twist,
                                      const Scalar& q, const MulOptions& opts) {
  std::vector<const TwistedElement::Terms::value_type*> fv;
  fv.reserve(f.size());
  for (const auto& t : f) fv.push_back(&t);
  QPow qpow(q);
  auto acc = convolve_range(fv, 0, fv.size(), g, twist, qpow, opts);
  prune_zeros(acc);
  return acc;
}

TwistedElement::Terms multiply_parallel(const TwistedElement::Terms& f,
                                        const TwistedElement::Terms& g, const TwistForm& twist,
                                        const Scalar& q, const MulOptions& opts) {
  std::vector<const TwistedElement::Terms::value_type*> fv;
  fv.reserve(f.size());
  for (const auto& t : f) fv.push_back(&t);

  const int nthreads = omp_get_max_threads();
  std::vector<TwistedElement::Terms> partial(static_cast<size_t>(nthreads));

#pragma omp parallel num_threads(nthreads)
  {
    const int tid = omp_get_thread_num();
    const size_t lo = fv.size() * static_cast<size_t>(tid) / static_cast<size_t>(nthreads);
    const size_t hi = fv.size() * static_cast<size_t>(tid + 1) / static_cast<size_t>(nthreads);
    QPow qpow(q);
    partial[static_cast<size_t>(tid)] = convolve_range(fv, lo, hi, g, twist, qpow, opts);
  }

  TwistedElement::Terms acc = std::move(partial[0]);
  for (size_t t = 1; t < partial.size(); ++t) {
    for (auto& [e, c] : partial[t]) accumulate(acc, e, std::move(c));
  }
  prune_zeros(acc);
  return acc;
}

LogNorm max_norm_serial(const TwistedElement::Terms& f, std::span<const mpq_class> rho) {
  LogNorm best = LogNorm::bottom();
  for (const auto& [e, c] : f) {
    mpq_class dot(0);
    for (size_t i = 0; i < rho.size(); ++i) dot += e[i] * rho[i];
    best = max(best, c.lognorm() + LogNorm(dot));
  }
  return best;
}

LogNorm max_norm_parallel(const TwistedElement::Terms& f, std::span<const mpq_class> rho) {
  std::vector<const TwistedElement::Terms::value_type*> fv;
  fv.reserve(f.size());
  for (const auto& t : f) fv.push_back(&t);

  const int nthreads = omp_get_max_threads();
  std::vector<LogNorm> partial(static_cast<size_t>(nthreads), LogNorm::bottom());

#pragma omp parallel num_threads(nthreads)
  {
    const int tid = omp_get_thread_num();
    LogNorm local = LogNorm::bottom();
#pragma omp for schedule(static)
    for (long i = 0; i < static_cast<long>(fv.size()); ++i) {
      const auto& [e, c] = *fv[static_cast<size_t>(i)];
      mpq_class dot(0);
      for (size_t k = 0; k < rho.size(); ++k) dot += e[k] * rho[k];
      local = max(local, c.lognorm() + LogNorm(dot));
    }
    partial[static_cast<size_t>(tid)] = local;
  }

  LogNorm best = LogNorm::bottom();
  for (const auto& p : partial) best = max(best, p);
  return best;
}

}  // namespace qtate::kernels
