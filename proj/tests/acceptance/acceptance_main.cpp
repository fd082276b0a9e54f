// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Criteria 1 and 5 carry wall-clock budgets (30 s and 60 s).

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qtate/json_io.hpp"
#include "qtate/k3.hpp"

using namespace qtate;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

struct Rand {
  std::mt19937_64 eng;
  explicit Rand(uint64_t seed) : eng(seed) {}
  long range(long lo, long hi) {
    return lo + static_cast<long>(eng() % static_cast<uint64_t>(hi - lo + 1));
  }
  bool coin() { return range(0, 1) == 1; }
};

Scalar rand_scalar(Rand& rng, int min_val, int max_val) {
  std::vector<Scalar::Term> terms;
  long e = rng.range(min_val, max_val);
  const int n = static_cast<int>(rng.range(1, 3));
  for (int i = 0; i < n; ++i) {
    mpq_class c(rng.range(-9, 9), rng.range(1, 9));
    c.canonicalize();
    if (c != 0) terms.emplace_back(e, c);
    e += rng.range(1, 3);
  }
  if (terms.empty()) terms.emplace_back(0, 1);
  return Scalar::from_terms(std::move(terms));
}

TwistedElement rand_element(Rand& rng, const TwistForm& twist, const Scalar& q, Domain domain,
                            long max_deg, int nterms) {
  TwistedBuilder b(TwistedElement(twist, q, domain));
  for (int i = 0; i < nterms; ++i) {
    Exponent e(static_cast<size_t>(twist.dim), 0);
    long budget = max_deg;
    for (auto& v : e) {
      const long m = rng.range(0, budget);
      v = static_cast<int>(domain == Domain::torus && rng.coin() ? -m : m);
      budget -= m;
    }
    b.add(std::move(e), rand_scalar(rng, 0, 3));
  }
  return std::move(b).build();
}

Scalar q_std() { return Scalar::from_terms({{0, 1}, {1, 1}}); }

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- criterion 1: Gauss-norm multiplicativity -------------------------------

Result criterion_gauss_multiplicativity() {
  const auto t0 = std::chrono::steady_clock::now();
  Rand rng(101);
  const Scalar q = q_std();
  size_t twisted_done = 0;
  while (twisted_done < 500) {
    const int d = static_cast<int>(rng.range(1, 3));
    const TwistForm b = rng.coin() ? TwistForm::ordered(d) : TwistForm::skew(d);
    const Domain dom = rng.coin() ? Domain::torus : Domain::polydisc;
    const auto f = rand_element(rng, b, q, dom, 5, 4);
    const auto g = rand_element(rng, b, q, dom, 5, 4);
    if (f.is_zero() || g.is_zero()) continue;
    std::vector<mpq_class> rho;
    for (int i = 0; i < d; ++i) {
      mpq_class v(rng.range(-4, 4), rng.range(1, 3));
      v.canonicalize();
      rho.push_back(std::move(v));
    }
    if ((f * g).gauss_norm(rho) != f.gauss_norm(rho) + g.gauss_norm(rho))
      return {false, "twisted pair " + std::to_string(twisted_done) + " violates lognorm(fg) = lognorm(f)+lognorm(g)"};
    ++twisted_done;
  }
  size_t free_done = 0;
  while (free_done < 200) {
    FreeElement f(2), g(2);
    for (int i = 0; i < 3; ++i) {
      FreeElement::Word wf, wg;
      for (long k = rng.range(0, 4); k > 0; --k) wf.push_back(static_cast<uint8_t>(rng.range(0, 1)));
      for (long k = rng.range(0, 4); k > 0; --k) wg.push_back(static_cast<uint8_t>(rng.range(0, 1)));
      f = f + FreeElement::word(2, wf, rand_scalar(rng, 0, 3));
      g = g + FreeElement::word(2, wg, rand_scalar(rng, 0, 3));
    }
    if (f.is_zero() || g.is_zero()) continue;
    std::vector<mpq_class> r;
    for (int i = 0; i < 2; ++i) {
      mpq_class v(rng.range(-3, 3), rng.range(1, 2));
      v.canonicalize();
      r.push_back(std::move(v));
    }
    if ((f * g).gauss_norm(r) != f.gauss_norm(r) + g.gauss_norm(r))
      return {false, "free pair " + std::to_string(free_done) + " violates multiplicativity"};
    ++free_done;
  }
  const double secs = seconds_since(t0);
  if (secs >= 30.0) return {false, "runtime " + std::to_string(secs) + " s exceeds the 30 s budget"};
  std::ostringstream d;
  d << "500 twisted + 200 free pairs, exact, " << secs << " s";
  return {true, d.str()};
}

// --- criterion 2: shifted polydisc points ------------------------------------

Result criterion_shifted_polydisc() {
  Rand rng(102);
  const Scalar q = q_std();
  size_t done = 0;
  while (done < 200) {
    const int d = static_cast<int>(rng.range(1, 3));
    const TwistForm b = TwistForm::ordered(d);
    const auto f = rand_element(rng, b, q, Domain::polydisc, 4, 3);
    const auto g = rand_element(rng, b, q, Domain::polydisc, 4, 3);
    if (f.is_zero() || g.is_zero()) continue;
    std::vector<Scalar> a;
    std::vector<mpq_class> rho, ambient;
    for (int i = 0; i < d; ++i) {
      const long r = rng.range(-2, 0);
      rho.emplace_back(r);
      ambient.emplace_back(r + rng.range(1, 2));
      const long va = rng.range(-r, -r + 2);
      a.push_back(rng.coin() ? Scalar::t_power(va) * Scalar(rng.range(1, 3)) : Scalar::zero());
    }
    const auto p = spectra::SpectrumPoint::shifted_polydisc(a, rho, ambient);
    const LogNorm nf = spectra::shifted_eval_polydisc(f, p);
    const LogNorm ng = spectra::shifted_eval_polydisc(g, p);
    const LogNorm nfg = spectra::shifted_eval_polydisc(f * g, p);
    if (nfg != nf + ng)
      return {false, "pair " + std::to_string(done) + ": nu(fg) = " + nfg.str() +
                         " but nu(f)+nu(g) = " + (nf + ng).str()};
    ++done;
  }
  return {true, "200 polynomial pairs, exact equality"};
}

// --- criterion 3: shifted torus points ---------------------------------------

Result criterion_shifted_torus() {
  Rand rng(103);
  const Scalar q = q_std();
  const TwistForm b = TwistForm::ordered(2);
  size_t done = 0;
  size_t attempts = 0;
  while (done < 100 && attempts < 2000) {
    ++attempts;
    const auto f = rand_element(rng, b, q, Domain::torus, 3, 3);
    const auto g = rand_element(rng, b, q, Domain::torus, 3, 3);
    if (f.is_zero() || g.is_zero()) continue;
    std::vector<Scalar> a;
    std::vector<mpq_class> rho;
    for (int i = 0; i < 2; ++i) {
      const long va = rng.range(1, 2);
      a.push_back(rng.coin() ? Scalar::t_power(va) : Scalar::zero());
      mpq_class r(rng.range(-2 * va + 1, 2), 2);
      r.canonicalize();
      rho.push_back(std::move(r));
    }
    const long m = 12;
    const auto p = spectra::SpectrumPoint::shifted_torus(a, rho, m);
    const auto ef = spectra::shifted_eval_torus(f, p);
    const auto eg = spectra::shifted_eval_torus(g, p);
    const auto efg = spectra::shifted_eval_torus(f * g, p);
    if (!(ef.certified && eg.certified && efg.certified)) continue;
    if (efg.value != ef.value + eg.value)
      return {false, "certified values violate nu(fg) = nu(f)+nu(g)"};
    const auto ef2 = spectra::shifted_eval_torus(f, p.with_tail_order(2 * m));
    const auto efg2 = spectra::shifted_eval_torus(f * g, p.with_tail_order(2 * m));
    if (!ef2.certified || ef2.value != ef.value || !efg2.certified || efg2.value != efg.value)
      return {false, "certified value changed under doubling the tail order"};
    ++done;
  }
  if (done < 100) return {false, "could not certify 100 Laurent pairs"};
  return {true, "100 certified Laurent pairs, stable under doubling the tail order"};
}

// --- criterion 4: sheaf equivariance -----------------------------------------

Result criterion_equivariance() {
  Rand rng(104);
  const Scalar q = q_std();
  const TwistForm b = TwistForm::ordered(2);
  size_t done = 0;
  while (done < 50) {
    std::vector<std::vector<long>> a{{1, 0}, {0, 1}};
    const std::vector<std::vector<long>> gen_s{{0, -1}, {1, 0}};
    const std::vector<std::vector<long>> gen_t{{1, 1}, {0, 1}};
    for (long k = rng.range(0, 5); k > 0; --k)
      a = sheaf::matmul(a, rng.coin() ? gen_s : gen_t);
    std::vector<Scalar> lam;
    for (int k = 0; k < 2; ++k)
      lam.push_back(Scalar::t_power(rng.range(-1, 2), 256) * Scalar(rng.range(1, 5), 256));
    const sheaf::TransitionData g(a, lam);
    const auto f = rand_element(rng, b, q, Domain::torus, 4, 3);
    if (f.is_zero()) continue;
    std::vector<mpq_class> x;
    for (int k = 0; k < 2; ++k) {
      mpq_class v(rng.range(-6, 6), rng.range(1, 3));
      v.canonicalize();
      x.push_back(std::move(v));
    }
    const auto lhs =
        sheaf::stalk_lognorm(sheaf::transform_section(g, f), sheaf::transform_point(g, x));
    if (lhs != sheaf::stalk_lognorm(f, x))
      return {false, "triple " + std::to_string(done) + " breaks equivariance"};
    ++done;
  }
  return {true, "50 random (g, f, x) triples, exact"};
}

// --- criterion 5: factorization theorem --------------------------------------

Result criterion_factorization() {
  const auto t0 = std::chrono::steady_clock::now();
  auto truncate_img = [](const TwistedElement& img, long order) {
    TwistedBuilder out(TwistedElement(img.twist(), img.q(), Domain::torus));
    for (const auto& [e, c] : img.terms()) {
      long s = 0;
      for (int v : e) s += v;
      if (1 - s <= order) out.add(e, c);
    }
    return std::move(out).build();
  };
  for (const bool quantum : {false, true}) {
    const scatter::ScatterContext ctx(quantum ? q_std() : Scalar::one());
    auto mono2 = [&](int x, int y) {
      return TwistedElement::monomial(ctx.twist, ctx.q, Domain::torus, {x, y}, Scalar::one());
    };
    const auto g0 = scatter::wall_aut(scatter::Covector(1, 0), mono2(-1, 0), ctx, 6);
    const auto gi = scatter::wall_aut(scatter::Covector(0, 1), mono2(0, -1), ctx, 6);
    const auto factors = scatter::factorize(g0, gi, 6);
    if (!(scatter::ordered_compose(factors, ctx, 6) == scatter::compose(g0, gi)))
      return {false, std::string(quantum ? "quantum" : "commutative") +
                         ": recomposition differs from g_inf g_0 mod order 7"};
    if (!quantum) {
      if (factors.size() != 3 || !factors.count(scatter::Slope::zero()) ||
          !factors.count(scatter::Slope::of(1, 1)) ||
          !factors.count(scatter::Slope::infinity())) {
        std::string got;
        for (const auto& [s, g] : factors) got += s.str() + " ";
        return {false, "commutative slopes are {" + got + "}, expected {0, 1, inf}"};
      }
    }
    for (const auto& [s, g] : factors) {
      if (!g.preserves_commutation()) return {false, "a factor breaks q-commutation"};
      if (!g.slope_supported()) return {false, "a factor leaves its slope ray"};
      if (!g.satisfies_bound(scatter::AngleRegion::standard()))
        return {false, "a factor violates the angle coefficient bound"};
    }
    // Refinement to order 8 reproduces the order <= 6 factors.
    const auto g0_8 = scatter::wall_aut(scatter::Covector(1, 0), mono2(-1, 0), ctx, 8);
    const auto gi_8 = scatter::wall_aut(scatter::Covector(0, 1), mono2(0, -1), ctx, 8);
    const auto refined = scatter::factorize(g0_8, gi_8, 8);
    for (const auto& [s, g] : factors) {
      auto it = refined.find(s);
      if (it == refined.end()) return {false, "refinement lost slope " + s.str()};
      if (!(truncate_img(it->second.xi_image(), 6) == g.xi_image()) ||
          !(truncate_img(it->second.eta_image(), 6) == g.eta_image()))
        return {false, "refinement changed the order <= 6 part of slope " + s.str()};
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 60.0) return {false, "runtime " + std::to_string(secs) + " s exceeds the 60 s budget"};
  std::ostringstream d;
  d << "pentagon at q = 1, exact recomposition at q = 1 and q = 1+t, refinement stable, " << secs
    << " s";
  return {true, d.str()};
}

// --- criterion 6: K3 chart homomorphisms -------------------------------------

Result criterion_k3_charts() {
  const auto conv = k3::selected_convention();
  for (const bool commutative : {false, true}) {
    const k3::K3Context ctx(commutative ? Scalar::one() : q_std());
    const k3::Presentation pres{ctx.q, conv.ac_printed, conv.bc_printed};
    for (int i = 1; i <= 3; ++i) {
      const auto res = k3::relation_residuals(k3::make_chart(i, ctx), pres, ctx);
      for (size_t r = 0; r < res.size(); ++r)
        if (!res[r].is_zero())
          return {false, "chart " + std::to_string(i) + " relation " + std::to_string(r + 1) +
                             " residual " + res[r].str() +
                             (commutative ? " at q = 1" : " at q = 1+t")};
    }
  }
  // The oracle-selected set is the unique consistent one.
  if (k3::consistent_conventions(q_std()).size() != 1)
    return {false, "orientation oracle does not isolate a unique convention set"};
  return {true, "all 12 residuals zero at q = 1+t and after the q = 1 specialization"};
}

// --- criterion 7: K3 compatibility -------------------------------------------

Result criterion_k3_compatibility() {
  const k3::K3Context ctx(q_std());
  size_t branch_neg = 0, branch_pos = 0, branch_high = 0;
  for (int i = 1; i <= 3; ++i) {
    const auto report = k3::compatibility_sweep(k3::make_chart(i, ctx), ctx);
    if (!report.passed())
      return {false, "chart " + std::to_string(i) + ": " + report.failures.front()};
    if (report.total < 100)
      return {false, "chart " + std::to_string(i) + " grid has only " +
                         std::to_string(report.total) + " points"};
    branch_neg += report.branch_x_neg;
    branch_pos += report.branch_x_pos;
    branch_high += report.branch_pi2_high;
  }
  if (branch_neg == 0 || branch_pos == 0 || branch_high == 0)
    return {false, "grid misses a branch of j or pi_2"};
  return {true, "exact on 100+ grid points per chart, both j branches and both pi_2 branches"};
}

// --- criterion 8: gluing ------------------------------------------------------

Result criterion_k3_gluing() {
  const k3::K3Context ctx(q_std());
  for (const int overlap : {12, 13}) {
    const auto report = k3::glue_automorphism_check(overlap, 8, ctx);
    if (!report.commutation_ok)
      return {false, "overlap " + std::to_string(overlap) + ": q-commutation broken"};
    if (!report.roundtrip_ok)
      return {false, "coordinate identification roundtrip is not the identity"};
    if (!report.passed())
      return {false, "overlap " + std::to_string(overlap) + ": " + report.failures.front()};
  }
  return {true, "phi preserves q-commutation, roundtrip identity, inverses certified"};
}

// --- criterion 9: CLI determinism ---------------------------------------------

std::string run_capture(const std::string& cmd, int* exit_code) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    *exit_code = -1;
    return out;
  }
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  *exit_code = pclose(pipe);
  return out;
}

std::string slurp(const std::string& path) {
  FILE* f = fopen(path.c_str(), "rb");
  if (!f) return {};
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  fclose(f);
  return out;
}

Result criterion_cli_golden(const std::string& cli, const std::string& golden) {
  if (cli.empty() || golden.empty())
    return {false, "needs --cli <path> and --golden <dir>"};
  const std::vector<std::pair<std::string, std::string>> cases = {
      {" norm gauss --element " + golden + "/inputs/gauss_element.json --rho 0,0",
       golden + "/expected/norm_gauss.json"},
      {" --seed 7 scatter factorize --g0 " + golden + "/inputs/factorize_g0.json --ginf " +
           golden + "/inputs/factorize_ginf.json --order 6",
       golden + "/expected/scatter_factorize.json"},
      {" k3 verify --chart 1 --order 8", golden + "/expected/k3_verify.json"},
  };
  for (const auto& [args, expected_path] : cases) {
    int code1 = 0, code2 = 0;
    const std::string run1 = run_capture(cli + args, &code1);
    const std::string run2 = run_capture(cli + args, &code2);
    if (code1 != 0 || code2 != 0)
      return {false, "CLI exited nonzero for:" + args};
    if (run1 != run2) return {false, "output differs between runs for:" + args};
    const std::string expected = slurp(expected_path);
    if (expected.empty()) return {false, "missing golden file " + expected_path};
    if (run1 != expected) return {false, "output differs from golden file for:" + args};
  }
  return {true, "three CLI invocations byte-identical to golden files"};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli, golden;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
    if (std::string(argv[i]) == "--golden") golden = argv[i + 1];
  }

  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"Gauss-norm multiplicativity (twisted and free)", criterion_gauss_multiplicativity},
      {"shifted polydisc points are multiplicative", criterion_shifted_polydisc},
      {"shifted torus points certify and stay stable", criterion_shifted_torus},
      {"sheaf action norm equivariance", criterion_equivariance},
      {"ordered wall-crossing factorization", criterion_factorization},
      {"K3 chart homomorphisms", criterion_k3_charts},
      {"K3 chart/embedding compatibility", criterion_k3_compatibility},
      {"K3 gluing automorphism", criterion_k3_gluing},
      {"CLI determinism against golden files",
       [&] { return criterion_cli_golden(cli, golden); }},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %zu: %s (%s)\n", r.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), r.detail.c_str());
    if (!r.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
