// Command-line front end: every subcommand reads JSON, writes a JSON report
// to stdout, and exits 0 only when all checks in the invocation pass.
// Exit codes: 1 check failure, 2 malformed input, 3 precondition violation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "qtate/json_io.hpp"
#include "qtate/k3.hpp"

namespace {

using qtate::io::json;

constexpr int exit_check_failed = 1;
constexpr int exit_bad_input = 2;
constexpr int exit_precondition = 3;

json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qtate::io::format_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw qtate::io::format_error(std::string("parse error: ") + e.what());
  }
}

void emit(const json& out) { std::cout << out.dump(2) << "\n"; }

std::vector<mpq_class> parse_rationals(const std::string& csv) {
  std::vector<mpq_class> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      mpq_class v(item);
      v.canonicalize();
      out.push_back(std::move(v));
    } catch (const std::invalid_argument&) {
      throw qtate::io::format_error("cannot parse rational \"" + item + "\"");
    }
  }
  if (out.empty()) throw qtate::io::format_error("empty rational list");
  return out;
}

// Deterministic generator for the property suites; the reduction is spelled
// out so the stream depends only on the seed.
struct Rand {
  std::mt19937_64 eng;
  explicit Rand(uint64_t seed) : eng(seed) {}
  long range(long lo, long hi) {
    return lo + static_cast<long>(eng() % static_cast<uint64_t>(hi - lo + 1));
  }
  bool coin() { return range(0, 1) == 1; }
};

qtate::Scalar rand_scalar(Rand& rng, int min_val, int max_val) {
  std::vector<qtate::Scalar::Term> terms;
  long e = rng.range(min_val, max_val);
  const int n = static_cast<int>(rng.range(1, 3));
  for (int i = 0; i < n; ++i) {
    mpq_class c(rng.range(-9, 9), rng.range(1, 9));
    c.canonicalize();
    if (c != 0) terms.emplace_back(e, c);
    e += rng.range(1, 3);
  }
  if (terms.empty()) terms.emplace_back(0, 1);
  return qtate::Scalar::from_terms(std::move(terms));
}

qtate::TwistedElement rand_element(Rand& rng, const qtate::TwistForm& twist,
                                   const qtate::Scalar& q, qtate::Domain domain, long max_deg,
                                   int nterms) {
  qtate::TwistedBuilder b(qtate::TwistedElement(twist, q, domain));
  for (int i = 0; i < nterms; ++i) {
    qtate::Exponent e(static_cast<size_t>(twist.dim), 0);
    long budget = max_deg;
    for (auto& v : e) {
      const long m = rng.range(0, budget);
      v = static_cast<int>(domain == qtate::Domain::torus && rng.coin() ? -m : m);
      budget -= m;
    }
    b.add(std::move(e), rand_scalar(rng, 0, 3));
  }
  return std::move(b).build();
}

json report_json(size_t total, const std::vector<std::string>& failures) {
  return json{{"total", total}, {"failures", failures}, {"passed", failures.empty()}};
}

int run(int argc, char** argv) {
  CLI::App app{"exact arithmetic for q-deformed Tate algebras and quantum tori"};
  app.require_subcommand(1);
  app.fallthrough();
  uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for randomized property suites");

  int exit_code = 0;

  // ---- norm ----------------------------------------------------------
  auto* norm = app.add_subcommand("norm", "Gauss norms of twisted and free elements");
  norm->require_subcommand(1);
  std::string norm_element, norm_rho;
  auto* norm_gauss = norm->add_subcommand("gauss", "max-over-terms norm at given log-radii");
  norm_gauss->add_option("--element", norm_element, "element JSON file")->required();
  norm_gauss->add_option("--rho", norm_rho, "comma-separated log-radii")->required();
  norm_gauss->callback([&] {
    const auto f = qtate::io::element_from_json(load(norm_element));
    const auto rho = parse_rationals(norm_rho);
    emit(json{{"lognorm", f.gauss_norm(rho).str()}});
  });
  std::string free_element, free_radii;
  auto* norm_free = norm->add_subcommand("free-gauss", "path-monomial norm on the free algebra");
  norm_free->add_option("--element", free_element, "free element JSON file")->required();
  norm_free->add_option("--radii", free_radii, "comma-separated log-radii per letter")->required();
  norm_free->callback([&] {
    const auto f = qtate::io::free_element_from_json(load(free_element));
    const auto r = parse_rationals(free_radii);
    emit(json{{"lognorm", f.gauss_norm(r).str()}});
  });

  // ---- seminorm ------------------------------------------------------
  auto* seminorm = app.add_subcommand("seminorm", "Berkovich point evaluation and checks");
  seminorm->require_subcommand(1);
  std::string sem_point, sem_element;
  auto* sem_eval = seminorm->add_subcommand("eval", "evaluate a point on an element");
  sem_eval->add_option("--point", sem_point, "point JSON file")->required();
  sem_eval->add_option("--element", sem_element, "element JSON file")->required();
  sem_eval->callback([&] {
    const auto p = qtate::io::point_from_json(load(sem_point));
    const auto f = qtate::io::element_from_json(load(sem_element));
    if (p.kind() == qtate::spectra::SpectrumPoint::Kind::shifted_torus) {
      const auto e = qtate::spectra::shifted_eval_torus(f, p);
      emit(json{{"lognorm", e.value.str()},
                {"tail_bound", e.tail_bound.str()},
                {"certified", e.certified}});
      if (!e.certified) exit_code = exit_check_failed;
    } else {
      emit(json{{"lognorm", qtate::spectra::point_eval(f, p).str()}});
    }
  });
  std::string chk_point;
  long chk_pairs = 50;
  long chk_degree = 3;
  auto* sem_check = seminorm->add_subcommand("check", "multiplicativity on random pairs");
  sem_check->add_option("--point", chk_point, "point JSON file")->required();
  sem_check->add_option("--pairs", chk_pairs, "number of random pairs");
  sem_check->add_option("--degree", chk_degree, "degree bound for the samples");
  sem_check->callback([&] {
    const auto p = qtate::io::point_from_json(load(chk_point));
    Rand rng(seed);
    const qtate::Scalar q = qtate::Scalar::from_terms({{0, 1}, {1, 1}});
    const qtate::TwistForm b = qtate::TwistForm::ordered(p.dim());
    const qtate::Domain dom = p.kind() == qtate::spectra::SpectrumPoint::Kind::shifted_polydisc
                                  ? qtate::Domain::polydisc
                                  : qtate::Domain::torus;
    std::vector<std::pair<qtate::TwistedElement, qtate::TwistedElement>> pairs;
    for (long i = 0; i < chk_pairs; ++i)
      pairs.emplace_back(rand_element(rng, b, q, dom, chk_degree, 3),
                         rand_element(rng, b, q, dom, chk_degree, 3));
    const auto report = qtate::spectra::check_point_multiplicative(p, pairs);
    emit(report_json(report.total, report.failures));
    if (!report.passed()) exit_code = exit_check_failed;
  });

  // ---- sheaf ---------------------------------------------------------
  auto* sheaf_cmd = app.add_subcommand("sheaf", "canonical-sheaf sections and the torsor action");
  sheaf_cmd->require_subcommand(1);
  std::string sh_g, sh_element, sh_point, sh_polytope;
  auto* sh_transform = sheaf_cmd->add_subcommand("transform", "act on a section (and a point)");
  sh_transform->add_option("--g", sh_g, "transition data JSON file")->required();
  sh_transform->add_option("--element", sh_element, "section JSON file")->required();
  sh_transform->add_option("--point", sh_point, "comma-separated base point");
  sh_transform->callback([&] {
    const auto g = qtate::io::transition_from_json(load(sh_g));
    const auto f = qtate::io::element_from_json(load(sh_element));
    json out{{"element", qtate::io::element_to_json(qtate::sheaf::transform_section(g, f))}};
    if (!sh_point.empty()) {
      const auto x = parse_rationals(sh_point);
      out["point"] = qtate::io::rationals_to_json(qtate::sheaf::transform_point(g, x));
    }
    emit(out);
  });
  auto* sh_conv = sheaf_cmd->add_subcommand("converges", "ray convergence predicate");
  sh_conv->add_option("--element", sh_element, "section JSON file")->required();
  sh_conv->add_option("--polytope", sh_polytope, "polytope JSON file")->required();
  sh_conv->callback([&] {
    const auto f = qtate::io::element_from_json(load(sh_element));
    const auto u = qtate::io::polytope_from_json(load(sh_polytope));
    const bool ok = qtate::sheaf::converges_on(f, u);
    emit(json{{"converges", ok}});
    if (!ok) exit_code = exit_check_failed;
  });
  long sh_count = 50;
  auto* sh_equiv = sheaf_cmd->add_subcommand("equivariance", "norm equivariance property run");
  sh_equiv->add_option("--count", sh_count, "number of random triples");
  sh_equiv->callback([&] {
    Rand rng(seed);
    const qtate::Scalar q = qtate::Scalar::from_terms({{0, 1}, {1, 1}});
    const qtate::TwistForm b = qtate::TwistForm::ordered(2);
    std::vector<std::string> failures;
    size_t total = 0;
    for (long i = 0; i < sh_count; ++i) {
      std::vector<std::vector<long>> a{{1, 0}, {0, 1}};
      const std::vector<std::vector<long>> gen_s{{0, -1}, {1, 0}};
      const std::vector<std::vector<long>> gen_t{{1, 1}, {0, 1}};
      for (long k = rng.range(0, 4); k > 0; --k)
        a = qtate::sheaf::matmul(a, rng.coin() ? gen_s : gen_t);
      std::vector<qtate::Scalar> lam;
      for (int k = 0; k < 2; ++k)
        lam.push_back(qtate::Scalar::t_power(rng.range(0, 2), 128) *
                      qtate::Scalar(rng.range(1, 5), 128));
      const qtate::sheaf::TransitionData g(a, lam);
      const auto f = rand_element(rng, b, q, qtate::Domain::torus, 4, 3);
      if (f.is_zero()) continue;
      std::vector<mpq_class> x;
      for (int k = 0; k < 2; ++k) {
        mpq_class v(rng.range(-6, 6), rng.range(1, 3));
        v.canonicalize();
        x.push_back(std::move(v));
      }
      ++total;
      const auto lhs = qtate::sheaf::stalk_lognorm(qtate::sheaf::transform_section(g, f),
                                                   qtate::sheaf::transform_point(g, x));
      const auto rhs = qtate::sheaf::stalk_lognorm(f, x);
      if (lhs != rhs)
        failures.push_back("triple " + std::to_string(i) + ": " + lhs.str() +
                           " != " + rhs.str());
    }
    emit(report_json(total, failures));
    if (!failures.empty()) exit_code = exit_check_failed;
  });

  // ---- scatter -------------------------------------------------------
  auto* scatter_cmd = app.add_subcommand("scatter", "wall-crossing factorization and charts");
  scatter_cmd->require_subcommand(1);
  std::string sc_g0, sc_ginf, sc_diagram;
  long sc_order = 6;
  auto* sc_fact = scatter_cmd->add_subcommand("factorize", "ordered slope factorization");
  sc_fact->add_option("--g0", sc_g0, "slope-0 wall JSON file")->required();
  sc_fact->add_option("--ginf", sc_ginf, "slope-infinity wall JSON file")->required();
  sc_fact->add_option("--order", sc_order, "truncation order");
  sc_fact->callback([&] {
    const auto g0 = qtate::io::wall_from_json(load(sc_g0));
    const auto gi = qtate::io::wall_from_json(load(sc_ginf));
    const auto factors = qtate::scatter::factorize(g0, gi, sc_order);
    json flist = json::array();
    for (const auto& [s, g] : factors)
      flist.push_back(json{{"slope", s.str()}, {"automorphism", qtate::io::wall_to_json(g)}});
    const auto recomposed = qtate::scatter::ordered_compose(factors, g0.context(), sc_order);
    const auto target = qtate::scatter::compose(g0, gi);
    const auto rx = recomposed.xi_image() - target.xi_image();
    const auto ry = recomposed.eta_image() - target.eta_image();
    const bool exact = rx.is_zero() && ry.is_zero();
    emit(json{{"factors", std::move(flist)},
              {"residual", exact ? "0" : rx.str() + " ; " + ry.str()}});
    if (!exact) exit_code = exit_check_failed;
  });
  auto* sc_chart = scatter_cmd->add_subcommand("chart", "finite-order scattering of a line set");
  sc_chart->add_option("--diagram", sc_diagram, "initial diagram JSON file")->required();
  sc_chart->add_option("--order", sc_order, "truncation order");
  sc_chart->callback([&] {
    const auto initial = qtate::io::diagram_from_json(load(sc_diagram));
    const auto result = qtate::scatter::scatter_chart(initial, sc_order);
    std::vector<std::string> why;
    const bool consistent = qtate::scatter::chart_consistent(result, sc_order, &why);
    json out = qtate::io::diagram_to_json(result);
    out["collisions"] = result.collisions.size();
    out["consistent"] = consistent;
    out["failures"] = why;
    emit(out);
    if (!consistent) exit_code = exit_check_failed;
  });

  // ---- k3 ------------------------------------------------------------
  auto* k3_cmd = app.add_subcommand("k3", "quantum K3 local model checks");
  k3_cmd->require_subcommand(1);
  int k3_chart = 1;
  long k3_order = 8;
  int k3_grid = 8;
  int k3_overlap = 12;
  auto* k3_verify = k3_cmd->add_subcommand("verify", "chart homomorphism residuals");
  k3_verify->add_option("--chart", k3_chart, "chart index 1..3")->required();
  k3_verify->add_option("--order", k3_order, "truncation order for the residual algebra");
  k3_verify->callback([&] {
    const qtate::k3::K3Context ctx(qtate::Scalar::from_terms({{0, 1}, {1, 1}}));
    const auto conv = qtate::k3::selected_convention();
    const qtate::k3::Presentation pres{ctx.q, conv.ac_printed, conv.bc_printed};
    const auto res = qtate::k3::relation_residuals(qtate::k3::make_chart(k3_chart, ctx), pres,
                                                   ctx, k3_order);
    json out = json::array();
    bool all_zero = true;
    for (const auto& r : res) {
      out.push_back(r.str());
      all_zero = all_zero && r.is_zero();
    }
    emit(json{{"residuals", std::move(out)}});
    if (!all_zero) exit_code = exit_check_failed;
  });
  auto* k3_sweep = k3_cmd->add_subcommand("sweep", "j o pi = f o g compatibility grid");
  k3_sweep->add_option("--chart", k3_chart, "chart index 1..3")->required();
  k3_sweep->add_option("--grid", k3_grid, "grid density");
  k3_sweep->callback([&] {
    const qtate::k3::K3Context ctx(qtate::Scalar::from_terms({{0, 1}, {1, 1}}));
    const auto report =
        qtate::k3::compatibility_sweep(qtate::k3::make_chart(k3_chart, ctx), ctx, k3_grid);
    json out = report_json(report.total, report.failures);
    out["branch_x_neg"] = report.branch_x_neg;
    out["branch_x_pos"] = report.branch_x_pos;
    out["branch_pi2_high"] = report.branch_pi2_high;
    emit(out);
    if (!report.passed()) exit_code = exit_check_failed;
  });
  auto* k3_glue = k3_cmd->add_subcommand("glue", "gluing automorphism checks on an overlap");
  k3_glue->add_option("--overlap", k3_overlap, "12 for U1/U2, 13 for U1/U3")->required();
  k3_glue->add_option("--order", k3_order, "series order for invertibility certificates");
  k3_glue->callback([&] {
    const qtate::k3::K3Context ctx(qtate::Scalar::from_terms({{0, 1}, {1, 1}}));
    const auto report = qtate::k3::glue_automorphism_check(k3_overlap, k3_order, ctx);
    emit(json{{"commutation_ok", report.commutation_ok},
              {"roundtrip_ok", report.roundtrip_ok},
              {"invertibility_samples", report.invertibility_samples},
              {"failures", report.failures},
              {"passed", report.passed()}});
    if (!report.passed()) exit_code = exit_check_failed;
  });
  auto* k3_conv = k3_cmd->add_subcommand("conventions", "run the orientation oracle");
  k3_conv->callback([&] {
    const auto winners =
        qtate::k3::consistent_conventions(qtate::Scalar::from_terms({{0, 1}, {1, 1}}));
    json out = json::array();
    for (const auto& w : winners)
      out.push_back(json{{"xi_eta_q", w.xi_eta_q},
                         {"ac_printed", w.ac_printed},
                         {"bc_printed", w.bc_printed}});
    emit(json{{"consistent", std::move(out)}});
    if (winners.size() != 1) exit_code = exit_check_failed;
  });

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const qtate::io::format_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_bad_input;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_bad_input;
  } catch (const qtate::precondition_error& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return exit_precondition;
  }
}
