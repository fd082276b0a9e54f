#include "qtate/sheaf.hpp"

#include "qtate/spectra.hpp"

namespace qtate::sheaf {

namespace {

using Mat = std::vector<std::vector<long>>;

void require_square(const Mat& m, const char* who) {
  for (const auto& row : m)
    if (row.size() != m.size()) throw precondition_error(std::string(who) + ": matrix not square");
}

}  // namespace

long det(const Mat& m) {
  const size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  long acc = 0;
  for (size_t j = 0; j < n; ++j) {
    Mat minor;
    for (size_t r = 1; r < n; ++r) {
      std::vector<long> row;
      for (size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    const long cof = det(minor);
    acc += (j % 2 ? -1 : 1) * m[0][j] * cof;
  }
  return acc;
}

Mat transpose(const Mat& m) {
  const size_t n = m.size();
  Mat t(n, std::vector<long>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) t[j][i] = m[i][j];
  return t;
}

Mat matmul(const Mat& a, const Mat& b) {
  const size_t n = a.size();
  Mat c(n, std::vector<long>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k)
      for (size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Mat unimodular_inverse(const Mat& m) {
  const size_t n = m.size();
  const long d = det(m);
  if (d != 1 && d != -1) throw precondition_error("matrix inverse: determinant must be +-1");
  Mat adj(n, std::vector<long>(n, 0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      Mat minor;
      for (size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        std::vector<long> row;
        for (size_t c = 0; c < n; ++c)
          if (c != j) row.push_back(m[r][c]);
        minor.push_back(std::move(row));
      }
      const long cof = ((i + j) % 2 ? -1 : 1) * det(minor);
      adj[j][i] = d * cof;  // adjugate / det with det = +-1
    }
  }
  return adj;
}

Polytope::Polytope(int d, std::vector<std::vector<mpq_class>> verts,
                   std::vector<std::vector<long>> rays_in)
    : dim(d), vertices(std::move(verts)), rays(std::move(rays_in)) {
  if (vertices.empty()) throw precondition_error("Polytope: vertex list must be nonempty");
  for (auto& v : vertices) {
    if (static_cast<int>(v.size()) != dim)
      throw precondition_error("Polytope: vertex dimension mismatch");
    for (auto& c : v) c.canonicalize();
  }
  for (const auto& r : rays)
    if (static_cast<int>(r.size()) != dim)
      throw precondition_error("Polytope: ray dimension mismatch");
}

TransitionData::TransitionData(Mat a, std::vector<Scalar> l)
    : A(std::move(a)), lambda(std::move(l)) {
  require_square(A, "TransitionData");
  if (lambda.size() != A.size())
    throw precondition_error("TransitionData: lambda dimension mismatch");
  if (det(A) != 1) throw precondition_error("TransitionData: matrix must lie in SL(n,Z)");
  for (const auto& s : lambda)
    if (s.is_zero()) throw precondition_error("TransitionData: lambda entries must be nonzero");
}

std::vector<long> TransitionData::val_vector() const {
  std::vector<long> v;
  v.reserve(lambda.size());
  for (const auto& s : lambda) v.push_back(*s.val());
  return v;
}

Mat exponent_matrix(const TransitionData& g, ExponentAction action) {
  return action == ExponentAction::matrix ? g.A : transpose(unimodular_inverse(g.A));
}

TwistedElement transform_section(const TransitionData& g, const TwistedElement& f,
                                 ExponentAction action) {
  if (g.dim() != f.dim()) throw precondition_error("transform_section: dimension mismatch");
  if (f.domain() != Domain::torus)
    throw precondition_error("transform_section: sections live on the torus");
  const Mat m = exponent_matrix(g, action);

  // Quadratic q-correction making the monomial map multiplicative: S(I,J) =
  // B(MI, MJ) - B(I,J) must be symmetric (the commutation form is preserved).
  const size_t n = m.size();
  Mat bm(n, std::vector<long>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) bm[i][j] = f.twist().entries[i][j];
  const Mat s_full = matmul(matmul(transpose(m), bm), m);
  Mat s(n, std::vector<long>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) s[i][j] = s_full[i][j] - bm[i][j];
  if (s != transpose(s))
    throw precondition_error(
        "transform_section: linear map does not preserve the commutation form");

  TwistedBuilder out(TwistedElement(f.twist(), f.q(), Domain::torus, f.truncation()));
  for (const auto& [e, c] : f.terms()) {
    Exponent k(n, 0);
    for (size_t i = 0; i < n; ++i) {
      long acc = 0;
      for (size_t j = 0; j < n; ++j) acc += m[i][j] * e[j];
      k[i] = static_cast<int>(acc);
    }
    Scalar coeff = c;
    for (size_t i = 0; i < n; ++i)
      if (k[i] != 0) coeff = coeff * g.lambda[i].pow(k[i]);
    long corr = 0;
    for (size_t i = 0; i < n; ++i) {
      corr += s[i][i] * (static_cast<long>(e[i]) * (e[i] - 1)) / 2;
      for (size_t j = i + 1; j < n; ++j) corr += s[i][j] * static_cast<long>(e[i]) * e[j];
    }
    if (corr != 0) coeff = coeff * f.q().pow(corr);
    out.add(std::move(k), coeff);
  }
  return std::move(out).build();
}

std::vector<mpq_class> transform_point(const TransitionData& g, std::span<const mpq_class> x,
                                       ExponentAction action) {
  if (static_cast<size_t>(g.dim()) != x.size())
    throw precondition_error("transform_point: dimension mismatch");
  const Mat l = transpose(unimodular_inverse(exponent_matrix(g, action)));
  const auto vals = g.val_vector();
  std::vector<mpq_class> y(x.size(), mpq_class(0));
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = 0; j < x.size(); ++j) y[i] += l[i][j] * x[j];
    y[i] += vals[i];
    y[i].canonicalize();
  }
  return y;
}

Polytope transform_polytope(const TransitionData& g, const Polytope& u, ExponentAction action) {
  std::vector<std::vector<mpq_class>> verts;
  verts.reserve(u.vertices.size());
  for (const auto& v : u.vertices) verts.push_back(transform_point(g, v, action));
  const Mat l = transpose(unimodular_inverse(exponent_matrix(g, action)));
  std::vector<std::vector<long>> rays;
  rays.reserve(u.rays.size());
  for (const auto& r : u.rays) {
    std::vector<long> out(r.size(), 0);
    for (size_t i = 0; i < r.size(); ++i)
      for (size_t j = 0; j < r.size(); ++j) out[i] += l[i][j] * r[j];
    rays.push_back(std::move(out));
  }
  return Polytope(u.dim, std::move(verts), std::move(rays));
}

namespace {

// Given desired generator-image coefficients c_i (for exponent matrix m),
// solves lambda_j with prod_j lambda_j^{(m e_i)_j} = c_i for every i.
std::vector<Scalar> solve_lambda(const std::vector<Scalar>& c, const Mat& m) {
  const Mat minv = unimodular_inverse(m);
  const size_t n = m.size();
  std::vector<Scalar> lam;
  lam.reserve(n);
  for (size_t j = 0; j < n; ++j) {
    Scalar v = Scalar::one(c[0].precision());
    for (size_t i = 0; i < n; ++i)
      if (minv[i][j] != 0) v = v * c[i].pow(minv[i][j]);
    lam.push_back(std::move(v));
  }
  return lam;
}

std::vector<Scalar> generator_image_coeffs(const TransitionData& g1, const TransitionData* g2,
                                           const TwistForm& twist, const Scalar& q,
                                           ExponentAction action) {
  const size_t n = static_cast<size_t>(g1.dim());
  std::vector<Scalar> c;
  c.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    Exponent e(n, 0);
    e[i] = 1;
    auto zi = TwistedElement::monomial(twist, q, Domain::torus, e, Scalar::one());
    if (g2) zi = transform_section(*g2, zi, action);
    const auto image = transform_section(g1, zi, action);
    if (image.terms().size() != 1)
      throw precondition_error("compose: generator image is not a monomial");
    c.push_back(image.terms().begin()->second);
  }
  return c;
}

}  // namespace

TransitionData compose(const TransitionData& g1, const TransitionData& g2,
                       const TwistForm& twist, const Scalar& q, ExponentAction action) {
  if (g1.dim() != g2.dim()) throw precondition_error("compose: dimension mismatch");
  // The section transform is the substitution homomorphism fixed by its
  // generator images, so the composite's lambda is solved from the generator
  // image coefficients; this absorbs the central q-powers that a bare
  // product formula misses.
  const Mat ac = matmul(g1.A, g2.A);
  const auto c = generator_image_coeffs(g1, &g2, twist, q, action);
  const Mat mc = action == ExponentAction::matrix ? ac : transpose(unimodular_inverse(ac));
  return TransitionData(ac, solve_lambda(c, mc));
}

TransitionData inverse(const TransitionData& g, const TwistForm& twist, const Scalar& q,
                       ExponentAction action) {
  const Mat m = exponent_matrix(g, action);
  const size_t n = m.size();
  std::vector<Scalar> lam;
  lam.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    Scalar v = Scalar::one(g.lambda[0].precision());
    for (size_t j = 0; j < n; ++j)
      if (m[j][k] != 0) v = v * g.lambda[j].pow(-m[j][k]);
    lam.push_back(std::move(v));
  }
  TransitionData base(unimodular_inverse(g.A), std::move(lam));
  // Fix the central q-powers: the composite g o base has identity matrix, so
  // its generator coefficients must all become 1.
  const auto c = generator_image_coeffs(g, &base, twist, q, action);
  const Mat mb = exponent_matrix(base, action);
  const Mat mb_inv = unimodular_inverse(mb);
  std::vector<Scalar> corrected;
  corrected.reserve(n);
  for (size_t j = 0; j < n; ++j) {
    Scalar v = base.lambda[j];
    for (size_t i = 0; i < n; ++i)
      if (mb_inv[i][j] != 0) v = v * c[i].pow(-mb_inv[i][j]);
    corrected.push_back(std::move(v));
  }
  return TransitionData(base.A, std::move(corrected));
}

bool converges_on(const TwistedElement& f, const Polytope& u) {
  if (f.dim() != u.dim) throw precondition_error("converges_on: dimension mismatch");
  for (const auto& [e, c] : f.terms()) {
    for (const auto& ray : u.rays) {
      long dot = 0;
      for (size_t i = 0; i < ray.size(); ++i) dot += static_cast<long>(e[i]) * ray[i];
      if (dot > 0) return false;
    }
  }
  return true;
}

LogNorm stalk_lognorm(const TwistedElement& f, std::span<const mpq_class> x) {
  return spectra::monomial_eval(f, x);
}

SheafSection make_section(TwistedElement element, Polytope domain) {
  if (!converges_on(element, domain))
    throw precondition_error("SheafSection: element does not converge on the declared domain");
  return SheafSection{std::move(element), std::move(domain)};
}

}  // namespace qtate::sheaf
