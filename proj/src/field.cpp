#include "symflow/field.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

#include "symflow/parallel.hpp"

namespace symflow {

namespace {
constexpr int kMaxDegree = 16;
constexpr double kPruneRel = 1e-14;

void check_degree(int deg) {
  if (deg > kMaxDegree)
    throw std::runtime_error("polynomial degree " + std::to_string(deg) + " exceeds cap " +
                             std::to_string(kMaxDegree));
}
}  // namespace

int thread_count() {
  static const int n = [] {
    if (const char* env = std::getenv("SYMFLOW_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return std::min(v, 256);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
  }();
  return n;
}

void parallel_for(int n, const std::function<void(int, int)>& fn) {
  int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    if (n > 0) fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    int b = w * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, b, e);
  }
  for (auto& t : pool) t.join();
}

double poly_eval(const Poly& p, const std::array<double, 3>& x) {
  double s = 0;
  for (const auto& [a, c] : p) {
    double t = c;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < a[i]; ++k) t *= x[i];
    s += t;
  }
  return s;
}

double poly_max_abs_coeff(const Poly& p) {
  double m = 0;
  for (const auto& [a, c] : p) m = std::max(m, std::abs(c));
  return m;
}

int poly_degree(const Poly& p) {
  int d = 0;
  for (const auto& [a, c] : p)
    if (c != 0.0) d = std::max(d, mono_degree(a));
  return d;
}

Poly poly_add(const Poly& a, const Poly& b, double b_scale) {
  Poly out = a;
  for (const auto& [m, c] : b) out[m] += b_scale * c;
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Mono m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
      check_degree(mono_degree(m));
      out[m] += ca * cb;
    }
  return out;
}

Poly poly_derivative(const Poly& p, int axis) {
  Poly out;
  for (const auto& [m, c] : p) {
    if (m[axis] == 0) continue;
    Mono d = m;
    d[axis] -= 1;
    out[d] += c * m[axis];
  }
  return out;
}

Poly poly_compose_linear(const Poly& p, const OrthogonalTransform& q) {
  // Linear forms l_i(x) = (Q x)_i.
  std::array<Poly, 3> lin;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (q(i, j) != 0.0) lin[i][Mono{j == 0, j == 1, j == 2}] = q(i, j);

  Poly out;
  for (const auto& [m, c] : p) {
    Poly term{{Mono{0, 0, 0}, c}};
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < m[i]; ++k) term = poly_mul(term, lin[i]);
    out = poly_add(out, term);
  }
  return out;
}

Poly poly_pruned(const Poly& p) {
  double cut = kPruneRel * poly_max_abs_coeff(p);
  Poly out;
  for (const auto& [m, c] : p)
    if (std::abs(c) > cut) out[m] = c;
  return out;
}

double PolyGaussianField::max_abs_coeff() const {
  double m = 0;
  for (const auto& p : comp) m = std::max(m, poly_max_abs_coeff(p));
  return m;
}

int PolyGaussianField::degree() const {
  int d = 0;
  for (const auto& p : comp) d = std::max(d, poly_degree(p));
  return d;
}

bool PolyGaussianField::is_zero(double tol) const { return max_abs_coeff() <= tol; }

TransformMode transform_mode_from_string(const std::string& s) {
  if (s == "velocity" || s == "Velocity") return TransformMode::Velocity;
  if (s == "pseudo" || s == "Pseudo") return TransformMode::Pseudo;
  throw std::invalid_argument("unknown transform mode: " + s);
}

namespace {

void check_field(const PolyGaussianField& f) {
  if (f.dim != 2 && f.dim != 3) throw std::invalid_argument("field dim must be 2 or 3");
  if (f.envelope <= 0) throw std::invalid_argument("field envelope must be positive");
  std::size_t nc = f.comp.size();
  if (nc != 1 && nc != static_cast<std::size_t>(f.dim))
    throw std::invalid_argument("field must have 1 or dim components");
  if (f.dim == 2)
    for (const auto& p : f.comp)
      for (const auto& [m, c] : p)
        if (m[2] != 0) throw std::invalid_argument("2D field uses x3");
}

// d_axis (p * e^{-lambda r^2}) = (dp - 2 lambda x_axis p) e^{-lambda r^2}.
Poly envelope_derivative(const Poly& p, int axis, double lambda) {
  Mono xa{axis == 0, axis == 1, axis == 2};
  Poly shifted;
  for (const auto& [m, c] : p) {
    Mono s{m[0] + xa[0], m[1] + xa[1], m[2] + xa[2]};
    check_degree(mono_degree(s));
    shifted[s] = c;
  }
  return poly_add(poly_derivative(p, axis), shifted, -2.0 * lambda);
}

}  // namespace

std::vector<double> evaluate(const PolyGaussianField& f, const std::array<double, 3>& x) {
  check_field(f);
  double r2 = x[0] * x[0] + x[1] * x[1] + (f.dim == 3 ? x[2] * x[2] : 0.0);
  double env = std::exp(-f.envelope * r2);
  std::vector<double> out(f.comp.size());
  for (std::size_t c = 0; c < f.comp.size(); ++c) out[c] = env * poly_eval(f.comp[c], x);
  return out;
}

PolyGaussianField curl(const PolyGaussianField& f) {
  check_field(f);
  if (f.dim != 3 || f.is_scalar())
    throw std::invalid_argument("curl requires a 3D vector field (2D uses scalar vorticity)");
  PolyGaussianField out;
  out.dim = 3;
  out.envelope = f.envelope;
  out.comp.resize(3);
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    out.comp[i] = poly_pruned(poly_add(envelope_derivative(f.comp[k], j, f.envelope),
                                       envelope_derivative(f.comp[j], k, f.envelope), -1.0));
  }
  return out;
}

PolyGaussianField divergence(const PolyGaussianField& f) {
  check_field(f);
  if (f.is_scalar()) throw std::invalid_argument("divergence requires a vector field");
  PolyGaussianField out;
  out.dim = f.dim;
  out.envelope = f.envelope;
  Poly s;
  for (int i = 0; i < f.dim; ++i) s = poly_add(s, envelope_derivative(f.comp[i], i, f.envelope));
  out.comp.push_back(poly_pruned(s));
  return out;
}

PolyGaussianField transform(const PolyGaussianField& f, const OrthogonalTransform& p,
                            TransformMode mode) {
  check_field(f);
  if (p.dim != f.dim) throw std::invalid_argument("transform dim mismatch");
  double sign = (mode == TransformMode::Pseudo) ? p.det() : 1.0;

  PolyGaussianField out;
  out.dim = f.dim;
  out.envelope = f.envelope;  // |P x|^2 = |x|^2
  std::size_t nc = f.comp.size();
  out.comp.resize(nc);

  // Composed components f_j(P x), expanded in the monomial basis.
  std::vector<Poly> composed(nc);
  for (std::size_t j = 0; j < nc; ++j) composed[j] = poly_compose_linear(f.comp[j], p);

  if (f.is_scalar()) {
    out.comp[0] = poly_pruned(sign == 1.0 ? composed[0] : poly_add(Poly{}, composed[0], sign));
    return out;
  }
  // (P^T f(Px))_i = sum_j P_{ji} f_j(P x).
  for (int i = 0; i < f.dim; ++i) {
    Poly acc;
    for (int j = 0; j < f.dim; ++j)
      if (p(j, i) != 0.0) acc = poly_add(acc, composed[j], sign * p(j, i));
    out.comp[i] = poly_pruned(acc);
  }
  return out;
}

PolyGaussianField symmetrize(const PolyGaussianField& f, const SymmetryGroup& g,
                             TransformMode mode) {
  check_field(f);
  if (g.dim != f.dim) throw std::invalid_argument("symmetrize dim mismatch");
  PolyGaussianField acc;
  acc.dim = f.dim;
  acc.envelope = f.envelope;
  acc.comp.resize(f.comp.size());
  for (const auto& e : g.elements) {
    PolyGaussianField t = transform(f, e, mode);
    for (std::size_t c = 0; c < acc.comp.size(); ++c) acc.comp[c] = poly_add(acc.comp[c], t.comp[c]);
  }
  double inv = 1.0 / static_cast<double>(g.order());
  for (auto& p : acc.comp) {
    Poly scaled;
    for (const auto& [m, c] : p) scaled[m] = c * inv;
    p = poly_pruned(scaled);
  }
  return acc;
}

bool is_invariant(const PolyGaussianField& f, const SymmetryGroup& g, TransformMode mode,
                  double tol) {
  check_field(f);
  double scale = f.max_abs_coeff();
  for (const auto& e : g.elements) {
    PolyGaussianField t = transform(f, e, mode);
    for (std::size_t c = 0; c < f.comp.size(); ++c) {
      Poly diff = poly_add(t.comp[c], f.comp[c], -1.0);
      if (poly_max_abs_coeff(diff) > tol * scale) return false;
    }
  }
  return true;
}

PolyGaussianField field_add(const PolyGaussianField& a, const PolyGaussianField& b) {
  check_field(a);
  check_field(b);
  if (a.dim != b.dim || a.comp.size() != b.comp.size())
    throw std::invalid_argument("field_add shape mismatch");
  if (a.envelope != b.envelope)
    throw std::invalid_argument("field_add requires matching envelopes");
  PolyGaussianField out = a;
  for (std::size_t c = 0; c < out.comp.size(); ++c)
    out.comp[c] = poly_pruned(poly_add(out.comp[c], b.comp[c]));
  return out;
}

PolyGaussianField field_scale(const PolyGaussianField& f, double s) {
  PolyGaussianField out = f;
  for (auto& p : out.comp) {
    Poly scaled;
    for (const auto& [m, c] : p) scaled[m] = c * s;
    p = scaled;
  }
  return out;
}

namespace {

// Im((x1 + i x2)^n) and Re((x1 + i x2)^n) as integer-coefficient polynomials.
Poly harmonic_im(int n) {
  Poly out;
  double binom = 1.0;  // C(n, 0)
  for (int k = 0; k <= n; ++k) {
    if (k % 2 == 1) {
      double sign = ((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
      out[Mono{n - k, k, 0}] = sign * binom;
    }
    binom = binom * (n - k) / (k + 1);
  }
  return out;
}

Poly harmonic_re(int n) {
  Poly out;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k % 2 == 0) {
      double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
      out[Mono{n - k, k, 0}] = sign * binom;
    }
    binom = binom * (n - k) / (k + 1);
  }
  return out;
}

PolyGaussianField make_bar_b() {
  PolyGaussianField f;
  f.dim = 3;
  f.comp = {Poly{{{1, 2, 0}, 1.0}, {{1, 0, 2}, -1.0}},
            Poly{{{0, 1, 2}, 1.0}, {{2, 1, 0}, -1.0}},
            Poly{{{2, 0, 1}, 1.0}, {{0, 2, 1}, -1.0}}};
  return f;
}

PolyGaussianField make_tilde_b() {
  PolyGaussianField f;
  f.dim = 3;
  f.comp = {Poly{{{0, 3, 1}, 1.0}, {{0, 1, 3}, -1.0}},
            Poly{{{1, 0, 3}, 1.0}, {{3, 0, 1}, -1.0}},
            Poly{{{3, 1, 0}, 1.0}, {{1, 3, 0}, -1.0}}};
  return f;
}

PolyGaussianField make_prism_mu(int n) {
  if (n < 1 || n > 8) throw std::invalid_argument("prism builtins take n in [1, 8]");
  PolyGaussianField f;
  f.dim = 3;
  f.comp = {harmonic_im(2 * n)};
  return f;
}

PolyGaussianField make_prism_a(int n) {
  PolyGaussianField mu = make_prism_mu(n);
  PolyGaussianField f;
  f.dim = 3;
  f.comp = {poly_pruned(poly_add(Poly{}, envelope_derivative(mu.comp[0], 1, mu.envelope), -1.0)),
            poly_pruned(envelope_derivative(mu.comp[0], 0, mu.envelope)), Poly{}};
  return f;
}

PolyGaussianField make_icosahedral_a() {
  // Seed potential x x grad(x1^6 e^{-|x|^2}) = 6 x1^5 (0, x3, -x2) e^{-|x|^2}:
  // even polynomial degree (odd-degree potentials average to zero under Y_h),
  // and its pseudo-average is x x grad of the Reynolds average of x1^6, whose
  // icosahedral-harmonic part is non-zero.
  PolyGaussianField seed;
  seed.dim = 3;
  seed.comp = {Poly{}, Poly{{{5, 0, 1}, 6.0}}, Poly{{{5, 1, 0}, -6.0}}};
  static const SymmetryGroup yh = standard_group(GroupFamily::Yh, 0, 3);
  PolyGaussianField b = symmetrize(seed, yh, TransformMode::Pseudo);
  return curl(b);
}

}  // namespace

PolyGaussianField builtin_field(const std::string& name, int n) {
  if (name == "bar_b") return make_bar_b();
  if (name == "tilde_b") return make_tilde_b();
  if (name == "bar_a") return curl(make_bar_b());
  if (name == "tilde_a") return curl(make_tilde_b());
  if (name == "bar_plus_tilde_a") return field_add(curl(make_bar_b()), curl(make_tilde_b()));
  if (name == "prism_mu") return make_prism_mu(n);
  if (name == "prism_a") return make_prism_a(n);
  if (name == "icosahedral_a") return make_icosahedral_a();
  if (name == "dn_omega" || name == "cn_omega") {
    if (n < 1 || n > 12) throw std::invalid_argument(name + " takes n in [1, 12]");
    PolyGaussianField f;
    f.dim = 2;
    Poly p = harmonic_im(n);
    if (name == "cn_omega") p = poly_add(p, harmonic_re(n), 0.5);
    f.comp = {p};
    return f;
  }
  if (name == "radial_gauss") {
    PolyGaussianField f;
    f.dim = 2;
    f.comp = {Poly{{{0, 0, 0}, 1.0}}};
    return f;
  }
  std::string known;
  for (const auto& s : builtin_field_names()) known += (known.empty() ? "" : ", ") + s;
  throw std::invalid_argument("unknown builtin field '" + name + "' (known: " + known + ")");
}

std::vector<std::string> builtin_field_names() {
  return {"bar_b",    "tilde_b",  "bar_a",        "tilde_a", "bar_plus_tilde_a",
          "prism_mu", "prism_a",  "icosahedral_a", "dn_omega", "cn_omega",
          "radial_gauss"};
}

std::size_t GridField::points() const {
  std::size_t n = static_cast<std::size_t>(N);
  for (int i = 1; i < dim; ++i) n *= static_cast<std::size_t>(N);
  return n;
}

GridField sample_to_grid(const PolyGaussianField& f, int N, double L) {
  check_field(f);
  if (N < 4 || (N & (N - 1)) != 0) throw std::invalid_argument("N must be a power of two >= 4");
  if (L <= 0) throw std::invalid_argument("L must be positive");

  GridField g;
  g.dim = f.dim;
  g.N = N;
  g.L = L;
  g.comp.resize(f.comp.size());

  // Per-axis tables: coordinates, Gaussian factors, and coordinate powers.
  int maxdeg = f.degree();
  std::vector<double> coord(N), gauss(N);
  std::vector<std::vector<double>> powt(N, std::vector<double>(maxdeg + 1, 1.0));
  double dx = 2.0 * L / N;
  for (int i = 0; i < N; ++i) {
    coord[i] = -L + i * dx;
    gauss[i] = std::exp(-f.envelope * coord[i] * coord[i]);
    for (int d = 1; d <= maxdeg; ++d) powt[i][d] = powt[i][d - 1] * coord[i];
  }

  for (std::size_t c = 0; c < f.comp.size(); ++c) {
    const Poly& p = f.comp[c];
    std::vector<std::pair<Mono, double>> terms(p.begin(), p.end());
    auto& out = g.comp[c];
    out.assign(g.points(), 0.0);

    if (f.dim == 2) {
      parallel_for(N, [&](int y0, int y1) {
        for (int iy = y0; iy < y1; ++iy)
          for (int ix = 0; ix < N; ++ix) {
            double s = 0;
            for (const auto& [m, cf] : terms) s += cf * powt[ix][m[0]] * powt[iy][m[1]];
            out[static_cast<std::size_t>(iy) * N + ix] = s * gauss[ix] * gauss[iy];
          }
      });
    } else {
      parallel_for(N, [&](int z0, int z1) {
        for (int iz = z0; iz < z1; ++iz)
          for (int iy = 0; iy < N; ++iy) {
            std::size_t base = (static_cast<std::size_t>(iz) * N + iy) * N;
            double gyz = gauss[iy] * gauss[iz];
            for (int ix = 0; ix < N; ++ix) {
              double s = 0;
              for (const auto& [m, cf] : terms)
                s += cf * powt[ix][m[0]] * powt[iy][m[1]] * powt[iz][m[2]];
              out[base + ix] = s * gauss[ix] * gyz;
            }
          }
      });
    }
  }
  return g;
}

}  // namespace symflow
